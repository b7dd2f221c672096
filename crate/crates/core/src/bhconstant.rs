//! Bateman-Horn constants as ordered partial Euler products.
//!
//! The general product `prod_p (1 - 1/p)^-k (1 - ω(p)/p)` is only
//! conditionally convergent, so factors are always taken in ascending prime
//! order. Logarithms of the factors are accumulated with compensated
//! summation; parallel work is reduced in ascending order so the result does
//! not depend on the worker count or segment size.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::polynomial::PolyFamily;
use crate::primes::{factorize, gcd_u64, jacobi_u64, totient, SegmentedSieve, SieveConfig};
use crate::rootcount::FamilyOmega;
use crate::{CompensatedSum, Error, QuadraticViolation, Result};

/// Log-value drop per decade above which a trace is flagged as tending to zero.
pub const DIVERGE_TO_ZERO_THRESHOLD: f64 = 0.05;
/// Per-decade log-value change below which a shrinking trace counts as converging.
pub const CONVERGED_THRESHOLD: f64 = 1e-2;

/// Segments handed to the worker pool per ordered reduction step.
const SEGMENTS_PER_BATCH: usize = 8;

/// When partial products are recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "at")]
pub enum CheckpointSchedule {
    /// After all primes `<= b`, for each listed `b`.
    PrimeBounds(Vec<u64>),
    /// After the first `n` primes, for each listed `n`.
    PrimeCounts(Vec<u64>),
}

impl CheckpointSchedule {
    /// Powers of ten from 10^3 up to `bound`.
    pub fn decades(bound: u64) -> Self {
        let mut v = Vec::new();
        let mut b = 1_000u64;
        while b <= bound {
            v.push(b);
            match b.checked_mul(10) {
                Some(n) => b = n,
                None => break,
            }
        }
        CheckpointSchedule::PrimeBounds(v)
    }

    pub fn none() -> Self {
        CheckpointSchedule::PrimeBounds(Vec::new())
    }

    fn targets(&self) -> Vec<u64> {
        let mut v = match self {
            CheckpointSchedule::PrimeBounds(v) | CheckpointSchedule::PrimeCounts(v) => v.clone(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    /// Prime bound or prime count, depending on the schedule.
    pub at: u64,
    /// Largest prime included so far.
    pub last_prime: u64,
    /// Number of primes included so far.
    pub primes: u64,
    pub value: f64,
    pub log_value: f64,
}

/// Heuristic reading of a checkpoint trace; evidence, not proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converging,
    DivergingToZeroSuspected,
    DivergingSuspected,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantEstimate {
    pub family: String,
    pub k: usize,
    pub prime_bound: u64,
    pub primes_used: u64,
    pub value: f64,
    pub log_value: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct ConstantOptions {
    /// Evaluate even if the family fails the admissibility hypotheses.
    pub allow_override: bool,
    pub sieve: SieveConfig,
}

/// Run an ordered log-product over the primes `<= bound`.
///
/// `log_factor(p)` returns the log of the factor at `p`; factors are computed
/// in parallel batches and summed strictly in ascending prime order.
fn ordered_log_product<F>(
    bound: u64,
    schedule: &CheckpointSchedule,
    sieve_config: &SieveConfig,
    log_factor: F,
) -> Result<(CompensatedSum, u64, Vec<Checkpoint>)>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let counts = matches!(schedule, CheckpointSchedule::PrimeCounts(_));
    let targets = schedule.targets();
    let mut next_target = 0usize;
    let mut sum = CompensatedSum::new();
    let mut used = 0u64;
    let mut last_prime = 0u64;
    let mut checkpoints = Vec::new();

    let mut record = |sum: &CompensatedSum, at: u64, used: u64, last: u64| {
        let log_value = sum.value();
        checkpoints.push(Checkpoint {
            at,
            last_prime: last,
            primes: used,
            value: log_value.exp(),
            log_value,
        });
    };

    if bound >= 2 {
        let sieve = SegmentedSieve::new(2, bound + 1, sieve_config)?;
        let n = sieve.num_segments();
        let mut start = 0;
        'outer: while start < n {
            let end = (start + SEGMENTS_PER_BATCH).min(n);
            let batch: Vec<Result<Vec<(u64, f64)>>> = (start..end)
                .into_par_iter()
                .map(|i| {
                    sieve
                        .segment(i)
                        .iter()
                        .map(|p| log_factor(p).map(|t| (p, t)))
                        .collect()
                })
                .collect();
            for seg in batch {
                for (p, term) in seg? {
                    if !counts {
                        while next_target < targets.len() && targets[next_target] < p {
                            record(&sum, targets[next_target], used, last_prime);
                            next_target += 1;
                        }
                    }
                    sum.add(term);
                    used += 1;
                    last_prime = p;
                    if counts {
                        while next_target < targets.len() && targets[next_target] == used {
                            record(&sum, used, used, last_prime);
                            next_target += 1;
                        }
                        if next_target == targets.len() && !targets.is_empty() {
                            break 'outer;
                        }
                    }
                }
            }
            start = end;
        }
    }
    if !counts {
        while next_target < targets.len() && targets[next_target] <= bound {
            record(&sum, targets[next_target], used, last_prime);
            next_target += 1;
        }
    }
    Ok((sum, used, checkpoints))
}

fn verdict_if_possible(checkpoints: &[Checkpoint]) -> Option<Verdict> {
    divergence_diagnostic(checkpoints).ok()
}

/// `C(f_1..f_k) ≈ prod_{p <= bound} (1 - 1/p)^-k (1 - ω(p)/p)` for an admissible family.
pub fn bh_constant(
    family: &PolyFamily,
    prime_bound: u64,
    schedule: &CheckpointSchedule,
) -> Result<ConstantEstimate> {
    bh_constant_with(family, prime_bound, schedule, &ConstantOptions::default())
}

pub fn bh_constant_with(
    family: &PolyFamily,
    prime_bound: u64,
    schedule: &CheckpointSchedule,
    options: &ConstantOptions,
) -> Result<ConstantEstimate> {
    if prime_bound < 2 {
        return Err(Error::Domain(format!(
            "prime bound must be >= 2, got {prime_bound}"
        )));
    }
    family.require_admissible(options.allow_override)?;
    let omega = FamilyOmega::new(family);
    let k = family.k() as f64;
    let (sum, used, checkpoints) =
        ordered_log_product(prime_bound, schedule, &options.sieve, |p| {
            let (w, _) = omega.count_unchecked(p);
            if w >= p {
                return Err(Error::Inadmissible(format!(
                    "factor at p = {p} is zero: the product vanishes identically modulo {p}"
                )));
            }
            let pf = p as f64;
            Ok(-k * (-1.0 / pf).ln_1p() + (-(w as f64) / pf).ln_1p())
        })?;
    let log_value = sum.value();
    Ok(ConstantEstimate {
        family: family.describe(),
        k: family.k(),
        prime_bound,
        primes_used: used,
        value: log_value.exp(),
        log_value,
        verdict: verdict_if_possible(&checkpoints),
        checkpoints,
        tail_bound: None,
    })
}

/// Classify a checkpoint trace (at least 4 checkpoints spanning 3 decades).
///
/// * every one of the last three log-steps falls by more than
///   [`DIVERGE_TO_ZERO_THRESHOLD`]: diverging to zero;
/// * all of the last three step magnitudes are below [`CONVERGED_THRESHOLD`]
///   and the final one does not exceed the larger of the two before it:
///   converging. Steps of order 1e-4 wobble in sign and size, so only the
///   envelope is required to shrink;
/// * otherwise: diverging.
pub fn divergence_diagnostic(checkpoints: &[Checkpoint]) -> Result<Verdict> {
    if checkpoints.len() < 4 {
        return Err(Error::InsufficientCheckpoints(format!(
            "need at least 4, got {}",
            checkpoints.len()
        )));
    }
    let first = checkpoints[0].at.max(1) as f64;
    let last = checkpoints[checkpoints.len() - 1].at as f64;
    if last / first < 999.5 {
        return Err(Error::InsufficientCheckpoints(
            "checkpoints must span at least three decades".into(),
        ));
    }
    let tail = &checkpoints[checkpoints.len() - 4..];
    let deltas: Vec<f64> = tail
        .windows(2)
        .map(|w| w[1].log_value - w[0].log_value)
        .collect();
    if deltas.iter().all(|&d| d < -DIVERGE_TO_ZERO_THRESHOLD) {
        return Ok(Verdict::DivergingToZeroSuspected);
    }
    let small = deltas.iter().all(|d| d.abs() < CONVERGED_THRESHOLD);
    let shrinking = deltas[2].abs() <= deltas[0].abs().max(deltas[1].abs());
    if small && shrinking {
        Ok(Verdict::Converging)
    } else {
        Ok(Verdict::DivergingSuspected)
    }
}

/// Exact constant `a / φ(a)` for primes in the progression `b mod a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApConstant {
    pub ratio: Ratio<u64>,
}

impl ApConstant {
    pub fn value(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

pub fn ap_constant(a: u64, b: i64) -> Result<ApConstant> {
    if a == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let g = gcd_u64(a, b.unsigned_abs());
    if g != 1 {
        return Err(Error::Inadmissible(format!(
            "gcd({a}, {b}) = {g}: the progression contains at most one prime"
        )));
    }
    Ok(ApConstant {
        ratio: Ratio::new(a, totient(a)?),
    })
}

/// Prime pair constant `C_k` with a rigorous bound on the truncated tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CkConstant {
    pub k: u64,
    pub prime_bound: u64,
    pub value: f64,
    /// `0 <= value - C_k <= tail_bound`.
    pub tail_bound: f64,
}

/// `C_k = prod_{p | k, p >= 3} p/(p-1) * prod_{p ∤ k} (1 - 1/(p-1)^2)`.
pub fn ck_constant(k: u64, prime_bound: u64) -> Result<CkConstant> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Domain(format!(
            "C_k is defined for even positive k only, got {k}"
        )));
    }
    if prime_bound < 3 {
        return Err(Error::Domain(format!(
            "prime bound must be >= 3, got {prime_bound}"
        )));
    }
    let divisors: Vec<u64> = factorize(k).into_iter().map(|(p, _)| p).collect();
    let mut sum = CompensatedSum::new();
    for &p in divisors.iter().filter(|&&p| p > prime_bound) {
        sum.add(-(-1.0 / p as f64).ln_1p());
    }
    let (tail_sum, _, _) = ordered_log_product(
        prime_bound,
        &CheckpointSchedule::none(),
        &SieveConfig::default(),
        |p| {
            Ok(if p == 2 {
                0.0
            } else if divisors.binary_search(&p).is_ok() {
                -(-1.0 / p as f64).ln_1p()
            } else {
                let q = (p - 1) as f64;
                (-1.0 / (q * q)).ln_1p()
            })
        },
    )?;
    sum.add(tail_sum.value());
    let value = sum.value().exp();
    Ok(CkConstant {
        k,
        prime_bound,
        value,
        tail_bound: 2.0 * value / (prime_bound - 1) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlfConstant {
    /// 1/2 when `a + b` is odd, otherwise 1.
    pub epsilon: f64,
    /// The Bateman-Horn constant `C(a t^2 + b t + c)`.
    pub value: f64,
    pub prime_bound: u64,
}

/// Closed form of the Bateman-Horn constant for `a t^2 + b t + c`:
/// `2ε prod_{p >= 3, p | gcd(a,b)} p/(p-1) prod_{3 <= p <= bound, p ∤ a} (1 - (Δ/p)/(p-1))`.
pub fn hlf_constant(a: i64, b: i64, c: i64, prime_bound: u64) -> Result<HlfConstant> {
    if a <= 0 {
        return Err(Error::Quadratic(QuadraticViolation::NonPositiveLeading(a)));
    }
    let g = gcd_u64(
        gcd_u64(a.unsigned_abs(), b.unsigned_abs()),
        c.unsigned_abs(),
    );
    if g != 1 {
        return Err(Error::Quadratic(QuadraticViolation::CommonDivisor(g)));
    }
    if (a + b) % 2 == 0 && c % 2 == 0 {
        return Err(Error::Quadratic(QuadraticViolation::BothEven));
    }
    let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
    if disc >= 0 {
        let s = (disc as u128).sqrt();
        if s * s == disc as u128 {
            return Err(Error::Quadratic(QuadraticViolation::SquareDiscriminant(
                disc,
            )));
        }
    }
    let epsilon = if (a + b) % 2 != 0 { 0.5 } else { 1.0 };
    let mut sum = CompensatedSum::new();
    let ab = gcd_u64(a.unsigned_abs(), b.unsigned_abs());
    let ab_primes: Vec<u64> = if ab > 1 {
        factorize(ab)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|&p| p >= 3)
            .collect()
    } else {
        Vec::new()
    };
    for &p in &ab_primes {
        sum.add(-(-1.0 / p as f64).ln_1p());
    }
    let a_abs = a.unsigned_abs();
    let (product, _, _) = ordered_log_product(
        prime_bound,
        &CheckpointSchedule::none(),
        &SieveConfig::default(),
        |p| {
            if p == 2 || a_abs % p == 0 {
                return Ok(0.0);
            }
            let r = disc.rem_euclid(p as i128) as u64;
            let chi = jacobi_u64(r, p) as f64;
            Ok((-chi / (p - 1) as f64).ln_1p())
        },
    )?;
    sum.add(product.value());
    Ok(HlfConstant {
        epsilon,
        value: 2.0 * epsilon * sum.value().exp(),
        prime_bound,
    })
}

/// Constant for the family `t, t + step, ..., t + (k-1) step`, where
/// ω(p) = 1 if `p | step` and `min(k, p)` otherwise.
pub fn ap_family_constant(k: u32, step: u64, prime_bound: u64) -> Result<f64> {
    if k == 0 || step == 0 {
        return Err(Error::Domain("k and step must be positive".into()));
    }
    let kf = k as f64;
    let (sum, _, _) = ordered_log_product(
        prime_bound,
        &CheckpointSchedule::none(),
        &SieveConfig::default(),
        |p| {
            let w = if step % p == 0 { 1 } else { (k as u64).min(p) };
            if w == p {
                return Err(Error::Inadmissible(format!(
                    "the progression family vanishes identically modulo {p}"
                )));
            }
            let pf = p as f64;
            Ok(-kf * (-1.0 / pf).ln_1p() + (-(w as f64) / pf).ln_1p())
        },
    )?;
    Ok(sum.value().exp())
}

/// Constant for `t, t + a, ..., t + (k-1) a` with `a` the product of the first `k` primes:
/// `prod_{n <= k} (1 - 1/p_n)^(1-k) prod_{p > p_k} (1 - 1/p)^-k (1 - k/p)`.
pub fn greentao_constant(k: u32, prime_bound: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let kf = k as f64;
    let last_small = crate::primes::nth_prime(k as u64)?;
    let (sum, _, _) = ordered_log_product(
        prime_bound,
        &CheckpointSchedule::none(),
        &SieveConfig::default(),
        |p| {
            let pf = p as f64;
            Ok(if p <= last_small {
                (kf - 1.0) * -(-1.0 / pf).ln_1p()
            } else {
                -kf * (-1.0 / pf).ln_1p() + (-kf / pf).ln_1p()
            })
        },
    )?;
    Ok(sum.value().exp())
}

/// Product of the first `k` primes.
pub fn primorial(k: u32) -> Result<BigInt> {
    if k == 0 {
        return Ok(BigInt::from(1));
    }
    let last = crate::primes::nth_prime(k as u64)?;
    Ok(crate::primes::primes_up_to(last)
        .into_iter()
        .fold(BigInt::from(1), |acc, p| acc * p))
}

/// Whether `n` is a perfect square (negative values never are).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{check_family, IntPoly};

    fn fam(v: &[&str]) -> PolyFamily {
        check_family(
            &v.iter()
                .map(|s| s.parse::<IntPoly>().unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn twin_family_matches_two_c2() {
        let est = bh_constant(&fam(&["t", "t+2"]), 100_000, &CheckpointSchedule::none()).unwrap();
        let c2 = ck_constant(2, 100_000).unwrap();
        assert!((est.value - 2.0 * c2.value).abs() < 1e-12);
    }

    #[test]
    fn schedule_by_counts() {
        let opts = ConstantOptions {
            allow_override: true,
            ..Default::default()
        };
        let est = bh_constant_with(
            &fam(&["t^2-1"]),
            1000,
            &CheckpointSchedule::PrimeCounts(vec![10]),
            &opts,
        )
        .unwrap();
        assert_eq!(est.checkpoints.len(), 1);
        assert_eq!(est.checkpoints[0].last_prime, 29);
        let direct: f64 = [3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0]
            .iter()
            .map(|p: &f64| 1.0 - 1.0 / (p - 1.0))
            .product();
        assert!((est.checkpoints[0].value - direct).abs() < 1e-14);
        assert!((direct - 0.210114).abs() < 1e-6);
    }

    #[test]
    fn inadmissible_rejected_unless_overridden() {
        let f = fam(&["t^2-1"]);
        assert!(matches!(
            bh_constant(&f, 100, &CheckpointSchedule::none()),
            Err(Error::Inadmissible(_))
        ));
        let f = fam(&["t", "t+1"]);
        let opts = ConstantOptions {
            allow_override: true,
            ..Default::default()
        };
        let err = bh_constant_with(&f, 100, &CheckpointSchedule::none(), &opts).unwrap_err();
        assert!(err.to_string().contains("p = 2"));
    }

    #[test]
    fn checkpoints_by_bound() {
        let est = bh_constant(
            &fam(&["t^2+1"]),
            10_000,
            &CheckpointSchedule::decades(10_000),
        )
        .unwrap();
        let at: Vec<u64> = est.checkpoints.iter().map(|c| c.at).collect();
        assert_eq!(at, vec![1000, 10_000]);
        assert_eq!(est.checkpoints[0].primes, 168);
        assert_eq!(est.checkpoints[1].primes, 1229);
        assert_eq!(est.checkpoints[1].value, est.value);
    }

    #[test]
    fn diagnostic_needs_enough_points() {
        let cp = |at, log_value| Checkpoint {
            at,
            last_prime: 0,
            primes: 0,
            value: f64::exp(log_value),
            log_value,
        };
        assert!(divergence_diagnostic(&[cp(10, 0.0), cp(100, 0.0), cp(1000, 0.0)]).is_err());
        assert!(
            divergence_diagnostic(&[cp(10, 0.0), cp(20, 0.0), cp(30, 0.0), cp(40, 0.0)]).is_err()
        );
        let falling = [
            cp(10, -1.0),
            cp(100, -1.5),
            cp(1000, -2.0),
            cp(10_000, -2.4),
        ];
        assert_eq!(
            divergence_diagnostic(&falling).unwrap(),
            Verdict::DivergingToZeroSuspected
        );
        let settling = [
            cp(10, 0.3),
            cp(100, 0.305),
            cp(1000, 0.308),
            cp(10_000, 0.309),
        ];
        assert_eq!(
            divergence_diagnostic(&settling).unwrap(),
            Verdict::Converging
        );
        let growing = [cp(10, 0.3), cp(100, 0.5), cp(1000, 0.7), cp(10_000, 0.9)];
        assert_eq!(
            divergence_diagnostic(&growing).unwrap(),
            Verdict::DivergingSuspected
        );
        let widening = [
            cp(10, 0.3),
            cp(100, 0.301),
            cp(1000, 0.303),
            cp(10_000, 0.309),
        ];
        assert_eq!(
            divergence_diagnostic(&widening).unwrap(),
            Verdict::DivergingSuspected
        );
        let wobbling = [
            cp(10, 0.3),
            cp(100, 0.301),
            cp(1000, 0.2985),
            cp(10_000, 0.299),
        ];
        assert_eq!(
            divergence_diagnostic(&wobbling).unwrap(),
            Verdict::Converging
        );
    }

    #[test]
    fn ap_constants() {
        assert_eq!(ap_constant(4, 3).unwrap().ratio, Ratio::new(2, 1));
        assert_eq!(ap_constant(1, 0).unwrap().value(), 1.0);
        assert_eq!(
            ap_constant(100_000_000, 123_456_789).unwrap().ratio,
            Ratio::new(5, 2)
        );
        assert!(ap_constant(6, 4).is_err());
        assert_eq!(ap_constant(6, 1).unwrap(), ap_constant(6, -5).unwrap());
    }

    #[test]
    fn ck_rejects_odd() {
        assert!(ck_constant(3, 1000).is_err());
        assert!(ck_constant(0, 1000).is_err());
    }

    #[test]
    fn hlf_violations_are_named() {
        use QuadraticViolation::*;
        let v = |r: Result<HlfConstant>| match r {
            Err(Error::Quadratic(v)) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(v(hlf_constant(1, 0, -1, 100)), SquareDiscriminant(4));
        assert_eq!(v(hlf_constant(1, 1, 2, 100)), BothEven);
        assert_eq!(v(hlf_constant(2, 4, 6, 100)), CommonDivisor(2));
        assert_eq!(v(hlf_constant(-1, 0, 3, 100)), NonPositiveLeading(-1));
    }

    #[test]
    fn greentao_small_cases() {
        assert!((greentao_constant(1, 100_000).unwrap() - 1.0).abs() < 1e-15);
        let c2 = ck_constant(2, 100_000).unwrap().value;
        assert!((ap_family_constant(2, 2, 100_000).unwrap() - 2.0 * c2).abs() < 1e-12);
        // a = 6 for k = 2 is the sexy-prime constant 2 C_6 = 4 C_2
        assert!((greentao_constant(2, 100_000).unwrap() - 4.0 * c2).abs() < 1e-12);
        assert!(ap_family_constant(3, 2, 1000).is_err());
        assert_eq!(primorial(3).unwrap(), BigInt::from(30));
    }

    #[test]
    fn squares() {
        assert!(is_perfect_square(&BigInt::from(32 * 32)));
        assert!(!is_perfect_square(&BigInt::from(32)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
    }
}
