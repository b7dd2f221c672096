//! Empirical prime counts: polynomial families, progressions, prime pairs,
//! Sophie Germain primes, Cunningham chains and Brun partial sums.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{predict_with_constant, Prediction};
use crate::polynomial::{check_family, IntPoly, PolyFamily};
use crate::primes::{
    gcd_u64, is_prime_big, is_prime_u64, nth_prime, sieve_range, Primality, SegmentedSieve,
    SieveConfig,
};
use crate::{CompensatedSum, Error, Result};

/// Miller-Rabin rounds for values beyond 64 bits.
pub const BIG_PRIME_ROUNDS: u32 = 40;
/// Upper end of the 1962 ILLIAC search, `p < 113000`.
pub const ILLIAC_BOUND: u64 = 112_999;

const CHUNK: u64 = 1 << 15;

/// What range a count covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CountRange {
    /// `1 <= n <= x` for polynomial counts, primes `<= x` otherwise.
    UpTo { x: u64 },
    /// Primes among the first `n` primes.
    FirstPrimes { n: u64, last_prime: u64 },
}

impl CountRange {
    pub fn limit(&self) -> u64 {
        match *self {
            CountRange::UpTo { x } => x,
            CountRange::FirstPrimes { last_prime, .. } => last_prime,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub subject: String,
    pub range: CountRange,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<Prediction>,
    /// `count / prediction.predicted`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CountReport {
    fn new(subject: String, range: CountRange, count: u64, started: Instant) -> Self {
        CountReport {
            subject,
            range,
            count,
            prediction: None,
            ratio: None,
            elapsed: started.elapsed(),
        }
    }

    pub fn with_prediction(mut self, prediction: Prediction) -> Self {
        self.ratio = Some(self.count as f64 / prediction.predicted);
        self.prediction = Some(prediction);
        self
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    pub allow_override: bool,
}

/// A member polynomial prepared for fast evaluation.
struct Evaluator {
    poly: IntPoly,
    small: Option<Vec<i128>>,
}

impl Evaluator {
    fn new(poly: &IntPoly) -> Self {
        let small = poly.coeffs().iter().map(|c| c.to_i128()).collect();
        Evaluator {
            poly: poly.clone(),
            small,
        }
    }

    fn small_value(&self, n: u64) -> Option<i128> {
        let coeffs = self.small.as_ref()?;
        let n = n as i128;
        let mut acc: i128 = 0;
        for c in coeffs.iter().rev() {
            acc = acc.checked_mul(n)?.checked_add(*c)?;
        }
        Some(acc)
    }

    fn is_prime_at(&self, n: u64) -> bool {
        match self.small_value(n) {
            Some(v) if v < 2 => false,
            Some(v) if v <= u64::MAX as i128 => is_prime_u64(v as u64),
            _ => {
                let v = self.poly.eval(&BigInt::from(n));
                v > BigInt::from(1)
                    && is_prime_big(&v, BIG_PRIME_ROUNDS) == Primality::ProbablePrime
            }
        }
    }
}

/// `Q(f_1..f_k; x) = #{1 <= n <= x : every f_i(n) is prime}`.
pub fn count_q(family: &PolyFamily, x: u64) -> Result<CountReport> {
    count_q_with(family, x, &CountOptions::default())
}

pub fn count_q_with(family: &PolyFamily, x: u64, options: &CountOptions) -> Result<CountReport> {
    family.require_admissible(options.allow_override)?;
    let started = Instant::now();
    let mut evaluators: Vec<Evaluator> = family.members().iter().map(Evaluator::new).collect();
    // Slow-growing members first: they are the cheapest to test and reject
    // most often.
    evaluators.sort_by(|a, b| {
        (a.poly.deg(), a.poly.leading().magnitude().clone())
            .cmp(&(b.poly.deg(), b.poly.leading().magnitude().clone()))
    });
    let chunks = x.div_ceil(CHUNK);
    let count = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(x);
            (lo..=hi)
                .filter(|&n| evaluators.iter().all(|e| e.is_prime_at(n)))
                .count() as u64
        })
        .sum();
    Ok(CountReport::new(
        family.describe(),
        CountRange::UpTo { x },
        count,
        started,
    ))
}

/// Attach the prediction `C / prod deg f_i * ∫_2^x dt / (log t)^k` to a count.
pub fn with_constant(
    report: CountReport,
    family: &PolyFamily,
    constant: f64,
) -> Result<CountReport> {
    let x = report.range.limit() as f64;
    Ok(report.with_prediction(predict_with_constant(family, constant, x.max(2.0))?))
}

fn parallel_count(lo: u64, hi: u64, pred: impl Fn(u64) -> bool + Sync) -> Result<u64> {
    if hi <= lo {
        return Ok(0);
    }
    let sieve = SegmentedSieve::new(lo, hi, &SieveConfig::default())?;
    Ok((0..sieve.num_segments())
        .into_par_iter()
        .map(|i| sieve.segment(i).iter().filter(|&p| pred(p)).count() as u64)
        .sum())
}

/// Primes `p <= x` with `p ≡ b (mod a)`.
pub fn count_ap(a: u64, b: i64, x: u64) -> Result<CountReport> {
    if a == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let g = gcd_u64(a, b.unsigned_abs());
    if g != 1 {
        return Err(Error::Inadmissible(format!(
            "gcd({a}, {b}) = {g}: the progression is prime for at most one term"
        )));
    }
    let started = Instant::now();
    let r = b.rem_euclid(a as i64) as u64;
    let count = parallel_count(2, x.saturating_add(1), |p| p % a == r)?;
    Ok(CountReport::new(
        format!("p ≡ {r} (mod {a})"),
        CountRange::UpTo { x },
        count,
        started,
    ))
}

/// Primes of the form `n^2 + 1` not exceeding `x`.
pub fn count_landau(x: u64) -> Result<CountReport> {
    let started = Instant::now();
    let n = if x < 2 { 0 } else { (x - 1).sqrt() };
    let family = landau_family();
    let mut report = count_q(&family, n)?;
    report.subject = format!("n^2+1 <= {x}");
    report.range = CountRange::UpTo { x };
    report.elapsed = started.elapsed();
    Ok(report)
}

pub fn landau_family() -> PolyFamily {
    check_family(&[IntPoly::from_i64s(&[1, 0, 1])]).expect("t^2+1 is a valid family")
}

/// How far a pair count runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    Bound(u64),
    FirstPrimes(u64),
}

/// `π_k`: primes `p` in range with `p + k` also prime (`p + k` may exceed the range).
pub fn count_pairs(k: u64, mode: PairMode) -> Result<CountReport> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Inadmissible(format!(
            "k = {k}: pairs p, p + k with odd k contain at most one prime pair"
        )));
    }
    let started = Instant::now();
    let range = match mode {
        PairMode::Bound(x) => CountRange::UpTo { x },
        PairMode::FirstPrimes(n) => CountRange::FirstPrimes {
            n,
            last_prime: nth_prime(n)?,
        },
    };
    let limit = range.limit();
    let count = if limit < 2 {
        0
    } else {
        let hi = limit
            .checked_add(k + 1)
            .ok_or_else(|| Error::Range("pair range overflows 64 bits".into()))?;
        let flags = sieve_range(0, hi)?;
        let flags = &flags;
        let chunks = (limit + 1).div_ceil(1 << 20);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c << 20;
                let hi = ((c + 1) << 20).min(limit + 1);
                (lo..hi)
                    .filter(|&p| flags.is_prime(p) && flags.is_prime(p + k))
                    .count() as u64
            })
            .sum()
    };
    Ok(CountReport::new(format!("p, p+{k}"), range, count, started))
}

/// Sophie Germain primes `p <= x` (`2p + 1` also prime).
pub fn count_sophie(x: u64) -> Result<CountReport> {
    let started = Instant::now();
    let count = if x < 2 {
        0
    } else {
        let hi = x
            .checked_mul(2)
            .and_then(|v| v.checked_add(2))
            .ok_or_else(|| Error::Range("Sophie Germain range overflows 64 bits".into()))?;
        let flags = sieve_range(0, hi)?;
        parallel_count(2, x + 1, |p| flags.is_prime(2 * p + 1))?
    };
    Ok(CountReport::new(
        "p, 2p+1".into(),
        CountRange::UpTo { x },
        count,
        started,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    /// `p -> 2p + 1`
    First,
    /// `p -> 2p - 1`
    Second,
}

impl ChainKind {
    fn step(self, p: u64) -> Option<u64> {
        match self {
            ChainKind::First => p.checked_mul(2)?.checked_add(1),
            ChainKind::Second => p.checked_mul(2)?.checked_sub(1),
        }
    }

    /// Inverse of [`step`](Self::step), if it lands on an integer.
    fn predecessor(self, p: u64) -> Option<u64> {
        match self {
            ChainKind::First if p % 2 == 1 => Some((p - 1) / 2),
            ChainKind::Second if p % 2 == 1 => Some((p + 1) / 2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub kind: ChainKind,
    pub elements: Vec<u64>,
    /// False when the next step would overflow 64 bits and was not tested.
    pub complete: bool,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn first(&self) -> u64 {
        self.elements[0]
    }
}

/// Every maximal Cunningham chain whose first element is at most `search_bound`
/// and whose length is at least `min_length`, ordered by first element.
pub fn cunningham_chains(
    kind: ChainKind,
    search_bound: u64,
    min_length: usize,
) -> Result<Vec<Chain>> {
    if search_bound < 2 {
        return Ok(Vec::new());
    }
    let sieve = SegmentedSieve::new(2, search_bound.saturating_add(1), &SieveConfig::default())?;
    let per_segment: Vec<Vec<Chain>> = (0..sieve.num_segments())
        .into_par_iter()
        .map(|i| {
            sieve
                .segment(i)
                .iter()
                .filter(|&p| !kind.predecessor(p).is_some_and(is_prime_u64))
                .filter_map(|seed| {
                    let chain = follow_chain(kind, seed);
                    (chain.len() >= min_length).then_some(chain)
                })
                .collect()
        })
        .collect();
    Ok(per_segment.into_iter().flatten().collect())
}

fn follow_chain(kind: ChainKind, seed: u64) -> Chain {
    let mut elements = vec![seed];
    let mut p = seed;
    loop {
        match kind.step(p) {
            Some(q) if is_prime_u64(q) => {
                elements.push(q);
                p = q;
            }
            Some(_) => {
                return Chain {
                    kind,
                    elements,
                    complete: true,
                }
            }
            None => {
                return Chain {
                    kind,
                    elements,
                    complete: false,
                }
            }
        }
    }
}

/// `sum_{p <= x, p + 2 prime} (1/p + 1/(p + 2))`.
pub fn brun_partial(x: u64) -> Result<f64> {
    if x < 3 {
        return Ok(0.0);
    }
    let hi = x
        .checked_add(3)
        .ok_or_else(|| Error::Range("Brun range overflows 64 bits".into()))?;
    let flags = sieve_range(0, hi)?;
    let mut sum = CompensatedSum::new();
    for p in flags.iter().take_while(|&p| p <= x) {
        if flags.is_prime(p + 2) {
            sum.add(1.0 / p as f64);
            sum.add(1.0 / (p + 2) as f64);
        }
    }
    Ok(sum.value())
}

/// Primes `p < 113000` with `p^2 + p + 1` prime, i.e. `Q(t, t^2+t+1; 112999)`.
pub fn illiac_count() -> Result<CountReport> {
    let family = check_family(&[IntPoly::t(), IntPoly::from_i64s(&[1, 1, 1])])?;
    count_q(&family, ILLIAC_BOUND)
}
