//! Admissibility of polynomial families: irreducibility, positivity, fixed
//! divisors, and the precomputed product and pairwise resultants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{family_product, resultant, CoeffResidues, IntPoly};
use crate::primes::{factorize, primes_up_to};
use crate::{gfp, Error, Result};

/// Number of primes tried when looking for a mod-p irreducibility certificate.
const CERTIFICATE_PRIMES: usize = 25;
/// Cap on candidate rational roots examined before giving up.
const MAX_RATIONAL_CANDIDATES: usize = 1 << 20;

/// gcd of `f(0), f(1), ..., f(deg f)`; divides `f(n)` for every integer `n`.
pub fn fixed_divisor(f: &IntPoly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok((0..=f.deg())
        .map(|n| f.eval(&BigInt::from(n)))
        .fold(BigInt::zero(), |g, v| g.gcd(&v)))
}

fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::Domain("zero has every prime as a divisor".into()));
    }
    let mut out = Vec::new();
    if n.to_u64().is_none() {
        for p in primes_up_to(1_000_000) {
            let bp = BigInt::from(p);
            if (&n % &bp).is_zero() {
                out.push(p);
                while (&n % &bp).is_zero() {
                    n /= &bp;
                }
            }
        }
    }
    match n.to_u64() {
        Some(m) => {
            out.extend(factorize(m).into_iter().map(|(p, _)| p));
            out.sort_unstable();
            out.dedup();
            Ok(out)
        }
        None => Err(Error::Range(format!(
            "cannot factor fixed divisor cofactor {n}"
        ))),
    }
}

/// Primes modulo which `f` vanishes identically: the prime divisors of the fixed divisor.
pub fn vanishing_primes(f: &IntPoly) -> Result<Vec<u64>> {
    prime_divisors(&fixed_divisor(f)?)
}

/// `b^2 - 4ac` of a quadratic `a t^2 + b t + c`.
pub fn discriminant_quadratic(f: &IntPoly) -> Result<BigInt> {
    if f.degree() != Some(2) {
        return Err(Error::Degree {
            expected: 2,
            found: f.deg(),
        });
    }
    let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
    Ok(&b * &b - 4 * a * c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Reducible over the integers; `witness` is a proper factor.
    Reducible {
        witness: IntPoly,
    },
    Unknown,
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irreducibility::Irreducible => write!(f, "irreducible"),
            Irreducibility::Reducible { witness } => write!(f, "reducible (factor {witness})"),
            Irreducibility::Unknown => write!(f, "unknown"),
        }
    }
}

impl Serialize for Irreducibility {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

/// A rational root `u / v` of `f` as the primitive factor `v t - u`, when the
/// candidate set is small enough to search exhaustively. `Err(())` when infeasible.
fn rational_root_factor(f: &IntPoly) -> std::result::Result<Option<IntPoly>, ()> {
    let lead = f.leading().abs().to_u64().ok_or(())?;
    let constant = f.coeff(0).abs().to_u64().ok_or(())?;
    debug_assert!(constant != 0);
    let us = divisors(constant);
    let vs = divisors(lead);
    if us.len() * vs.len() * 2 > MAX_RATIONAL_CANDIDATES {
        return Err(());
    }
    let d = f.deg();
    for &v in &vs {
        let bv = BigInt::from(v);
        for &u in &us {
            if num_integer::gcd(u, v) != 1 {
                continue;
            }
            for u in [BigInt::from(u), -BigInt::from(u)] {
                // v^d f(u/v) = sum c_i u^i v^(d-i)
                let value = f
                    .coeffs()
                    .iter()
                    .enumerate()
                    .fold(BigInt::zero(), |acc, (i, c)| {
                        acc + c * num_traits::pow(u.clone(), i) * num_traits::pow(bv.clone(), d - i)
                    });
                if value.is_zero() {
                    return Ok(Some(IntPoly::new(vec![-u, bv.clone()])));
                }
            }
        }
    }
    Ok(None)
}

fn has_mod_p_certificate(f: &IntPoly) -> bool {
    let residues = CoeffResidues::new(f);
    let lead = f.leading();
    primes_up_to(200)
        .into_iter()
        .filter(|&p| !(&lead % BigInt::from(p)).is_zero())
        .take(CERTIFICATE_PRIMES)
        .any(|p| gfp::is_irreducible(&residues.reduce(p), p))
}

/// Irreducibility over the integers of the primitive part of `f`.
///
/// Exact for degrees 1 to 3 (degree 3 whenever the rational-root search is
/// feasible); for higher degrees `Irreducible` is only returned with a mod-p
/// certificate.
pub fn irreducibility(f: &IntPoly) -> Result<Irreducibility> {
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        _ => {}
    }
    let g = f.primitive_part();
    let d = g.deg();
    if d == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if g.coeff(0).is_zero() {
        return Ok(Irreducibility::Reducible {
            witness: IntPoly::t(),
        });
    }
    if d == 2 {
        let disc = discriminant_quadratic(&g)?;
        if disc.is_negative() {
            return Ok(Irreducibility::Irreducible);
        }
        let s = disc.sqrt();
        if &s * &s != disc {
            return Ok(Irreducibility::Irreducible);
        }
        // a t^2 + b t + c = a (t - r1)(t - r2), r = (-b + s) / 2a
        let witness = IntPoly::new(vec![g.coeff(1) - s, 2 * g.coeff(2)]).primitive_part();
        return Ok(Irreducibility::Reducible { witness });
    }
    if has_mod_p_certificate(&g) {
        return Ok(Irreducibility::Irreducible);
    }
    Ok(match rational_root_factor(&g) {
        Ok(Some(witness)) => Irreducibility::Reducible { witness },
        Ok(None) if d == 3 => Irreducibility::Irreducible,
        _ => Irreducibility::Unknown,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberReport {
    pub polynomial: String,
    pub positive_leading: bool,
    pub irreducibility: Irreducibility,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub distinct: bool,
    /// Pairs of members that agree up to a scalar factor (warning only).
    pub scalar_multiples: Vec<(usize, usize)>,
    /// Pairs of members with zero resultant.
    pub common_factors: Vec<(usize, usize)>,
    pub vanishing_primes: Vec<u64>,
    #[serde(serialize_with = "ser_bigint")]
    pub fixed_divisor: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub members: Vec<MemberReport>,
    pub family: FamilyReport,
}

impl AdmissibilityReport {
    /// Each violated hypothesis, in a human-readable form.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            if !m.positive_leading {
                out.push(format!(
                    "member {} ({}) has a non-positive leading coefficient",
                    i + 1,
                    m.polynomial
                ));
            }
            match &m.irreducibility {
                Irreducibility::Irreducible => {}
                Irreducibility::Reducible { witness } => out.push(format!(
                    "member {} ({}) is reducible, with factor {witness}",
                    i + 1,
                    m.polynomial
                )),
                Irreducibility::Unknown => out.push(format!(
                    "irreducibility of member {} ({}) could not be decided",
                    i + 1,
                    m.polynomial
                )),
            }
        }
        if !self.family.distinct {
            out.push("members are not distinct".into());
        }
        for (i, j) in &self.family.common_factors {
            out.push(format!(
                "members {} and {} share a common factor",
                i + 1,
                j + 1
            ));
        }
        for p in &self.family.vanishing_primes {
            out.push(format!("product vanishes identically modulo {p}"));
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.failures().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairResultant {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub value: BigInt,
}

/// Polynomials `f_1..f_k` with their product, pairwise resultants and admissibility.
#[derive(Debug, Clone)]
pub struct PolyFamily {
    members: Vec<IntPoly>,
    product: IntPoly,
    pair_resultants: Vec<PairResultant>,
    report: AdmissibilityReport,
}

impl PolyFamily {
    pub fn members(&self) -> &[IntPoly] {
        &self.members
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn product(&self) -> &IntPoly {
        &self.product
    }

    pub fn pair_resultants(&self) -> &[PairResultant] {
        &self.pair_resultants
    }

    pub fn report(&self) -> &AdmissibilityReport {
        &self.report
    }

    pub fn is_admissible(&self) -> bool {
        self.report.is_admissible()
    }

    /// Product of member degrees.
    pub fn degree_product(&self) -> u64 {
        self.members.iter().map(|f| f.deg() as u64).product()
    }

    /// Gate for downstream computation; `allow_override` bypasses the hypotheses.
    pub fn require_admissible(&self, allow_override: bool) -> Result<()> {
        let failures = self.report.failures();
        if failures.is_empty() || allow_override {
            Ok(())
        } else {
            Err(Error::Inadmissible(failures.join("; ")))
        }
    }

    /// Family as text, e.g. `t, t+2`.
    pub fn describe(&self) -> String {
        self.members
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl PartialEq for PolyFamily {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

/// Build a family: product, pairwise resultants and admissibility report.
pub fn check_family(members: &[IntPoly]) -> Result<PolyFamily> {
    if members.is_empty() {
        return Err(Error::Domain(
            "a family needs at least one polynomial".into(),
        ));
    }
    let mut reports = Vec::with_capacity(members.len());
    for f in members {
        match f.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            _ => {}
        }
        reports.push(MemberReport {
            polynomial: f.to_string(),
            positive_leading: f.leading().is_positive(),
            irreducibility: irreducibility(f)?,
        });
    }
    let mut scalar_multiples = Vec::new();
    let mut common_factors = Vec::new();
    let mut pair_resultants = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i] == members[j] {
                return Err(Error::DuplicateMember(members[i].to_string()));
            }
            if members[i].primitive_part() == members[j].primitive_part() {
                scalar_multiples.push((i, j));
            }
            let value = resultant(&members[i], &members[j]);
            if value.is_zero() {
                common_factors.push((i, j));
            }
            pair_resultants.push(PairResultant { i, j, value });
        }
    }
    let product = family_product(members);
    let fixed = fixed_divisor(&product)?;
    let vanishing = prime_divisors(&fixed)?;
    Ok(PolyFamily {
        members: members.to_vec(),
        product,
        pair_resultants,
        report: AdmissibilityReport {
            members: reports,
            family: FamilyReport {
                distinct: true,
                scalar_multiples,
                common_factors,
                vanishing_primes: vanishing,
                fixed_divisor: fixed,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn fam(v: &[&str]) -> Result<PolyFamily> {
        check_family(&v.iter().map(|s| p(s)).collect::<Vec<_>>())
    }

    #[test]
    fn fixed_divisor_examples() {
        assert_eq!(fixed_divisor(&p("t^2+t+2")).unwrap(), BigInt::from(2));
        assert_eq!(fixed_divisor(&p("t^3-t+3")).unwrap(), BigInt::from(3));
        assert_eq!(fixed_divisor(&p("t^2+1")).unwrap(), BigInt::from(1));
        assert!(fixed_divisor(&IntPoly::zero()).is_err());
    }

    #[test]
    fn vanishing_examples() {
        assert_eq!(vanishing_primes(&p("t^2-t")).unwrap(), vec![2]);
        let dickson = family_product(&[p("t+3"), p("t+7"), p("t-1")]);
        assert!(vanishing_primes(&dickson).unwrap().contains(&3));
        assert!(vanishing_primes(&p("t^2+1")).unwrap().is_empty());
        assert_eq!(vanishing_primes(&p("6*t+6")).unwrap(), vec![2, 3]);
    }

    #[test]
    fn irreducibility_examples() {
        assert_eq!(
            irreducibility(&p("t^2+1")).unwrap(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            irreducibility(&p("t^2-1")).unwrap(),
            Irreducibility::Reducible { witness: p("t-1") }
        );
        assert_eq!(
            irreducibility(&p("t^3-2")).unwrap(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            irreducibility(&p("4*t^2+5*t+1")).unwrap(),
            Irreducibility::Reducible {
                witness: p("4*t+1")
            }
        );
        assert!(matches!(
            irreducibility(&p("2*t^3-3*t^2+2*t-3")).unwrap(),
            Irreducibility::Reducible { .. }
        ));
        // t^4 + 1 is irreducible but reducible modulo every prime
        assert_eq!(
            irreducibility(&p("t^4+1")).unwrap(),
            Irreducibility::Unknown
        );
        assert_eq!(
            irreducibility(&p("t^5-t-1")).unwrap(),
            Irreducibility::Irreducible
        );
        assert!(irreducibility(&p("5")).is_err());
        assert!(irreducibility(&IntPoly::zero()).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(
            discriminant_quadratic(&p("t^2+t+41")).unwrap(),
            BigInt::from(-163)
        );
        assert_eq!(
            discriminant_quadratic(&p("4*t^2+4*t-1")).unwrap(),
            BigInt::from(32)
        );
        assert_eq!(
            discriminant_quadratic(&p("4*t^2-2*t+3")).unwrap(),
            BigInt::from(-44)
        );
        assert!(matches!(
            discriminant_quadratic(&p("t^3")),
            Err(Error::Degree {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn family_examples() {
        let twins = fam(&["t", "t+2"]).unwrap();
        assert!(twins.is_admissible());
        assert_eq!(twins.product(), &p("t^2+2*t"));
        assert_eq!(twins.pair_resultants()[0].value, BigInt::from(2));

        let consecutive = fam(&["t", "t+1"]).unwrap();
        assert!(!consecutive.is_admissible());
        assert_eq!(consecutive.report().family.vanishing_primes, vec![2]);
        let err = consecutive.require_admissible(false).unwrap_err();
        assert!(err.to_string().contains("modulo 2"));
        assert!(consecutive.require_admissible(true).is_ok());

        let square = fam(&["t^2-1"]).unwrap();
        assert!(!square.is_admissible());
        assert!(square.report().failures()[0].contains("reducible"));

        assert!(matches!(fam(&["t", "t"]), Err(Error::DuplicateMember(_))));
        assert!(matches!(fam(&["t", "0"]), Err(Error::ZeroPolynomial)));
        let scaled = fam(&["t+1", "2*t+2"]).unwrap();
        assert_eq!(scaled.report().family.scalar_multiples, vec![(0, 1)]);
        assert!(matches!(check_family(&[]), Err(Error::Domain(_))));
        let negative = fam(&["-t^2+3"]).unwrap();
        assert!(!negative.is_admissible());
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-20i64..21, 2..=max_deg + 1)
            .prop_map(|c| IntPoly::from_i64s(&c))
            .prop_filter("nonconstant", |f| f.deg() >= 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn fixed_divisor_divides_values(f in small_poly(5)) {
            let d = fixed_divisor(&f).unwrap();
            for n in -50..=50 {
                prop_assert!((f.eval(&BigInt::from(n)) % &d).is_zero());
            }
        }

        #[test]
        fn vanishing_primes_match_bruteforce(f in small_poly(5)) {
            let got = vanishing_primes(&f).unwrap();
            let content = f.content();
            let mut expect: Vec<u64> = primes_up_to(200)
                .into_iter()
                .filter(|&p| {
                    (p as usize <= f.deg() || (&content % BigInt::from(p)).is_zero())
                        && (0..p).all(|x| (f.eval(&BigInt::from(x)) % BigInt::from(p)).is_zero())
                })
                .collect();
            expect.sort_unstable();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn never_irreducible_with_integer_root(
            f in small_poly(4),
            root in -1000i64..=1000,
        ) {
            let g = &f * &IntPoly::linear(1, -root);
            prop_assert!(!irreducibility(&g).unwrap().is_irreducible());
        }
    }
}
