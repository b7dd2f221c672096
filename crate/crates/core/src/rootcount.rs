//! ω_f(p): the number of residues `x mod p` with `f(x) ≡ 0 (mod p)`.
//!
//! Roots are counted without multiplicity. When `f` vanishes identically
//! modulo `p` every residue is a solution and ω_f(p) = p.

use serde::Serialize;

use crate::gfp;
use crate::polynomial::{discriminant_quadratic, BigResidue, CoeffResidues, IntPoly, PolyFamily};
use crate::primes::{jacobi_u64, primes_up_to};
use crate::{Error, Result};

/// Largest prime accepted by [`omega_bruteforce`].
pub const BRUTE_FORCE_CUTOFF: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    Linear,
    Quadratic,
    Frobenius,
}

fn bruteforce_reduced(coeffs: &[u64], p: u64) -> u64 {
    if coeffs.is_empty() {
        return p;
    }
    (0..p).filter(|&x| gfp::eval(coeffs, x, p) == 0).count() as u64
}

/// Exhaustive count over `x = 0..p-1`.
pub fn omega_bruteforce(f: &IntPoly, p: u64) -> Result<u64> {
    if p > BRUTE_FORCE_CUTOFF {
        return Err(Error::Range(format!(
            "brute-force root count limited to p <= {BRUTE_FORCE_CUTOFF}, got {p}"
        )));
    }
    Ok(bruteforce_reduced(&CoeffResidues::new(f).reduce(p), p))
}

/// Closed form `1 + (Δ/p)` for odd `p` not dividing the leading coefficient.
pub fn omega_quadratic(f: &IntPoly, p: u64) -> Result<u64> {
    let disc = discriminant_quadratic(f)?;
    Ok(MemberOmega::quadratic(f, &disc).count(p).0)
}

/// Distinct roots as `deg gcd(x^p - x, f mod p)`.
pub fn omega_generic(f: &IntPoly, p: u64) -> Result<u64> {
    let reduced = CoeffResidues::new(f).reduce(p);
    if reduced.is_empty() {
        return Err(Error::VanishesModulo(p));
    }
    match gfp::distinct_root_count(&reduced, p) as u64 {
        w if w == p => Err(Error::VanishesModulo(p)),
        w => Ok(w),
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Linear {
        a: BigResidue,
        b: BigResidue,
    },
    Quadratic {
        residues: CoeffResidues,
        a: BigResidue,
        b: BigResidue,
        c: BigResidue,
        disc: BigResidue,
    },
    General {
        residues: CoeffResidues,
    },
}

/// Per-polynomial ω evaluator with coefficients prepared for fast reduction.
/// Returns `p` (never an error) when the polynomial vanishes modulo `p`.
#[derive(Debug, Clone)]
pub struct MemberOmega {
    shape: Shape,
}

impl MemberOmega {
    pub fn new(f: &IntPoly) -> Self {
        match f.deg() {
            1 => MemberOmega {
                shape: Shape::Linear {
                    a: BigResidue::new(&f.coeff(1)),
                    b: BigResidue::new(&f.coeff(0)),
                },
            },
            2 => Self::quadratic(f, &discriminant_quadratic(f).expect("degree 2")),
            _ => MemberOmega {
                shape: Shape::General {
                    residues: CoeffResidues::new(f),
                },
            },
        }
    }

    fn quadratic(f: &IntPoly, disc: &num_bigint::BigInt) -> Self {
        MemberOmega {
            shape: Shape::Quadratic {
                residues: CoeffResidues::new(f),
                a: BigResidue::new(&f.coeff(2)),
                b: BigResidue::new(&f.coeff(1)),
                c: BigResidue::new(&f.coeff(0)),
                disc: BigResidue::new(disc),
            },
        }
    }

    /// ω modulo prime `p` and the method used.
    pub fn count(&self, p: u64) -> (u64, Method) {
        let linear = |a: u64, b: u64| match (a, b) {
            (0, 0) => p,
            (0, _) => 0,
            _ => 1,
        };
        match &self.shape {
            Shape::Linear { a, b } => (linear(a.rem(p), b.rem(p)), Method::Linear),
            Shape::Quadratic {
                residues,
                a,
                b,
                c,
                disc,
            } => {
                if p == 2 {
                    return (
                        bruteforce_reduced(&residues.reduce(2), 2),
                        Method::BruteForce,
                    );
                }
                if a.rem(p) == 0 {
                    return (linear(b.rem(p), c.rem(p)), Method::Linear);
                }
                let j = jacobi_u64(disc.rem(p), p);
                ((1 + j as i64) as u64, Method::Quadratic)
            }
            Shape::General { residues } => {
                let reduced = residues.reduce(p);
                if reduced.is_empty() {
                    (p, Method::Frobenius)
                } else {
                    (
                        gfp::distinct_root_count(&reduced, p) as u64,
                        Method::Frobenius,
                    )
                }
            }
        }
    }
}

/// Family-level ω using additivity off the exceptional primes.
///
/// A prime is exceptional when it divides a pairwise resultant or a leading
/// coefficient; there the product polynomial is counted directly.
#[derive(Debug, Clone)]
pub struct FamilyOmega {
    members: Vec<MemberOmega>,
    leading: Vec<BigResidue>,
    resultants: Vec<BigResidue>,
    product: CoeffResidues,
}

impl FamilyOmega {
    pub fn new(family: &PolyFamily) -> Self {
        FamilyOmega {
            members: family.members().iter().map(MemberOmega::new).collect(),
            leading: family
                .members()
                .iter()
                .map(|f| BigResidue::new(&f.leading()))
                .collect(),
            resultants: family
                .pair_resultants()
                .iter()
                .map(|r| BigResidue::new(&r.value))
                .collect(),
            product: CoeffResidues::new(family.product()),
        }
    }

    pub fn is_exceptional(&self, p: u64) -> bool {
        self.members.len() > 1
            && (self.leading.iter().any(|r| r.rem(p) == 0)
                || self.resultants.iter().any(|r| r.rem(p) == 0))
    }

    /// ω of the product polynomial at `p`, which may equal `p` when it vanishes.
    pub fn count_unchecked(&self, p: u64) -> (u64, Method) {
        if self.is_exceptional(p) {
            let reduced = self.product.reduce(p);
            if reduced.is_empty() {
                return (p, Method::BruteForce);
            }
            if p <= BRUTE_FORCE_CUTOFF {
                (bruteforce_reduced(&reduced, p), Method::BruteForce)
            } else {
                (
                    gfp::distinct_root_count(&reduced, p) as u64,
                    Method::Frobenius,
                )
            }
        } else if self.members.len() == 1 {
            self.members[0].count(p)
        } else {
            let mut total = 0;
            let mut method = Method::Linear;
            for m in &self.members {
                let (w, used) = m.count(p);
                total += w;
                method = method.max_cost(used);
            }
            (total, method)
        }
    }

    pub fn count(&self, p: u64) -> Result<u64> {
        match self.count_unchecked(p) {
            (w, _) if w == p => Err(Error::VanishesModulo(p)),
            (w, _) => Ok(w),
        }
    }
}

impl Method {
    fn rank(self) -> u8 {
        match self {
            Method::Linear => 0,
            Method::Quadratic => 1,
            Method::Frobenius => 2,
            Method::BruteForce => 3,
        }
    }

    fn max_cost(self, other: Method) -> Method {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

/// ω of the product of a family at prime `p`.
pub fn omega_family(family: &PolyFamily, p: u64) -> Result<u64> {
    FamilyOmega::new(family).count(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaEntry {
    pub p: u64,
    pub omega: u64,
    pub method: Method,
}

/// ω_f(p) for all primes up to a cutoff, with the exceptional primes listed.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaProfile {
    pub polynomial: String,
    pub cutoff: u64,
    pub entries: Vec<OmegaEntry>,
    /// Primes up to the cutoff dividing the leading coefficient or discriminant.
    pub exceptional: Vec<u64>,
}

impl OmegaProfile {
    pub fn build(f: &IntPoly, cutoff: u64) -> Result<Self> {
        if f.deg() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let member = MemberOmega::new(f);
        let lead = BigResidue::new(&f.leading());
        // Res(f, f') is the discriminant up to a factor of the leading coefficient.
        let disc = match f.deg() {
            2 => BigResidue::new(&discriminant_quadratic(f)?),
            _ => BigResidue::new(&crate::polynomial::resultant(f, &f.derivative())),
        };
        let mut entries = Vec::new();
        let mut exceptional = Vec::new();
        for p in primes_up_to(cutoff) {
            let (omega, method) = member.count(p);
            entries.push(OmegaEntry { p, omega, method });
            if lead.rem(p) == 0 || disc.rem(p) == 0 {
                exceptional.push(p);
            }
        }
        Ok(OmegaProfile {
            polynomial: f.to_string(),
            cutoff,
            entries,
            exceptional,
        })
    }

    pub fn get(&self, p: u64) -> Option<u64> {
        self.entries
            .binary_search_by_key(&p, |e| e.p)
            .ok()
            .map(|i| self.entries[i].omega)
    }
}
