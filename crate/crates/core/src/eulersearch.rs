//! Prime-rich quadratics `t^2 + t + k` built by the Chinese remainder theorem.
//!
//! For each odd prime `p` in scope a quadratic nonresidue `r_p` is fixed and
//! `k` is chosen with `1 - 4k ≡ r_p (mod p)`. The discriminant of
//! `t^2 + t + k` is `1 - 4k`, so the polynomial has no root modulo any of
//! these primes; `k` odd does the same for `p = 2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::polynomial::IntPoly;
use crate::primes::{
    factorize, is_prime_big, is_prime_u64, jacobi_u64, mod_inverse, mod_pow, primes_up_to,
    Primality,
};
use crate::rootcount::omega_quadratic;
use crate::{Error, Result};

/// Miller-Rabin rounds used for streak values beyond 64 bits.
pub const STREAK_ROUNDS: u32 = 40;

/// Smallest generator of `(Z/pZ)^*` for an odd prime `p`.
pub fn least_primitive_root(p: u64) -> Result<u64> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let cofactors: Vec<u64> = factorize(p - 1)
        .into_iter()
        .map(|(q, _)| (p - 1) / q)
        .collect();
    Ok((2..p)
        .find(|&g| cofactors.iter().all(|&e| mod_pow(g, e, p) != 1))
        .expect("every prime has a primitive root"))
}

/// Smallest quadratic nonresidue modulo an odd prime `p`.
pub fn least_nonresidue(p: u64) -> Result<u64> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok((2..p)
        .find(|&r| jacobi_u64(r, p) == -1)
        .expect("odd primes have nonresidues"))
}

/// Nonresidues reproducing the widely quoted 219-digit `k_100`: the least
/// primitive root of every odd prime up to 541, and 260 for 547.
pub fn published_k100_nonresidues() -> Vec<i64> {
    let mut r: Vec<i64> = primes_up_to(541)[1..]
        .iter()
        .map(|&p| least_primitive_root(p).expect("odd prime") as i64)
        .collect();
    r.push(260);
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSelection {
    /// Every odd prime `<= bound`.
    Through(u64),
    /// The first `n` odd primes, `3, 5, 7, ...`.
    FirstOddPrimes(usize),
}

impl PrimeSelection {
    pub fn primes(&self) -> Result<Vec<u64>> {
        match *self {
            PrimeSelection::Through(b) => Ok(primes_up_to(b).into_iter().skip(1).collect()),
            PrimeSelection::FirstOddPrimes(n) => {
                if n == 0 {
                    return Ok(Vec::new());
                }
                let last = crate::primes::nth_prime(n as u64 + 1)?;
                Ok(primes_up_to(last).into_iter().skip(1).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonresidueRule {
    LeastPrimitiveRoot,
    LeastNonresidue,
    /// One value per selected prime, in ascending prime order.
    Explicit(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representative {
    /// `0 < k < modulus`.
    #[default]
    LeastPositive,
    /// `|k| <= modulus / 2`.
    LeastAbsolute,
}

fn decimal<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrtPlan {
    pub primes: Vec<u64>,
    /// `r_p`, reduced to `0..p`.
    pub nonresidues: Vec<u64>,
    /// `2 * prod p`.
    #[serde(serialize_with = "decimal")]
    pub modulus: BigInt,
    #[serde(serialize_with = "decimal")]
    pub k: BigInt,
}

impl CrtPlan {
    /// `t^2 + t + k`.
    pub fn polynomial(&self) -> IntPoly {
        IntPoly::new(vec![self.k.clone(), BigInt::one(), BigInt::one()])
    }

    pub fn with_k(&self, k: BigInt) -> CrtPlan {
        CrtPlan { k, ..self.clone() }
    }
}

/// Solve `k ≡ 1 (mod 2)` and `1 - 4k ≡ r_p (mod p)` for the selected primes.
pub fn build_plan(
    selection: &PrimeSelection,
    rule: &NonresidueRule,
    representative: Representative,
) -> Result<CrtPlan> {
    let primes = selection.primes()?;
    let nonresidues: Vec<u64> = match rule {
        NonresidueRule::LeastPrimitiveRoot => primes
            .iter()
            .map(|&p| least_primitive_root(p))
            .collect::<Result<_>>()?,
        NonresidueRule::LeastNonresidue => primes
            .iter()
            .map(|&p| least_nonresidue(p))
            .collect::<Result<_>>()?,
        NonresidueRule::Explicit(list) => {
            if list.len() != primes.len() {
                return Err(Error::Domain(format!(
                    "{} nonresidues supplied for {} primes",
                    list.len(),
                    primes.len()
                )));
            }
            list.iter()
                .zip(&primes)
                .map(|(&r, &p)| r.rem_euclid(p as i64) as u64)
                .collect()
        }
    };
    for (&r, &p) in nonresidues.iter().zip(&primes) {
        if jacobi_u64(r, p) != -1 {
            return Err(Error::NotNonresidue(r, p));
        }
    }

    // Incremental CRT: k ≡ 1 (mod 2), then fold in each prime.
    let mut k = BigInt::one();
    let mut modulus = BigInt::from(2u8);
    for (&r, &p) in nonresidues.iter().zip(&primes) {
        let inv4 = mod_inverse(4 % p, p).expect("p is odd");
        let target = ((1 + p - r) % p) as u128 * inv4 as u128 % p as u128;
        let current = k
            .mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("reduced mod p");
        let m_mod = modulus
            .mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("reduced mod p");
        let m_inv = mod_inverse(m_mod, p).expect("distinct primes are coprime");
        let delta = (target as u64 + p - current) % p;
        let step = delta as u128 * m_inv as u128 % p as u128;
        k += &modulus * BigInt::from(step as u64);
        modulus *= p;
    }
    if representative == Representative::LeastAbsolute && &k * 2 > modulus {
        k -= &modulus;
    }
    Ok(CrtPlan {
        primes,
        nonresidues,
        modulus,
        k,
    })
}

/// True iff `t^2 + t + k` has no root modulo 2 or any plan prime.
pub fn verify_plan(plan: &CrtPlan) -> bool {
    let f = plan.polynomial();
    if plan.k.is_even() {
        return false;
    }
    plan.primes
        .iter()
        .all(|&p| matches!(omega_quadratic(&f, p), Ok(0)))
}

/// Length of the initial run of primes `t^2 + t + k`, `t = 0, 1, 2, ...`.
pub fn euler_streak(k: &BigInt) -> Result<u64> {
    if !k.is_positive() {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    let mut t = 0u64;
    if let Some(small) = k.to_u64() {
        loop {
            let v = (t as u128) * (t as u128 + 1) + small as u128;
            let prime = match u64::try_from(v) {
                Ok(v) => is_prime_u64(v),
                Err(_) => break,
            };
            if !prime {
                return Ok(t);
            }
            t += 1;
        }
    }
    loop {
        let v = BigInt::from(t) * BigInt::from(t + 1) + k;
        if is_prime_big(&v, STREAK_ROUNDS) != Primality::ProbablePrime {
            return Ok(t);
        }
        t += 1;
    }
}

/// `1 - 4k`, the discriminant of `t^2 + t + k`.
pub fn discriminant(k: &BigInt) -> BigInt {
    BigInt::one() - k * 4
}
