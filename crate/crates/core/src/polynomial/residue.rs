//! Fast reduction of fixed big integers modulo many word-sized primes.

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use super::IntPoly;

/// A big integer prepared for repeated `mod p` reduction.
#[derive(Debug, Clone)]
pub struct BigResidue {
    negative: bool,
    small: Option<u64>,
    /// Magnitude as base-2^32 digits, most significant first.
    digits: Vec<u32>,
}

impl BigResidue {
    pub fn new(n: &BigInt) -> Self {
        let (sign, mut digits) = n.to_u32_digits();
        digits.reverse();
        BigResidue {
            negative: sign == Sign::Minus,
            small: n.magnitude().to_u64(),
            digits,
        }
    }

    /// Least nonnegative residue modulo `p > 0`.
    #[inline]
    pub fn rem(&self, p: u64) -> u64 {
        let mag = match self.small {
            Some(m) => m % p,
            None => {
                let p128 = p as u128;
                self.digits
                    .iter()
                    .fold(0u128, |r, &d| ((r << 32) | d as u128) % p128) as u64
            }
        };
        if self.negative && mag != 0 {
            p - mag
        } else {
            mag
        }
    }
}

/// All coefficients of a polynomial prepared for reduction modulo `p`.
#[derive(Debug, Clone)]
pub struct CoeffResidues {
    coeffs: Vec<BigResidue>,
}

impl CoeffResidues {
    pub fn new(f: &IntPoly) -> Self {
        CoeffResidues {
            coeffs: f.coeffs().iter().map(BigResidue::new).collect(),
        }
    }

    /// Coefficients modulo `p`, constant first, trailing zeros trimmed.
    pub fn reduce(&self, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.iter().map(|c| c.rem(p)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn matches_bigint_mod() {
        let values: Vec<BigInt> = vec![
            0.into(),
            (-7).into(),
            "123456789012345678901234567890123".parse().unwrap(),
            "-98765432109876543210987654321".parse().unwrap(),
            BigInt::from(u64::MAX),
        ];
        for v in &values {
            let r = BigResidue::new(v);
            for p in [
                2u64,
                3,
                97,
                1_000_003,
                4_294_967_311,
                18_446_744_073_709_551_557,
            ] {
                let expect = v.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                assert_eq!(r.rem(p), expect, "{v} mod {p}");
            }
        }
    }
}
