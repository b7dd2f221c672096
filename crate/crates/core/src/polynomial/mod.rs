//! Exact integer polynomials in one variable `t`.

mod admissible;
mod parse;
pub use parse::parse_family;
mod residue;
mod resultant;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use admissible::{
    check_family, discriminant_quadratic, fixed_divisor, irreducibility, vanishing_primes,
    AdmissibilityReport, FamilyReport, Irreducibility, MemberReport, PolyFamily,
};
pub use residue::{BigResidue, CoeffResidues};
pub use resultant::{pseudo_remainder, resultant};

/// Polynomial with arbitrary-precision integer coefficients, constant term first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Build from small coefficients, constant term first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `a t + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Exact value at `n` by Horner's rule.
    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    /// Value at `n` if every Horner step fits in an `i128`.
    pub fn eval_i128(&self, n: i128) -> Option<i128> {
        let mut acc = 0i128;
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(n)?.checked_add(c.to_i128()?)?;
        }
        Some(acc)
    }

    /// Nonnegative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with the sign chosen so the leading coefficient is positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i)
                .collect(),
        )
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// Literal coefficient product `f_1 f_2 ... f_k` (1 for an empty list).
pub fn family_product(members: &[IntPoly]) -> IntPoly {
    members
        .iter()
        .fold(IntPoly::constant(BigInt::one()), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("t^2+1").eval(&3.into()), BigInt::from(10));
        assert_eq!(p("t^2+t+41").eval(&40.into()), BigInt::from(1681));
        assert_eq!(p("t^2+t+41").eval_i128(40), Some(1681));
        let huge: BigInt = "1".repeat(60).parse().unwrap();
        let f = IntPoly::new(vec![huge.clone(), 1.into(), 1.into()]);
        assert_eq!(f.eval(&1.into()), &huge + 2);
        assert_eq!(f.eval_i128(1), None);
    }

    #[test]
    fn product_examples() {
        assert_eq!(family_product(&[p("t"), p("t+2")]), p("t^2+2*t"));
        assert_eq!(family_product(&[p("t"), p("2*t+1")]), p("2*t^2+t"));
        let fam = [p("t"), p("t+6"), p("t+30")];
        let prod = family_product(&fam);
        assert_eq!(prod.degree(), Some(3));
        for n in -5..5 {
            let n = BigInt::from(n);
            let direct: BigInt = fam.iter().map(|f| f.eval(&n)).product();
            assert_eq!(prod.eval(&n), direct);
        }
    }

    #[test]
    fn display_and_normalisation() {
        assert_eq!(p("4*t^2-2*t+3").to_string(), "4*t^2-2*t+3");
        assert_eq!(p("-t^3+0*t^2+1").to_string(), "-t^3+1");
        assert_eq!(IntPoly::from_i64s(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(p("6*t^2+4").content(), BigInt::from(2));
        assert_eq!(p("-6*t^2-4").primitive_part(), p("3*t^2+2"));
    }
}
