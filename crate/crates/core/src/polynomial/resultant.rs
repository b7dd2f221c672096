//! Resultants by the subresultant pseudo-remainder sequence.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::IntPoly;

/// Pseudo-remainder `R` with `lc(b)^(deg a - deg b + 1) a = q b + R`.
pub fn pseudo_remainder(a: &IntPoly, b: &IntPoly) -> IntPoly {
    assert!(!b.is_zero(), "pseudo-division by zero polynomial");
    let db = b.deg();
    if a.is_zero() || a.deg() < db {
        return a.clone();
    }
    let lb = b.leading();
    let mut e = a.deg() - db + 1;
    let mut r = a.coeffs().to_vec();
    while !r.is_empty() && r.len() - 1 >= db {
        let s = r.last().cloned().unwrap();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.coeffs().iter().enumerate() {
            r[i + shift] -= &s * bc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        e -= 1;
    }
    let scale = Pow::pow(&lb, e);
    IntPoly::new(r.into_iter().map(|c| c * &scale).collect())
}

/// `Res(f, g) = lc(f)^deg g * prod g(alpha)` over the roots of `f`.
///
/// Zero exactly when `f` and `g` share a nonconstant factor.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    if f.deg() == 0 {
        return Pow::pow(&f.leading(), g.deg());
    }
    if g.deg() == 0 {
        return Pow::pow(&g.leading(), f.deg());
    }
    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_exact(&ca);
    let mut b = g.div_exact(&cb);
    let t = Pow::pow(&ca, b.deg()) * Pow::pow(&cb, a.deg());
    let mut sign = 1i32;
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -1;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_remainder(&a, &b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &gg * Pow::pow(&h, delta);
        a = b;
        b = r.div_exact(&divisor);
        gg = a.leading();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            d => Pow::pow(&gg, d) / Pow::pow(&h, d - 1),
        };
        if b.deg() == 0 {
            let da = a.deg();
            let h_final = Pow::pow(&b.leading(), da) / Pow::pow(&h, da - 1);
            return sign * t * h_final;
        }
    }
}
