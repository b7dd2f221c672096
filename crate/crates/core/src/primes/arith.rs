use super::{is_prime_u64, SegmentedSieve, SieveConfig};
use crate::{CompensatedSum, Error, Result};

/// Meissel-Mertens constant B.
pub const MEISSEL_MERTENS: f64 = 0.261_497_212_847_642_8;

/// Largest index accepted by [`nth_prime`].
pub const NTH_PRIME_MAX_INDEX: u64 = 1_000_000_000;

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// Jacobi symbol `(a / n)` for odd `n`; binary reciprocity iteration.
pub fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        let r = n & 7;
        if z & 1 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        (a, n) = (n, a);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol `(a / n)`; `n` must be odd and positive.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("Jacobi symbol needs odd n, got {n}")));
    }
    let a = (a as i128).rem_euclid(n as i128) as u64;
    Ok(jacobi_u64(a, n))
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut r, mut q) = (2u64, 2u64, 1u64, 1u64, 1u64);
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorisation as ascending `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Euler's totient via `a * prod_{p | a} (1 - 1/p)`.
pub fn totient(a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::Domain("totient of 0".into()));
    }
    Ok(factorize(a)
        .into_iter()
        .fold(a, |acc, (p, _)| acc / p * (p - 1)))
}

/// `sum_{p <= x} 1/p`, accumulated in ascending order.
pub fn prime_reciprocal_sum(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let mut sum = CompensatedSum::new();
    super::for_each_prime(2, x.floor() as u64 + 1, |p| sum.add(1.0 / p as f64));
    sum.value()
}

/// `sum_{p <= x} 1/p - log log x`, which tends to [`MEISSEL_MERTENS`].
pub fn mertens_deviation(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!(
            "mertens_deviation needs x >= 2, got {x}"
        )));
    }
    Ok(prime_reciprocal_sum(x) - x.ln().ln())
}

/// The `n`-th prime, `p_1 = 2`.
pub fn nth_prime(n: u64) -> Result<u64> {
    if n == 0 || n > NTH_PRIME_MAX_INDEX {
        return Err(Error::Range(format!(
            "prime index {n} outside 1..={NTH_PRIME_MAX_INDEX}"
        )));
    }
    let bound = if n < 6 {
        15
    } else {
        let nf = n as f64;
        (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 1
    };
    let sieve = SegmentedSieve::new(0, bound, &SieveConfig::default())?;
    let mut seen = 0u64;
    for seg in sieve.segments() {
        let c = seg.count();
        if seen + c >= n {
            return Ok(seg.iter().nth((n - seen - 1) as usize).expect("counted"));
        }
        seen += c;
    }
    unreachable!("Rosser's bound guarantees p_n < n(ln n + ln ln n)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(-163, 37).unwrap(), -1);
        assert_eq!(jacobi(0, 5).unwrap(), 0);
        assert_eq!(jacobi(32, 7).unwrap(), 1);
        assert_eq!(jacobi(5, 1).unwrap(), 1);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn minus_163_nonresidue_for_first_eleven_odd_primes() {
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            assert_eq!(jacobi(-163, p).unwrap(), -1, "{p}");
        }
        assert_ne!(jacobi(-163, 41).unwrap(), -1);
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in super::super::primes_up_to(2000).into_iter().skip(1) {
            for a in 0..p.min(300) {
                let e = mod_pow(a, (p - 1) / 2, p);
                let expect = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(jacobi_u64(a, p), expect, "({a}/{p})");
            }
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(6).unwrap(), 2);
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(4).unwrap(), 2);
        assert_eq!(totient(100_000_000).unwrap(), 40_000_000);
        assert!(totient(0).is_err());
        for a in 1..500u64 {
            let direct = (1..=a).filter(|&m| gcd_u64(m, a) == 1).count() as u64;
            assert_eq!(totient(a).unwrap(), direct, "{a}");
        }
    }

    #[test]
    fn factorize_large() {
        let n = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(n), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(2u64.pow(10) * 3), vec![(2, 10), (3, 1)]);
    }

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(2).unwrap(), 3);
        assert_eq!(nth_prime(5).unwrap(), 11);
        assert_eq!(nth_prime(6).unwrap(), 13);
        assert_eq!(nth_prime(100).unwrap(), 541);
        assert_eq!(nth_prime(1_000_000).unwrap(), 15_485_863);
        assert!(nth_prime(0).is_err());
        assert!(nth_prime(NTH_PRIME_MAX_INDEX + 1).is_err());
    }

    #[test]
    fn mertens_small() {
        let d = mertens_deviation(2.0).unwrap();
        assert!((d - (0.5 - 2f64.ln().ln())).abs() < 1e-15);
        assert!(mertens_deviation(1.5).is_err());
        let d6 = mertens_deviation(1e6).unwrap();
        assert!((d6 - MEISSEL_MERTENS).abs() < 1e-3);
    }

    #[test]
    fn mod_inverse_works() {
        assert_eq!(mod_inverse(4, 7), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
