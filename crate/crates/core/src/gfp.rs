//! Dense polynomials over the prime field F_p, coefficients as `u64` in `[0, p)`,
//! constant term first, trailing zeros trimmed.

use crate::primes::factorize;

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

#[inline]
fn inv(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Evaluate at `x` by Horner's rule.
pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mulm(acc, x, p) + c) % p)
}

/// Remainder of `a` modulo nonzero `m`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let q = mulm(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = mulm(q, c, p);
            let slot = &mut r[shift + i];
            *slot = (*slot + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

/// `base^e mod m`.
pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, m, p);
        }
    }
    acc
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Number of distinct roots in F_p of nonzero `f`: `deg gcd(x^p - x, f)`.
pub fn distinct_root_count(f: &[u64], p: u64) -> usize {
    debug_assert!(!f.is_empty());
    let d = f.len() - 1;
    match d {
        0 => 0,
        1 => 1,
        _ if p <= 2 * d as u64 + 8 => (0..p).filter(|&x| eval(f, x, p) == 0).count(),
        _ => {
            let xp = powmod(&[0, 1], p, f, p);
            let g = gcd(&sub(&xp, &[0, 1], p), f, p);
            g.len() - 1
        }
    }
}

/// Rabin's test: whether nonzero `f` of degree >= 1 is irreducible over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = [0u64, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![rem(&x, f, p)];
    for i in 1..=d {
        let next = powmod(&frob[i - 1], p, f, p);
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return false;
    }
    factorize(d as u64).into_iter().all(|(q, _)| {
        let h = sub(&frob[d / q as usize], &x, p);
        gcd(&h, f, p).len() == 1
    })
}
