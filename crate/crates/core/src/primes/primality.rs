use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Sinclair's base set; complete for every n < 2^64.
const WITNESSES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
/// Jaeschke: complete for n < 4,759,123,141.
const WITNESSES_32: [u64; 3] = [2, 7, 61];

/// Montgomery arithmetic modulo an odd 64-bit modulus.
struct Montgomery {
    n: u64,
    n_inv: u64,
    r2: u64,
}

impl Montgomery {
    fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1);
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Montgomery { n, n_inv: inv, r2 }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let lo = t as u64;
        let hi = (t >> 64) as u64;
        let m = lo.wrapping_mul(self.n_inv);
        let mn = ((m as u128 * self.n as u128) >> 64) as u64;
        let (r, borrow) = hi.overflowing_sub(mn);
        if borrow {
            r.wrapping_add(self.n)
        } else {
            r
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    /// Strong probable-prime test to base `a` for odd `n = d * 2^s + 1`.
    fn is_sprp(&self, a: u64, d: u64, s: u32) -> bool {
        let a = a % self.n;
        if a == 0 {
            return true;
        }
        let one = self.to_mont(1);
        let minus_one = self.n - one;
        let mut base = self.to_mont(a);
        let mut x = one;
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                x = self.mul(x, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        if x == one || x == minus_one {
            return true;
        }
        for _ in 1..s {
            x = self.mul(x, x);
            if x == minus_one {
                return true;
            }
        }
        false
    }
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 59 * 59 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mont = Montgomery::new(n);
    let witnesses: &[u64] = if n < 4_759_123_141 {
        &WITNESSES_32
    } else {
        &WITNESSES_64
    };
    witnesses.iter().all(|&a| mont.is_sprp(a, d, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primality {
    Composite,
    ProbablePrime,
}

pub const DEFAULT_WITNESS_SEED: u64 = 0x5eed_b47e_4a11_0001;

/// Miller-Rabin with `rounds` random bases from a fixed-seed generator.
///
/// `Composite` is certain (values below 2 are reported composite);
/// `ProbablePrime` is wrong with probability at most `4^-rounds`.
pub fn is_prime_big(n: &BigInt, rounds: u32) -> Primality {
    is_prime_big_seeded(n, rounds, DEFAULT_WITNESS_SEED)
}

pub fn is_prime_big_seeded(n: &BigInt, rounds: u32, seed: u64) -> Primality {
    if n.sign() != Sign::Plus {
        return Primality::Composite;
    }
    let n = n.magnitude();
    let two = BigUint::from(2u32);
    if *n < two {
        return Primality::Composite;
    }
    for &p in &SMALL_PRIMES {
        let p_big = BigUint::from(p);
        if *n == p_big {
            return Primality::ProbablePrime;
        }
        if (n % &p_big).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().expect("n > 1");
    let d = &n_minus_one >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = n - 1u32;
    for _ in 0..rounds.max(1) {
        let a = rng.gen_biguint_range(&two, &upper);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                witness = false;
                break;
            }
        }
        if witness {
            return Primality::Composite;
        }
    }
    if let Some(small) = n.to_u64() {
        debug_assert!(is_prime_u64(small));
    }
    Primality::ProbablePrime
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_values_match_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime_u64(n), trial(n), "{n}");
        }
    }

    #[test]
    fn units_and_known_values() {
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime_u64(u64::MAX));
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime_u64(n), "{n}");
        }
    }

    #[test]
    fn landau_at_113000() {
        // 113000^2 + 113000 + 1 checked against trial division
        let n = 12_769_113_001u64;
        assert_eq!(is_prime_u64(n), trial(n));
    }

    #[test]
    fn big_test() {
        assert_eq!(is_prime_big(&BigInt::from(25), 10), Primality::Composite);
        assert_eq!(is_prime_big(&BigInt::from(1), 10), Primality::Composite);
        assert_eq!(is_prime_big(&BigInt::from(-7), 10), Primality::Composite);
        assert_eq!(is_prime_big(&BigInt::from(2), 10), Primality::ProbablePrime);
        let m127 = (BigInt::from(1) << 127) - 1;
        assert_eq!(is_prime_big(&m127, 20), Primality::ProbablePrime);
        assert_eq!(is_prime_big(&(&m127 * 3u32), 20), Primality::Composite);
        let k37 = 1_448_243_016_041u64;
        let big = is_prime_big(&BigInt::from(k37), 40) == Primality::ProbablePrime;
        assert_eq!(big, is_prime_u64(k37));
    }
}
