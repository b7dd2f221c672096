//! Segmented, odd-only, bit-packed sieve of Eratosthenes.
//!
//! Bit `i` of a segment stands for the odd integer `first_odd + 2 * i`; the
//! prime 2 is tracked separately.

use num_integer::Roots;
use rayon::prelude::*;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Bytes of flag storage per segment while streaming.
    pub segment_bytes: usize,
    /// Largest flag storage `sieve_range` may materialise in one `PrimeRange`.
    pub max_range_bytes: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_bytes: 1 << 20,
            max_range_bytes: 1 << 28,
        }
    }
}

/// Exact primality flags for the integers in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
    has_two: bool,
    first_odd: u64,
    nbits: usize,
    bits: Vec<u64>,
}

impl PrimeRange {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Whether `n` is flagged prime. Values outside `[lo, hi)` are never flagged.
    pub fn is_prime(&self, n: u64) -> bool {
        if n < self.lo || n >= self.hi {
            return false;
        }
        if n == 2 {
            return self.has_two;
        }
        if n % 2 == 0 || n < self.first_odd {
            return false;
        }
        let i = ((n - self.first_odd) / 2) as usize;
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        let odd: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        odd + self.has_two as u64
    }

    /// Primes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let two = self.has_two.then_some(2);
        let first_odd = self.first_odd;
        let odd = self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as u64;
                word &= word - 1;
                Some(first_odd + 2 * ((w as u64) * 64 + b))
            })
        });
        two.into_iter().chain(odd)
    }
}

/// Odd base primes up to `limit` via a plain byte sieve.
fn odd_base_primes(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Sieve odd numbers `first_odd + 2i`, `i < nbits`, returning prime flags.
fn sieve_odd_block(base: &[u32], first_odd: u64, nbits: usize) -> Vec<u64> {
    let words = nbits.div_ceil(64);
    let mut bits = vec![0u64; words];
    if nbits == 0 {
        return bits;
    }
    let last = first_odd + 2 * (nbits as u64 - 1);
    for &p in base {
        let p = p as u64;
        let sq = p * p;
        if sq > last {
            break;
        }
        let mut m = if sq >= first_odd {
            sq
        } else {
            let q = first_odd.div_ceil(p) * p;
            if q % 2 == 0 {
                q + p
            } else {
                q
            }
        };
        if m > last {
            continue;
        }
        m = (m - first_odd) / 2;
        let mut idx = m as usize;
        let step = p as usize;
        while idx < nbits {
            bits[idx >> 6] |= 1u64 << (idx & 63);
            idx += step;
        }
    }
    for w in bits.iter_mut() {
        *w = !*w;
    }
    let tail = nbits & 63;
    if tail != 0 {
        bits[words - 1] &= (1u64 << tail) - 1;
    }
    if first_odd == 1 {
        bits[0] &= !1;
    }
    bits
}

fn first_odd_at_least(n: u64) -> u64 {
    if n <= 1 {
        1
    } else {
        n | 1
    }
}

fn range_bits(lo: u64, hi: u64) -> (u64, usize) {
    let first_odd = first_odd_at_least(lo);
    let nbits = if first_odd >= hi {
        0
    } else {
        ((hi - first_odd).div_ceil(2)) as usize
    };
    (first_odd, nbits)
}

/// A sieve over `[lo, hi)` split into fixed-size segments.
///
/// Segment `i` covers a contiguous block; segments are independent, so they
/// may be processed concurrently and recombined in index order.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    lo: u64,
    hi: u64,
    base: Vec<u32>,
    numbers_per_segment: u64,
}

impl SegmentedSieve {
    pub fn new(lo: u64, hi: u64, config: &SieveConfig) -> Result<Self> {
        if hi <= lo {
            return Err(Error::Domain(format!("empty sieve range [{lo}, {hi})")));
        }
        let root = (hi - 1).sqrt();
        if root > u32::MAX as u64 {
            return Err(Error::Range(format!("sieve bound {hi} too large")));
        }
        let numbers_per_segment = (config.segment_bytes.max(8) as u64) * 16;
        Ok(SegmentedSieve {
            lo,
            hi,
            base: odd_base_primes(root),
            numbers_per_segment,
        })
    }

    pub fn num_segments(&self) -> usize {
        (self.hi - self.lo).div_ceil(self.numbers_per_segment) as usize
    }

    pub fn segment(&self, index: usize) -> PrimeRange {
        let lo = self.lo + index as u64 * self.numbers_per_segment;
        let hi = lo.saturating_add(self.numbers_per_segment).min(self.hi);
        let (first_odd, nbits) = range_bits(lo, hi);
        PrimeRange {
            lo,
            hi,
            has_two: lo <= 2 && 2 < hi,
            first_odd,
            nbits,
            bits: sieve_odd_block(&self.base, first_odd, nbits),
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = PrimeRange> + '_ {
        (0..self.num_segments()).map(move |i| self.segment(i))
    }
}

/// Materialise primality flags for `[lo, hi)` under the default budget.
pub fn sieve_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    sieve_range_with(lo, hi, &SieveConfig::default())
}

pub fn sieve_range_with(lo: u64, hi: u64, config: &SieveConfig) -> Result<PrimeRange> {
    if hi <= lo {
        return Err(Error::Domain(format!("empty sieve range [{lo}, {hi})")));
    }
    let bytes = (hi - lo) / 16 + 8;
    if bytes > config.max_range_bytes {
        return Err(Error::Capacity {
            what: "sieve range flags (bytes)",
            requested: bytes,
            budget: config.max_range_bytes,
        });
    }
    let root = (hi - 1).sqrt();
    let (first_odd, nbits) = range_bits(lo, hi);
    Ok(PrimeRange {
        lo,
        hi,
        has_two: lo <= 2 && 2 < hi,
        first_odd,
        nbits,
        bits: sieve_odd_block(&odd_base_primes(root), first_odd, nbits),
    })
}

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n >= 2 {
        for_each_prime(2, n + 1, |p| out.push(p));
    }
    out
}

/// Visit every prime in `[lo, hi)` in ascending order.
pub fn for_each_prime(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi <= lo {
        return;
    }
    let sieve = SegmentedSieve::new(lo, hi, &SieveConfig::default()).expect("valid range");
    for seg in sieve.segments() {
        seg.iter().for_each(&mut f);
    }
}

/// Number of primes in `[lo, hi)`. Segments are counted in parallel.
pub fn count_primes(lo: u64, hi: u64) -> u64 {
    if hi <= lo {
        return 0;
    }
    let sieve = SegmentedSieve::new(lo, hi, &SieveConfig::default()).expect("valid range");
    (0..sieve.num_segments())
        .into_par_iter()
        .map(|i| sieve.segment(i).count())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn first_primes() {
        let r = sieve_range(0, 11).unwrap();
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(r.count(), 4);
    }

    #[test]
    fn offsets_and_small_segments() {
        let cfg = SieveConfig {
            segment_bytes: 8,
            max_range_bytes: 1 << 20,
        };
        for (lo, hi) in [
            (0, 2),
            (1, 3),
            (2, 3),
            (3, 4),
            (97, 1000),
            (1000, 1201),
            (10_000, 10_512),
        ] {
            let expect: Vec<u64> = (lo..hi).filter(|&n| trial(n)).collect();
            let got: Vec<u64> = sieve_range(lo, hi).unwrap().iter().collect();
            assert_eq!(got, expect, "[{lo},{hi})");
            let seg = SegmentedSieve::new(lo, hi, &cfg).unwrap();
            let got: Vec<u64> = seg
                .segments()
                .flat_map(|s| s.iter().collect::<Vec<_>>())
                .collect();
            assert_eq!(got, expect, "segmented [{lo},{hi})");
        }
    }

    #[test]
    fn capacity_error() {
        let cfg = SieveConfig {
            segment_bytes: 1 << 10,
            max_range_bytes: 1 << 10,
        };
        assert!(matches!(
            sieve_range_with(0, 1 << 20, &cfg),
            Err(Error::Capacity { .. })
        ));
        assert!(sieve_range(5, 5).is_err());
    }

    #[test]
    fn count_million() {
        assert_eq!(sieve_range(0, 1_000_001).unwrap().count(), 78_498);
        assert_eq!(count_primes(0, 1_000_001), 78_498);
    }

    #[test]
    fn is_prime_matches_iteration() {
        let r = sieve_range(100, 400).unwrap();
        for n in 0..500 {
            assert_eq!(r.is_prime(n), (100..400).contains(&n) && trial(n), "{n}");
        }
    }
}
