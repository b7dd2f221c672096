//! Prime generation, primality testing and scalar number-theoretic kernels.

mod arith;
mod primality;
mod sieve;

pub use arith::{
    factorize, gcd_u64, jacobi, jacobi_u64, mertens_deviation, mod_inverse, mod_pow, mul_mod,
    nth_prime, prime_reciprocal_sum, totient, MEISSEL_MERTENS, NTH_PRIME_MAX_INDEX,
};
pub use primality::{
    is_prime_big, is_prime_big_seeded, is_prime_u64, Primality, DEFAULT_WITNESS_SEED,
};
pub use sieve::{
    count_primes, for_each_prime, primes_up_to, sieve_range, PrimeRange, SegmentedSieve,
    SieveConfig,
};
