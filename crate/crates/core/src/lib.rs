//! Bateman-Horn constants and empirical prime counts for families of integer
//! polynomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`primes`] – segmented sieve, primality tests, Jacobi symbol, totient.
//! * [`polynomial`] – exact integer polynomials, admissibility, resultants.
//! * [`rootcount`] – ω_f(p), the number of roots of f modulo p.
//! * [`bhconstant`] – ordered partial Euler products and closed forms.
//! * [`asymptotics`] – logarithmic integrals and predicted counts.
//! * [`census`] – empirical counts (polynomial families, pairs, chains).
//! * [`eulersearch`] – CRT construction of prime-rich `t^2 + t + k`.
//! * [`ulam`] – Ulam spiral geometry, ray fitting and rasters.

pub mod asymptotics;
pub mod bhconstant;
pub mod census;
mod error;
pub mod eulersearch;
pub mod gfp;
pub mod polynomial;
pub mod primes;
pub mod rootcount;
mod summation;
pub mod ulam;

pub use error::{Error, QuadraticViolation, Result};
pub use summation::CompensatedSum;
