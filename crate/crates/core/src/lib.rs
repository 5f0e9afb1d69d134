//! Certified interval arithmetic and finite-range verification of arithmetic
//! (Π⁰₁) reformulations of the Riemann hypothesis.
//!
//! Everything analytic is carried by [`Interval`], a pair of dyadic rationals
//! rounded outward. Number-theoretic tables come from [`sieve`], the two
//! criteria live in [`dmr`] and [`matiyasevich`], the diophantine helpers in
//! [`dioph`] and the prime-distribution laboratory in [`eh`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, checkpoints
//! and the command line live in the companion `pi01` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod chebyshev;
pub mod constants;
pub mod dioph;
pub mod dmr;
pub mod dyadic;
pub mod eh;
pub mod elementary;
mod error;
mod fixed;
pub mod harmonic;
pub mod interval;
pub mod matiyasevich;
pub mod sieve;
pub mod verdict;

pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
pub use interval::{iv_arith, iv_from_rational, ArithOp, Interval, Precision, PrecisionPolicy};
pub use sieve::ChebyshevTable;
pub use verdict::{Outcome, Verdict};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
