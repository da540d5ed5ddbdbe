//! Minimally intersective products of quadratics.
//!
//! A polynomial `f(x) = (x² − a₁)⋯(x² − a_n)` is *intersective* when it has a
//! root modulo every positive integer. It is *minimally intersective* when, in
//! addition, it has no rational root and none of its proper divisors is
//! intersective.
//!
//! The crate is layered:
//!
//! * [`ntheory`] — exact integer arithmetic: primality, factorization,
//!   residue symbols, CRT and solvability of `x² ≡ a (mod pᵏ)`.
//! * [`gf2`] — square-class linear algebra over GF(2).
//! * [`certifier`] — decides intersectivity and emits checkable certificates.
//! * [`minimality`] — drop-one divisor analysis.
//! * [`constructor`] — deterministic construction of minimally intersective
//!   families from two seed primes.
//! * [`oracle`] — brute-force ground truth and independent re-verification.

pub mod certifier;
pub mod constructor;
mod error;
pub mod family;
pub mod gf2;
pub mod minimality;
pub mod ntheory;
pub mod oracle;
pub mod serde_int;

pub use error::{Error, Result};
pub use family::QuadraticFamily;
pub use ntheory::{Exponent, Factored, SquarefreeInt};
