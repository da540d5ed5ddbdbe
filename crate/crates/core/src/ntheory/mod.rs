//! Exact integer arithmetic: primality, factorization, square-free
//! structure, residue symbols, CRT and local solvability of `x² ≡ a (mod pᵏ)`.
//!
//! Everything here is a pure function of its inputs.

pub(crate) mod arith;
mod crt;
mod ecm;
mod factor;
mod local;
pub(crate) mod primality;
mod residue;
mod squarefree;

pub use crt::{crt, ResidueClass};
pub use factor::{factorize, is_squarefree, rad, Factored};
pub use local::{
    quad_solvable_mod_pk, solvability_profile, witness_exponent, Exponent, SolvabilityProfile,
};
pub use primality::{is_deterministic, is_prime, is_prime_int, is_prime_u64, DETERMINISTIC_BOUND};
pub use residue::{euler_criterion, jacobi, legendre, sqrt_mod_prime};
pub use squarefree::SquarefreeInt;

pub(crate) use residue::legendre_unchecked_u64;

use num_bigint::BigUint;

/// Exact perfect-square test for a natural number.
pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Residue symbol `(a/p)` for a prime `p` already known to be odd and prime.
pub(crate) fn symbol_for_known_prime(a: &num_bigint::BigInt, p: &BigUint) -> i8 {
    use num_traits::ToPrimitive;
    match p.to_u64() {
        Some(small) => legendre_unchecked_u64(a, small),
        None => jacobi(a, p),
    }
}
