//! Local solvability of `x² ≡ a (mod pᵏ)` for square-free `a`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primality::is_prime;
use super::residue::{jacobi, legendre_unchecked_u64};
use super::squarefree::SquarefreeInt;
use crate::serde_int;

/// A prime-power exponent bound that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(e) => Some(e),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinite
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => e.fmt(f),
            Exponent::Infinite => f.write_str("INFINITE"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u32(*e),
            Exponent::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(e) => Ok(Exponent::Finite(e)),
            Raw::Text(t) if t == "INFINITE" => Ok(Exponent::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad exponent {t:?}"))),
        }
    }
}

/// Largest `k` for which `x² ≡ a (mod pᵏ)` is solvable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvabilityProfile {
    #[serde(with = "serde_int::big_uint")]
    pub prime: BigUint,
    pub max_exponent: Exponent,
}

fn residue_mod(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn odd_symbol(a: &BigInt, p: &BigUint) -> i8 {
    match p.to_u64() {
        Some(small) => legendre_unchecked_u64(a, small),
        None => jacobi(a, p),
    }
}

/// Maximal solvable exponent of `x² ≡ a` at the prime `p`.
///
/// * odd `p ∤ a`: unbounded when `a` is a residue (Hensel), else 0;
/// * odd `p | a`: exactly 1, since `p ‖ a`;
/// * `p = 2`, odd `a`: unbounded if `a ≡ 1 (mod 8)`, 2 if `a ≡ 5 (mod 8)`, else 1;
/// * `p = 2`, even `a`: exactly 1, since `2 ‖ a`.
pub fn solvability_profile(a: &SquarefreeInt, p: &BigUint) -> SolvabilityProfile {
    debug_assert!(is_prime(p));
    let v = a.value();
    let max_exponent = if *p == BigUint::from(2u32) {
        match residue_mod(v, 8) {
            1 => Exponent::Infinite,
            5 => Exponent::Finite(2),
            _ => Exponent::Finite(1),
        }
    } else {
        match odd_symbol(v, p) {
            1 => Exponent::Infinite,
            0 => Exponent::Finite(1),
            _ => Exponent::Finite(0),
        }
    };
    SolvabilityProfile {
        prime: p.clone(),
        max_exponent,
    }
}

/// Exact truth of `∃x: x² ≡ a (mod pᵏ)` for `k ≥ 1`.
pub fn quad_solvable_mod_pk(a: &SquarefreeInt, p: &BigUint, k: u32) -> bool {
    debug_assert!(k >= 1);
    match solvability_profile(a, p).max_exponent {
        Exponent::Infinite => true,
        Exponent::Finite(e) => k <= e,
    }
}

/// Smallest `E` such that `∏(x² − aᵢ) ≡ 0 (mod p^E)` has no solution, or
/// `Infinite` when some factor is solvable modulo every power of `p`.
///
/// For each `x`, `v_p(x² − aᵢ)` never exceeds factor `i`'s maximal solvable
/// exponent, so `1 + Σ max_exponentᵢ` is out of reach.
pub fn witness_exponent(members: &[SquarefreeInt], p: &BigUint) -> Exponent {
    let mut total = 1u32;
    for a in members {
        match solvability_profile(a, p).max_exponent {
            Exponent::Infinite => return Exponent::Infinite,
            Exponent::Finite(e) => total += e,
        }
    }
    Exponent::Finite(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(v: i64) -> SquarefreeInt {
        SquarefreeInt::from_i64(v).unwrap()
    }
    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }
    fn fam(vs: &[i64]) -> Vec<SquarefreeInt> {
        vs.iter().map(|&v| sf(v)).collect()
    }

    fn scan_solvable(a: i64, m: u64) -> bool {
        let r = a.rem_euclid(m as i64) as u64;
        (0..m).any(|x| (x * x) % m == r)
    }

    #[test]
    fn quad_examples() {
        assert!(quad_solvable_mod_pk(&sf(15), &u(3), 1));
        assert!(!quad_solvable_mod_pk(&sf(15), &u(3), 2));
        for k in 1..=14 {
            assert!(quad_solvable_mod_pk(&sf(17), &u(2), k));
            assert!(scan_solvable(17, 1 << k));
        }
        assert!(quad_solvable_mod_pk(&sf(2161), &u(17), 5));
        assert!(scan_solvable(2161, 17u64.pow(5)));
    }

    #[test]
    fn profile_examples() {
        assert_eq!(solvability_profile(&sf(15), &u(3)).max_exponent, Exponent::Finite(1));
        assert_eq!(solvability_profile(&sf(17), &u(3)).max_exponent, Exponent::Finite(0));
        // 871711 ≡ 3 (mod 4): solvable modulo 2 only
        assert!(scan_solvable(871_711, 2) && !scan_solvable(871_711, 4));
        assert_eq!(solvability_profile(&sf(871_711), &u(2)).max_exponent, Exponent::Finite(1));
        assert_eq!(solvability_profile(&sf(-7), &u(2)).max_exponent, Exponent::Infinite);
        assert_eq!(solvability_profile(&sf(5), &u(2)).max_exponent, Exponent::Finite(2));
        assert_eq!(solvability_profile(&sf(-6), &u(2)).max_exponent, Exponent::Finite(1));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_exponent(&fam(&[15, 17, 255]), &u(3)), Exponent::Finite(3));
        assert_eq!(witness_exponent(&fam(&[15, 17, 557, 255]), &u(5)), Exponent::Finite(3));
        assert_eq!(witness_exponent(&fam(&[15, 17, 255, 2161]), &u(3)), Exponent::Infinite);
    }

    #[test]
    fn witness_never_exceeds_product_lemma_bound() {
        // when no factor is solvable mod p^k, the product is unsolvable mod p^(k m)
        let members = fam(&[15, 17, 557, 255]);
        for p in [3u64, 5] {
            let k = 2;
            assert!(members.iter().all(|a| !quad_solvable_mod_pk(a, &u(p), k)));
            let e = witness_exponent(&members, &u(p)).finite().unwrap();
            assert!(e <= k * members.len() as u32);
        }
    }

    #[test]
    fn exponent_serde() {
        assert_eq!(serde_json::to_string(&Exponent::Infinite).unwrap(), "\"INFINITE\"");
        assert_eq!(serde_json::to_string(&Exponent::Finite(3)).unwrap(), "3");
        let back: Exponent = serde_json::from_str("\"INFINITE\"").unwrap();
        assert_eq!(back, Exponent::Infinite);
        assert!(serde_json::from_str::<Exponent>("\"huge\"").is_err());
    }
}
