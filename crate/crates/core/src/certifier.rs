//! Intersectivity of `∏(x² − aᵢ)`.
//!
//! For distinct square-free `aᵢ ∉ {0, 1}` with `n ≥ 3`, the product has a
//! root modulo every integer iff
//!
//! 1. some odd-size subset `T` has `∏_{j∈T} aⱼ` a perfect square, and for
//!    every `j ∈ T` and odd prime `p | aⱼ` some other member is a nonzero
//!    square modulo `p`;
//! 2. some member is `≡ 1 (mod 8)`.
//!
//! [`certify_intersective`] checks these conditions and records the evidence.
//! [`decide_by_local_solvability`] reaches the same verdict prime by prime
//! and exists only for cross-validation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::family::QuadraticFamily;
use crate::gf2::{exponent_matrix, odd_square_subset, SubsetWitness};
use crate::ntheory::arith::primes_below;
use crate::ntheory::{
    sqrt_mod_prime, symbol_for_known_prime, witness_exponent, Exponent,
};
use crate::oracle;
use crate::serde_int;
use crate::{Error, Result};

/// Witness moduli up to this size are confirmed by exhaustive root search.
pub const SCAN_VERIFY_LIMIT: u64 = 1_000_000;

/// Default upper bound on the prime scan in [`find_witness_modulus`].
pub const DEFAULT_SCAN_BOUND: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Intersective,
    NotIntersective,
}

/// `(aᵢ/p) = +1` for a prime `p | aⱼ`, `j ∈ T`, `i ≠ j`; `root² ≡ aᵢ (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreWitness {
    pub j: usize,
    #[serde(with = "serde_int::big_uint")]
    pub prime: BigUint,
    pub i: usize,
    pub symbol: i8,
    #[serde(with = "serde_int::big_uint")]
    pub root: BigUint,
}

/// The first condition that fails, in checking order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Failure {
    NoOddSquareSubset,
    LegendreGap {
        subset: SubsetWitness,
        j: usize,
        #[serde(with = "serde_int::big_uint")]
        prime: BigUint,
    },
    NoMod8Member,
}

/// A prime power modulo which the product has no root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessModulus {
    #[serde(with = "serde_int::big_uint")]
    pub prime: BigUint,
    pub exponent: u32,
    #[serde(with = "serde_int::big_uint")]
    pub modulus: BigUint,
    pub verified_by_scan: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectivityCertificate {
    #[serde(with = "serde_int::big_int_vec")]
    pub family: Vec<BigInt>,
    pub verdict: Verdict,
    pub subset_t: Option<SubsetWitness>,
    pub legendre_witnesses: Vec<LegendreWitness>,
    pub mod8_witness: Option<usize>,
    pub failure: Option<Failure>,
    pub witness_modulus: Option<WitnessModulus>,
    /// Set when a negative verdict rests on the criterion alone, without a
    /// witness modulus.
    pub prop1_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub scan_bound: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            scan_bound: DEFAULT_SCAN_BOUND,
        }
    }
}

/// Condition 1(a): an odd-size subset with square product.
pub fn check_condition_1a(family: &QuadraticFamily) -> Option<SubsetWitness> {
    odd_square_subset(&exponent_matrix(family))
}

/// Condition 1(b) for the subset `t`. Pairs `(j, p)` are scanned with `j`
/// ascending, then `p` ascending; each gets the smallest admissible `i`. On
/// failure returns the first uncovered pair.
pub fn check_condition_1b(
    family: &QuadraticFamily,
    t: &SubsetWitness,
) -> std::result::Result<Vec<LegendreWitness>, (usize, BigUint)> {
    let two = BigUint::from(2u32);
    let mut out = Vec::new();
    for &j in t.indices() {
        for p in family.member(j).primes().filter(|&p| *p != two) {
            let found = (1..=family.len())
                .filter(|&i| i != j)
                .find(|&i| symbol_for_known_prime(family.member(i).value(), p) == 1);
            match found {
                Some(i) => {
                    let root = sqrt_mod_prime(family.member(i).value(), p)
                        .expect("symbol is +1");
                    out.push(LegendreWitness {
                        j,
                        prime: p.clone(),
                        i,
                        symbol: 1,
                        root,
                    });
                }
                None => return Err((j, p.clone())),
            }
        }
    }
    Ok(out)
}

/// Condition 2: smallest position holding a member `≡ 1 (mod 8)` other than 1
/// (negative members such as −7 qualify).
pub fn check_condition_2(family: &QuadraticFamily) -> Option<usize> {
    let eight = BigInt::from(8);
    family
        .members()
        .iter()
        .position(|m| m.value().mod_floor(&eight).is_one() && !m.value().is_one())
        .map(|i| i + 1)
}

/// Decide intersectivity and attach the evidence.
pub fn certify_intersective(
    family: &QuadraticFamily,
    options: &CertifyOptions,
) -> IntersectivityCertificate {
    let mut cert = IntersectivityCertificate {
        family: family.values(),
        verdict: Verdict::NotIntersective,
        subset_t: None,
        legendre_witnesses: Vec::new(),
        mod8_witness: None,
        failure: None,
        witness_modulus: None,
        prop1_only: false,
    };
    let failure = match check_condition_1a(family) {
        None => Some(Failure::NoOddSquareSubset),
        Some(t) => match check_condition_1b(family, &t) {
            Err((j, prime)) => Some(Failure::LegendreGap {
                subset: t,
                j,
                prime,
            }),
            Ok(witnesses) => match check_condition_2(family) {
                None => Some(Failure::NoMod8Member),
                Some(i) => {
                    cert.verdict = Verdict::Intersective;
                    cert.subset_t = Some(t);
                    cert.legendre_witnesses = witnesses;
                    cert.mod8_witness = Some(i);
                    None
                }
            },
        },
    };
    if let Some(failure) = failure {
        cert.failure = Some(failure);
        match find_witness_modulus(family, options.scan_bound) {
            Ok(w) => cert.witness_modulus = Some(w),
            Err(_) => cert.prop1_only = true,
        }
    }
    cert
}

/// Search for a prime power modulo which the product has no root.
///
/// Candidates are the primes dividing `2·∏aᵢ` with a finite witness exponent,
/// and primes `p ∤ 2·∏aᵢ` below `scan_bound` at which every member is a
/// non-residue (exponent 1). The smallest modulus wins; ties go to the
/// divisor primes, then to the smaller prime.
pub fn find_witness_modulus(family: &QuadraticFamily, scan_bound: u64) -> Result<WitnessModulus> {
    let two = BigUint::from(2u32);
    let mut support = family.primes();
    if !support.contains(&two) {
        support.insert(0, two);
    }
    let mut best: Option<(BigUint, BigUint, u32)> = None;
    for p in &support {
        if let Exponent::Finite(e) = witness_exponent(family.members(), p) {
            let modulus = p.pow(e);
            if best.as_ref().is_none_or(|(m, _, _)| modulus < *m) {
                best = Some((modulus, p.clone(), e));
            }
        }
    }
    for p in primes_below(scan_bound.saturating_add(1) as usize).into_iter().skip(1) {
        let pb = BigUint::from(p);
        if best.as_ref().is_some_and(|(m, _, _)| pb >= *m) {
            break;
        }
        if support.contains(&pb) {
            continue;
        }
        let all_non_residues = family
            .members()
            .iter()
            .all(|a| symbol_for_known_prime(a.value(), &pb) == -1);
        if all_non_residues {
            best = Some((pb.clone(), pb, 1));
            break;
        }
    }
    let (modulus, prime, exponent) = best.ok_or_else(|| Error::SearchExhausted {
        class: format!("witness primes up to {scan_bound}"),
        examined: scan_bound,
    })?;
    let verified_by_scan = match modulus.to_u64() {
        Some(m) if m <= SCAN_VERIFY_LIMIT => {
            let clean = oracle::roots_mod(family, m).is_empty();
            assert!(clean, "witness {prime}^{exponent} admits a root");
            true
        }
        _ => false,
    };
    Ok(WitnessModulus {
        prime,
        exponent,
        modulus,
        verified_by_scan,
    })
}

/// Decide intersectivity prime by prime: every prime dividing `2·∏aᵢ` must
/// have an unbounded witness exponent, and an odd square subset must exist
/// (which forces a residue among the members at every other prime).
pub fn decide_by_local_solvability(family: &QuadraticFamily) -> Verdict {
    let two = BigUint::from(2u32);
    let mut support = family.primes();
    if !support.contains(&two) {
        support.push(two);
    }
    let local = support
        .iter()
        .all(|p| witness_exponent(family.members(), p).is_infinite());
    if local && check_condition_1a(family).is_some() {
        Verdict::Intersective
    } else {
        Verdict::NotIntersective
    }
}
