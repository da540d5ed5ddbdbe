//! Minimal intersectivity.
//!
//! A proper nonconstant divisor of `∏(x² − aᵢ)` is, up to sign, a product
//! of a proper subset of the irreducible factors, so it divides one of the
//! `n` drop-one products. A multiple of an intersective polynomial is again
//! intersective, hence checking those `n` divisors decides all of them.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::certifier::{certify_intersective, CertifyOptions, IntersectivityCertificate, Verdict};
use crate::family::QuadraticFamily;
use crate::ntheory::witness_exponent;
use crate::serde_int;
use crate::{Error, Result};

/// Which divisors the report covers. Only one reduction exists; it is
/// recorded so the report is self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reduction {
    DropOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinimalityVerdict {
    Minimal,
    /// Positions whose removal leaves an intersective divisor.
    NotMinimal { offending: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub dropped_index: usize,
    pub certificate: IntersectivityCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    #[serde(with = "serde_int::big_int_vec")]
    pub family: Vec<BigInt>,
    pub reduction: Reduction,
    pub base_certificate: IntersectivityCertificate,
    pub divisor_reports: Vec<DivisorReport>,
    pub verdict: MinimalityVerdict,
}

impl MinimalityReport {
    pub fn is_minimal(&self) -> bool {
        self.verdict == MinimalityVerdict::Minimal
    }
}

/// The family without member `r` (1-based), order preserved.
pub fn drop_one(family: &QuadraticFamily, r: usize) -> Result<QuadraticFamily> {
    let n = family.len();
    if n < 4 {
        return Err(Error::UnsupportedDivisorSize(n));
    }
    if r == 0 || r > n {
        return Err(Error::Domain(format!("index {r} outside 1..={n}")));
    }
    let mut members = family.members().to_vec();
    members.remove(r - 1);
    QuadraticFamily::from_members(members)
}

pub fn certify_minimal(
    family: &QuadraticFamily,
    options: &CertifyOptions,
) -> Result<MinimalityReport> {
    let n = family.len();
    if n < 4 {
        return Err(Error::UnsupportedDivisorSize(n));
    }
    let base = certify_intersective(family, options);
    if base.verdict != Verdict::Intersective {
        return Err(Error::NotIntersectiveBase);
    }
    let mut divisor_reports = Vec::with_capacity(n);
    let mut offending = Vec::new();
    for r in 1..=n {
        let divisor = drop_one(family, r)?;
        let certificate = certify_intersective(&divisor, options);
        match certificate.verdict {
            Verdict::Intersective => offending.push(r),
            Verdict::NotIntersective => {
                if let Some(w) = &certificate.witness_modulus {
                    // the full family is intersective, so it cannot be
                    // obstructed at the divisor's witness prime
                    if !witness_exponent(family.members(), &w.prime).is_infinite() {
                        return Err(Error::Postcondition(format!(
                            "witness prime {} of divisor {r} obstructs the full family",
                            w.prime
                        )));
                    }
                }
            }
        }
        log::debug!("drop {r}: {:?}", certificate.verdict);
        divisor_reports.push(DivisorReport {
            dropped_index: r,
            certificate,
        });
    }
    let verdict = if offending.is_empty() {
        MinimalityVerdict::Minimal
    } else {
        MinimalityVerdict::NotMinimal { offending }
    };
    Ok(MinimalityReport {
        family: family.values(),
        reduction: Reduction::DropOne,
        base_certificate: base,
        divisor_reports,
        verdict,
    })
}
