use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ntheory::{is_perfect_square, SquarefreeInt};
use crate::{Error, Result};

/// Smallest family size the intersectivity criterion covers.
pub const MIN_MEMBERS: usize = 3;

/// Distinct square-free integers `a₁, …, a_n` (none equal to 0 or 1, n ≥ 3),
/// standing for the polynomial `∏ (x² − aᵢ)`.
///
/// Order is significant: certificates refer to members by 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SquarefreeInt>", into = "Vec<SquarefreeInt>")]
pub struct QuadraticFamily {
    members: Vec<SquarefreeInt>,
}

impl QuadraticFamily {
    /// Validate raw integers. Each failure mode has its own error variant.
    pub fn validate(raw: &[BigInt]) -> Result<Self> {
        if raw.len() < MIN_MEMBERS {
            return Err(Error::TooFewMembers {
                min: MIN_MEMBERS,
                got: raw.len(),
            });
        }
        let mut members = Vec::with_capacity(raw.len());
        for (i, v) in raw.iter().enumerate() {
            if v.is_zero() || v.is_one() {
                return Err(Error::TrivialMember {
                    value: v.to_string(),
                    position: i + 1,
                });
            }
            if let Some(j) = raw[..i].iter().position(|w| w == v) {
                return Err(Error::DuplicateMember {
                    value: v.to_string(),
                    first: j + 1,
                    second: i + 1,
                });
            }
            let member = SquarefreeInt::new(v).map_err(|_| Error::NotSquarefree {
                value: v.to_string(),
                position: i + 1,
            })?;
            members.push(member);
        }
        Self::from_members(members)
    }

    pub fn validate_i64(raw: &[i64]) -> Result<Self> {
        Self::validate(&raw.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    /// Build from already validated members, checking size and distinctness.
    pub fn from_members(members: Vec<SquarefreeInt>) -> Result<Self> {
        if members.len() < MIN_MEMBERS {
            return Err(Error::TooFewMembers {
                min: MIN_MEMBERS,
                got: members.len(),
            });
        }
        for (i, a) in members.iter().enumerate() {
            if let Some(j) = members[..i].iter().position(|b| b == a) {
                return Err(Error::DuplicateMember {
                    value: a.to_string(),
                    first: j + 1,
                    second: i + 1,
                });
            }
            // square-free and not 1, so x² = a has no rational solution
            if !a.is_negative() && is_perfect_square(a.value().magnitude()) {
                return Err(Error::Domain(format!("{a} is a perfect square")));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[SquarefreeInt] {
        &self.members
    }

    /// Member at 1-based position `index`.
    pub fn member(&self, index: usize) -> &SquarefreeInt {
        &self.members[index - 1]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.members.iter().map(|m| m.value().clone()).collect()
    }

    /// Every prime dividing some member, ascending.
    pub fn primes(&self) -> Vec<BigUint> {
        let set: BTreeSet<&BigUint> = self.members.iter().flat_map(|m| m.primes()).collect();
        set.into_iter().cloned().collect()
    }

    /// Whether any member is negative.
    pub fn has_negative(&self) -> bool {
        self.members.iter().any(|m| m.value().is_negative())
    }
}

impl TryFrom<Vec<SquarefreeInt>> for QuadraticFamily {
    type Error = Error;

    fn try_from(members: Vec<SquarefreeInt>) -> Result<Self> {
        Self::from_members(members)
    }
}

impl From<QuadraticFamily> for Vec<SquarefreeInt> {
    fn from(f: QuadraticFamily) -> Self {
        f.members
    }
}

impl fmt::Display for QuadraticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}
