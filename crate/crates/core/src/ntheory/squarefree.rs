use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::factor::{factorize, Factored};
use crate::{Error, Result};

/// A nonzero square-free integer other than 1, with its factorization.
///
/// Negative values are allowed; `-1` is a valid member.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Factored", into = "Factored")]
pub struct SquarefreeInt {
    factorization: Factored,
}

impl SquarefreeInt {
    pub fn new(value: &BigInt) -> Result<Self> {
        if value.is_one() || value.magnitude().bits() == 0 {
            return Err(Error::Domain(format!("{value} is 0 or 1")));
        }
        let factorization = factorize(value)?;
        Self::try_from(factorization)
    }

    pub fn from_i64(value: i64) -> Result<Self> {
        Self::new(&BigInt::from(value))
    }

    pub fn value(&self) -> &BigInt {
        self.factorization.value()
    }

    pub fn factorization(&self) -> &Factored {
        &self.factorization
    }

    /// Primes dividing the value, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factorization.primes()
    }

    pub fn is_negative(&self) -> bool {
        self.value().is_negative()
    }

    /// Whether `p` divides the value.
    pub fn divisible_by(&self, p: &BigUint) -> bool {
        self.factorization.primes().any(|q| q == p)
    }
}

impl TryFrom<Factored> for SquarefreeInt {
    type Error = Error;

    fn try_from(factorization: Factored) -> Result<Self> {
        if factorization.value().is_one() || factorization.value().magnitude().bits() == 0 {
            return Err(Error::Domain(format!(
                "{} is 0 or 1",
                factorization.value()
            )));
        }
        if factorization.reconstruct() != *factorization.value() {
            return Err(Error::Domain("factorization does not match value".into()));
        }
        if !factorization.is_squarefree() {
            return Err(Error::Domain(format!(
                "{} is not square-free",
                factorization.value()
            )));
        }
        Ok(Self { factorization })
    }
}

impl From<SquarefreeInt> for Factored {
    fn from(s: SquarefreeInt) -> Self {
        s.factorization
    }
}

impl PartialEq for SquarefreeInt {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl Eq for SquarefreeInt {}

impl fmt::Display for SquarefreeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        assert!(SquarefreeInt::from_i64(15).is_ok());
        assert!(SquarefreeInt::from_i64(-1).is_ok());
        assert!(SquarefreeInt::from_i64(-7).is_ok());
        assert!(SquarefreeInt::from_i64(1).is_err());
        assert!(SquarefreeInt::from_i64(0).is_err());
        assert!(SquarefreeInt::from_i64(12).is_err());
        assert!(SquarefreeInt::from_i64(-18).is_err());
    }
}
