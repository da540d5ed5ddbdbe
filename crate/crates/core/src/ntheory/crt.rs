use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::serde_int;
use crate::{Error, Result};

/// `residue mod modulus` with `0 ≤ residue < modulus` and `modulus ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    #[serde(with = "serde_int::big_uint")]
    residue: BigUint,
    #[serde(with = "serde_int::big_uint")]
    modulus: BigUint,
}

impl ResidueClass {
    /// Reduces `residue` into range.
    pub fn new(residue: &BigInt, modulus: &BigUint) -> Result<Self> {
        if *modulus < BigUint::from(2u32) {
            return Err(Error::Domain(format!("modulus {modulus} is below 2")));
        }
        let m = BigInt::from(modulus.clone());
        Ok(Self {
            residue: residue.mod_floor(&m).to_biguint().unwrap(),
            modulus: modulus.clone(),
        })
    }

    pub fn from_u64(residue: u64, modulus: u64) -> Result<Self> {
        Self::new(&BigInt::from(residue), &BigUint::from(modulus))
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        x.mod_floor(&BigInt::from(self.modulus.clone())) == BigInt::from(self.residue.clone())
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Combine classes with pairwise coprime moduli into one class modulo the
/// product.
pub fn crt(classes: &[ResidueClass]) -> Result<ResidueClass> {
    let Some((first, rest)) = classes.split_first() else {
        return Err(Error::Domain("crt needs at least one class".into()));
    };
    let mut residue = BigInt::from(first.residue.clone());
    let mut modulus = BigInt::from(first.modulus.clone());
    for class in rest {
        let m = BigInt::from(class.modulus.clone());
        let e = modulus.extended_gcd(&m);
        if !e.gcd.is_one() {
            return Err(Error::Domain(format!(
                "moduli {modulus} and {m} are not coprime"
            )));
        }
        // residue + modulus * t ≡ r (mod m)  with  t = (r - residue) * modulus⁻¹
        let r = BigInt::from(class.residue.clone());
        let t = ((r - &residue) * e.x).mod_floor(&m);
        residue += &modulus * t;
        modulus *= &m;
        residue = residue.mod_floor(&modulus);
    }
    debug_assert!(!modulus.is_zero());
    ResidueClass::new(&residue, &modulus.to_biguint().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(r: u64, m: u64) -> ResidueClass {
        ResidueClass::from_u64(r, m).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            crt(&[rc(1, 3), rc(1, 5), rc(2, 17), rc(1, 8)]).unwrap(),
            rc(121, 2040)
        );
        assert_eq!(crt(&[rc(2, 3), rc(2, 5)]).unwrap(), rc(2, 15));
        assert_eq!(crt(&[rc(0, 2)]).unwrap(), rc(0, 2));
    }

    #[test]
    fn scan_oracle_for_2040() {
        let targets = [(1u64, 3u64), (1, 5), (2, 17), (1, 8)];
        let hits: Vec<u64> = (0..2040)
            .filter(|x| targets.iter().all(|&(r, m)| x % m == r))
            .collect();
        assert_eq!(hits, vec![121]);
    }

    #[test]
    fn rejects() {
        assert!(crt(&[rc(1, 4), rc(1, 6)]).is_err());
        assert!(crt(&[]).is_err());
        assert!(ResidueClass::from_u64(0, 1).is_err());
    }

    #[test]
    fn negative_residues_reduce() {
        let c = ResidueClass::new(&BigInt::from(-1), &BigUint::from(8u32)).unwrap();
        assert_eq!(c, rc(7, 8));
        assert!(c.contains(&BigInt::from(-9)));
    }
}
