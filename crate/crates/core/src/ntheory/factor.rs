//! Integer factorization: trial division, Brent's variant of Pollard rho and,
//! for stubborn cofactors, the elliptic curve method.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::arith::{gcd_u64, mul_mod};
use super::primality::{is_prime, is_prime_u64, small_primes};
use super::ecm;
use crate::serde_int;
use crate::{Error, Result};

/// A nonzero integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factored {
    #[serde(with = "serde_int::big_int")]
    value: BigInt,
    sign: i8,
    #[serde(with = "serde_int::prime_powers")]
    factors: Vec<(BigUint, u32)>,
}

impl Factored {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Prime powers, strictly ascending by prime.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the primes occurring to an odd power.
    pub fn squarefree_part(&self) -> BigUint {
        self.factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    /// The positive product of distinct known primes.
    pub(crate) fn from_distinct_primes(mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        primes.dedup();
        let value: BigUint = primes.iter().product();
        Factored {
            value: BigInt::from(value),
            sign: 1,
            factors: primes.into_iter().map(|p| (p, 1)).collect(),
        }
    }

    /// Multiply the factorization back out.
    pub fn reconstruct(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        let v = BigInt::from(magnitude);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// Factor a nonzero integer.
pub fn factorize(n: &BigInt) -> Result<Factored> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let factors = factor_natural(n.magnitude()).into_iter().collect();
    Ok(Factored {
        value: n.clone(),
        sign,
        factors,
    })
}

/// Factor a positive integer into a prime → exponent map.
pub(crate) fn factor_natural(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest < BigUint::from(p * p) {
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.insert(BigUint::from(p), e);
        }
        if rest.is_one() {
            return out;
        }
    }
    let mut work = vec![(rest, 1u32)];
    while let Some((m, mult)) = work.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += mult;
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            work.push((root, mult * k));
            continue;
        }
        let d = split(&m);
        let other = &m / &d;
        work.push((d, mult));
        work.push((other, mult));
    }
    out
}

/// `m = root^k` with `k ≥ 2` maximal, if such a decomposition exists.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits() as u32;
    let mut best = None;
    for k in 2..=bits {
        let r = m.nth_root(k);
        if r < BigUint::from(2u32) {
            break;
        }
        if r.pow(k) == *m {
            best = Some((r, k));
        }
    }
    best
}

/// A non-trivial divisor of the odd composite, non-perfect-power `m`.
fn split(m: &BigUint) -> BigUint {
    if let Some(small) = m.to_u64() {
        return BigUint::from(rho_u64(small));
    }
    for c in 1..=2u32 {
        if let Some(d) = rho_big(m, c, 1 << 15) {
            return d;
        }
    }
    ecm::find_factor(m)
}

fn rho_u64(n: u64) -> u64 {
    debug_assert!(!is_prime_u64(n) && n % 2 == 1);
    for c in 1.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint, c: u32, budget: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..128.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += 128;
        }
        spent += 2 * r;
        r *= 2;
        if spent > budget && g.is_one() {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Square-free part of `|n|`: the product of primes dividing `n` to an odd
/// power. Note this is *not* the radical.
pub fn rad(n: &BigInt) -> Result<BigUint> {
    Ok(factorize(n)?.squarefree_part())
}

/// Whether no prime square divides `n`.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::Domain("0 is not square-free-testable".into()));
    }
    let m = n.abs().to_biguint().unwrap();
    // cheap rejection before factoring
    for &p in &small_primes()[..64] {
        if (&m % (p * p)).is_zero() {
            return Ok(false);
        }
    }
    Ok(factor_natural(&m).values().all(|&e| e == 1))
}
