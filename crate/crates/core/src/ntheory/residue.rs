//! Residue symbols and square roots modulo a prime.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::{mul_mod, pow_mod};
use super::primality::is_prime;
use crate::{Error, Result};

fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i8 {
    assert!(n.is_odd(), "jacobi symbol needs an odd modulus");
    let n_int = BigInt::from(n.clone());
    let reduced = a.mod_floor(&n_int).to_biguint().expect("non-negative");
    if let Some(small_n) = n.to_u64() {
        return jacobi_u64(reduced.to_u64().expect("reduced below n"), small_n);
    }
    let mut a = reduced;
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        a >>= twos;
        if twos % 2 == 1 {
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn check_odd_prime(p: &BigUint) -> Result<()> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigUint) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(jacobi(a, p))
}

/// Legendre symbol with a word-sized prime; the caller guarantees `p` is an
/// odd prime.
pub(crate) fn legendre_unchecked_u64(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
    jacobi_u64(r, p)
}

/// Euler's criterion `a^((p-1)/2) mod p`, mapped onto {-1, 0, 1}.
pub fn euler_criterion(a: &BigInt, p: &BigUint) -> i8 {
    let p_int = BigInt::from(p.clone());
    let r = a.mod_floor(&p_int).to_biguint().unwrap();
    let e = (p - 1u32) >> 1;
    let v = r.modpow(&e, p);
    if v.is_zero() {
        0
    } else if v.is_one() {
        1
    } else {
        -1
    }
}

/// The smaller square root of `a` modulo the odd prime `p` (Tonelli–Shanks).
///
/// Requires `(a/p) = +1`; the result `r` satisfies `r² ≡ a` and
/// `0 ≤ r ≤ (p−1)/2`.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigUint) -> Result<BigUint> {
    if legendre(a, p)? != 1 {
        return Err(Error::Domain(format!("{a} is not a quadratic residue mod {p}")));
    }
    let p_int = BigInt::from(p.clone());
    let a = a.mod_floor(&p_int).to_biguint().unwrap();
    let root = if let (Some(a64), Some(p64)) = (a.to_u64(), p.to_u64()) {
        BigUint::from(tonelli_shanks_u64(a64, p64))
    } else {
        tonelli_shanks(&a, p)
    };
    let other = p - &root;
    Ok(if other < root { other } else { root })
}

fn tonelli_shanks_u64(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while jacobi_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

fn tonelli_shanks(a: &BigUint, p: &BigUint) -> BigUint {
    let one = BigUint::one();
    let p_minus_1 = p - &one;
    let s = p_minus_1.trailing_zeros().unwrap_or(0);
    let q = &p_minus_1 >> s;
    let mut z = BigUint::from(2u32);
    while jacobi(&BigInt::from(z.clone()), p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    r
}
