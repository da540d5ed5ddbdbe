//! Primality testing.
//!
//! Below [`DETERMINISTIC_BOUND`] the Miller–Rabin test with the first thirteen
//! prime bases is a proof of primality. Above it we run the same strong
//! pseudoprime test followed by a strong Lucas test (Selfridge parameters);
//! no composite is known to pass this combination.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::{mul_mod, pow_mod, primes_below};

/// Inputs below this value are decided deterministically.
///
/// Miller–Rabin with the prime bases 2..=41 has no strong pseudoprime below
/// 3 317 044 064 679 887 385 961 981 (Sorenson and Webster).
pub const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn deterministic_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| DETERMINISTIC_BOUND.parse().expect("valid literal"))
}

pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(1 << 16))
}

/// Primality of a machine word. Exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary-precision natural number.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !strong_probable_prime(n, &BASES) {
        return false;
    }
    if n < deterministic_bound() {
        return true;
    }
    strong_lucas_probable_prime(n)
}

/// Primality of a signed integer; negative values and units are not prime.
pub fn is_prime_int(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Plus => is_prime(n.magnitude()),
        _ => false,
    }
}

/// Whether `n` lies in the range where [`is_prime`] is a proof.
pub fn is_deterministic(n: &BigUint) -> bool {
    n < deterministic_bound()
}

fn strong_probable_prime(n: &BigUint, bases: &[u64]) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in bases {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    if x.is_odd() {
        (x + n) >> 1
    } else {
        x >> 1
    }
}

fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    // Selfridge: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d: i64 = 5;
    loop {
        let j = super::residue::jacobi(&BigInt::from(d), n);
        if j == -1 {
            break;
        }
        if j == 0 && BigUint::from(d.unsigned_abs()) != *n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let p = BigInt::one();
    let q = BigInt::from((1 - d) / 4);
    let d_big = BigInt::from(d);

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v: BigInt = p.clone();
    let mut qk = q.mod_floor(&n_int);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - (&qk * 2u32)).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let nu = half_mod(&p * &u + &v, &n_int).mod_floor(&n_int);
            let nv = half_mod(&d_big * &u + &p * &v, &n_int).mod_floor(&n_int);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk * 2u32)).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}
