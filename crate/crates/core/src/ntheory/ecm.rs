//! Lenstra's elliptic curve method on Montgomery curves, x-only arithmetic.
//!
//! Used by the factorizer once trial division and a short Pollard rho run
//! have failed. Curves use Suyama's parametrization with deterministic
//! seeds, so the sequence of curves tried for a given input is fixed.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::primes_below;

/// Stage-2 giant step.
const WHEEL: u64 = 2310;

/// (B1, number of curves) per round; B2 = 100 * B1. The last round repeats
/// until a factor turns up.
const SCHEDULE: &[(u64, usize)] = &[(2_000, 32), (11_000, 96), (50_000, 256), (250_000, 768)];

/// Modular arithmetic used by the curve code.
trait Arith {
    type E: Clone;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sqr(&self, a: &Self::E) -> Self::E {
        self.mul(a, a)
    }
    /// Map a reduced natural number into the representation.
    fn import(&self, x: &BigUint) -> Self::E;
    /// A value with the same gcd with `n` as the element.
    fn gcd_view(&self, a: &Self::E) -> BigUint;
}

/// Plain `BigUint` arithmetic, for moduli wider than the fixed-width paths.
struct BigRing<'a> {
    n: &'a BigUint,
}

impl Arith for BigRing<'_> {
    type E = BigUint;
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if &s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.n
    }
    fn import(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn gcd_view(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
}

/// Montgomery arithmetic modulo an odd `n < 2^(64·N)`.
struct Mont<const N: usize> {
    n: [u64; N],
    /// −n⁻¹ mod 2⁶⁴
    n_prime: u64,
    /// R² mod n, R = 2^(64·N)
    r2: [u64; N],
}

fn to_limbs<const N: usize>(x: &BigUint) -> [u64; N] {
    let mut out = [0u64; N];
    for (o, d) in out.iter_mut().zip(x.iter_u64_digits()) {
        *o = d;
    }
    out
}

fn from_limbs(x: &[u64]) -> BigUint {
    let mut bytes = Vec::with_capacity(x.len() * 8);
    for d in x {
        bytes.extend_from_slice(&d.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes)
}

impl<const N: usize> Mont<N> {
    fn new(n: &BigUint) -> Self {
        debug_assert!(n.is_odd() && n.bits() <= 64 * N as u64);
        let limbs = to_limbs::<N>(n);
        // Newton iteration for n⁻¹ mod 2⁶⁴
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        let r2 = (BigUint::one() << (128 * N)) % n;
        Mont {
            n: limbs,
            n_prime: inv.wrapping_neg(),
            r2: to_limbs(&r2),
        }
    }

    #[inline]
    fn geq_n(&self, x: &[u64; N]) -> bool {
        for i in (0..N).rev() {
            if x[i] != self.n[i] {
                return x[i] > self.n[i];
            }
        }
        true
    }

    #[inline]
    fn sub_n(&self, x: &mut [u64; N]) {
        let mut borrow = 0u64;
        for i in 0..N {
            let (d, b1) = x[i].overflowing_sub(self.n[i]);
            let (d, b2) = d.overflowing_sub(borrow);
            x[i] = d;
            borrow = (b1 | b2) as u64;
        }
    }
}

impl<const N: usize> Arith for Mont<N> {
    type E = [u64; N];

    #[inline]
    fn add(&self, a: &[u64; N], b: &[u64; N]) -> [u64; N] {
        let mut out = [0u64; N];
        let mut carry = 0u64;
        for i in 0..N {
            let (s, c1) = a[i].overflowing_add(b[i]);
            let (s, c2) = s.overflowing_add(carry);
            out[i] = s;
            carry = (c1 | c2) as u64;
        }
        if carry != 0 || self.geq_n(&out) {
            self.sub_n(&mut out);
        }
        out
    }

    #[inline]
    fn sub(&self, a: &[u64; N], b: &[u64; N]) -> [u64; N] {
        let mut out = [0u64; N];
        let mut borrow = 0u64;
        for i in 0..N {
            let (d, b1) = a[i].overflowing_sub(b[i]);
            let (d, b2) = d.overflowing_sub(borrow);
            out[i] = d;
            borrow = (b1 | b2) as u64;
        }
        if borrow != 0 {
            let mut carry = 0u64;
            for i in 0..N {
                let (s, c1) = out[i].overflowing_add(self.n[i]);
                let (s, c2) = s.overflowing_add(carry);
                out[i] = s;
                carry = (c1 | c2) as u64;
            }
        }
        out
    }

    /// CIOS Montgomery product `a·b·R⁻¹ mod n`.
    #[inline]
    fn mul(&self, a: &[u64; N], b: &[u64; N]) -> [u64; N] {
        let mut t = [0u64; N];
        let mut t_hi = 0u64;
        for &bi in b.iter() {
            let mut carry = 0u128;
            for j in 0..N {
                let v = t[j] as u128 + a[j] as u128 * bi as u128 + carry;
                t[j] = v as u64;
                carry = v >> 64;
            }
            let v = t_hi as u128 + carry;
            t_hi = v as u64;
            let t_top = (v >> 64) as u64;

            let m = t[0].wrapping_mul(self.n_prime);
            let v = t[0] as u128 + m as u128 * self.n[0] as u128;
            let mut carry = v >> 64;
            for j in 1..N {
                let v = t[j] as u128 + m as u128 * self.n[j] as u128 + carry;
                t[j - 1] = v as u64;
                carry = v >> 64;
            }
            let v = t_hi as u128 + carry;
            t[N - 1] = v as u64;
            t_hi = t_top + (v >> 64) as u64;
        }
        if t_hi != 0 || self.geq_n(&t) {
            self.sub_n(&mut t);
        }
        t
    }

    fn import(&self, x: &BigUint) -> [u64; N] {
        self.mul(&to_limbs(x), &self.r2)
    }

    fn gcd_view(&self, a: &[u64; N]) -> BigUint {
        from_limbs(a)
    }
}

#[derive(Clone)]
struct Point<E> {
    x: E,
    z: E,
}

struct Curve<A: Arith> {
    ring: A,
    a24: A::E,
}

impl<A: Arith> Curve<A> {
    fn double(&self, p: &Point<A::E>) -> Point<A::E> {
        let r = &self.ring;
        let s = r.sqr(&r.add(&p.x, &p.z));
        let d = r.sqr(&r.sub(&p.x, &p.z));
        let t = r.sub(&s, &d);
        Point {
            x: r.mul(&s, &d),
            z: r.mul(&t, &r.add(&d, &r.mul(&self.a24, &t))),
        }
    }

    fn add(&self, p: &Point<A::E>, q: &Point<A::E>, diff: &Point<A::E>) -> Point<A::E> {
        let r = &self.ring;
        let u = r.mul(&r.sub(&p.x, &p.z), &r.add(&q.x, &q.z));
        let v = r.mul(&r.add(&p.x, &p.z), &r.sub(&q.x, &q.z));
        Point {
            x: r.mul(&diff.z, &r.sqr(&r.add(&u, &v))),
            z: r.mul(&diff.x, &r.sqr(&r.sub(&u, &v))),
        }
    }

    fn multiply(&self, k: u64, p: &Point<A::E>) -> Point<A::E> {
        debug_assert!(k >= 1);
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = self.double(p);
        for i in (0..63 - k.leading_zeros()).rev() {
            if (k >> i) & 1 == 1 {
                r0 = self.add(&r0, &r1, p);
                r1 = self.double(&r1);
            } else {
                r1 = self.add(&r0, &r1, p);
                r0 = self.double(&r0);
            }
        }
        r0
    }
}

/// Primes up to the stage-2 bound of schedule round `level`, as a list and a
/// membership table.
struct PrimeTable {
    list: Vec<u64>,
    flags: Vec<bool>,
}

fn prime_table(level: usize) -> &'static PrimeTable {
    static TABLES: [OnceLock<PrimeTable>; 4] = [const { OnceLock::new() }; 4];
    TABLES[level].get_or_init(|| {
        let limit = (100 * SCHEDULE[level].0 + 2 * WHEEL) as usize;
        let list = primes_below(limit);
        let mut flags = vec![false; limit];
        for &p in &list {
            flags[p as usize] = true;
        }
        PrimeTable { list, flags }
    })
}

fn nontrivial(g: BigUint, n: &BigUint) -> Option<BigUint> {
    (!g.is_one() && &g != n && !g.is_zero()).then_some(g)
}

/// Suyama's curve for `sigma`: starting point and `(A+2)/4`, or a factor
/// of `n` stumbled on while inverting.
fn suyama(n: &BigUint, sigma: u64) -> Result<(BigUint, BigUint, BigUint), Option<BigUint>> {
    let r = BigRing { n };
    let s = BigUint::from(sigma) % n;
    let u = r.sub(&r.sqr(&s), &(BigUint::from(5u32) % n));
    let v = (&s * 4u32) % n;
    let u3 = r.mul(&r.sqr(&u), &u);
    let v3 = r.mul(&r.sqr(&v), &v);
    let vmu = r.sub(&v, &u);
    let num = r.mul(
        &r.mul(&r.sqr(&vmu), &vmu),
        &r.add(&((&u * 3u32) % n), &v),
    );
    let den = (r.mul(&u3, &v) * 16u32) % n;
    let g = den.gcd(n);
    if !g.is_one() {
        return Err(nontrivial(g, n));
    }
    let inv = mod_inverse(&den, n).expect("coprime");
    Ok((u3, v3, r.mul(&num, &inv)))
}

fn run_curve<A: Arith>(ring: A, n: &BigUint, sigma: u64, level: usize) -> Option<BigUint> {
    let b1 = SCHEDULE[level].0;
    let b2 = 100 * b1;
    let table = prime_table(level);
    let (x0, z0, a24) = match suyama(n, sigma) {
        Ok(c) => c,
        Err(f) => return f,
    };
    let curve = Curve {
        a24: ring.import(&a24),
        ring,
    };
    let r = &curve.ring;
    let mut q = Point {
        x: r.import(&x0),
        z: r.import(&z0),
    };

    // stage 1
    for &p in table.list.iter().take_while(|&&p| p <= b1) {
        let mut pk = p;
        while pk <= b1 / p {
            pk *= p;
        }
        q = curve.multiply(pk, &q);
    }
    let g = r.gcd_view(&q.z).gcd(n);
    if !g.is_one() {
        return nontrivial(g, n);
    }

    // stage 2: baby steps j·Q for odd j < WHEEL/2 coprime to WHEEL, giant
    // steps m·WHEEL·Q; a prime m·WHEEL ± j is hit when the x-coordinates agree.
    let half = (WHEEL / 2) as usize;
    let two_q = curve.double(&q);
    let mut baby = Vec::new();
    let mut prev = q.clone();
    let mut cur = q.clone();
    let mut j = 1;
    while j < half {
        if (j as u64).gcd(&WHEEL) == 1 {
            baby.push((j as u64, cur.clone()));
        }
        let next = if j == 1 {
            curve.add(&two_q, &q, &q)
        } else {
            curve.add(&cur, &two_q, &prev)
        };
        prev = cur;
        cur = next;
        j += 2;
    }

    let hit = |x: u64| x > b1 && x <= b2 && table.flags[x as usize];
    let giant = curve.multiply(WHEEL, &q);
    let m0 = (b1 / WHEEL).max(1);
    let (mut g_prev, mut g_cur) = if m0 == 1 {
        (None, giant.clone())
    } else {
        (
            Some(curve.multiply((m0 - 1) * WHEEL, &q)),
            curve.multiply(m0 * WHEEL, &q),
        )
    };
    let mut acc = r.import(&BigUint::one());
    let mut m = m0;
    while m * WHEEL <= b2 + WHEEL {
        let centre = m * WHEEL;
        for (j, bp) in &baby {
            if hit(centre + j) || hit(centre - j) {
                let t = r.sub(&r.mul(&g_cur.x, &bp.z), &r.mul(&bp.x, &g_cur.z));
                acc = r.mul(&acc, &t);
            }
        }
        let next = match &g_prev {
            None => curve.double(&g_cur),
            Some(prev) => curve.add(&g_cur, &giant, prev),
        };
        g_prev = Some(std::mem::replace(&mut g_cur, next));
        m += 1;
    }
    nontrivial(r.gcd_view(&acc).gcd(n), n)
}

fn run_curve_sized(n: &BigUint, sigma: u64, level: usize) -> Option<BigUint> {
    match n.bits().div_ceil(64) {
        0..=2 => run_curve(Mont::<2>::new(n), n, sigma, level),
        3 => run_curve(Mont::<3>::new(n), n, sigma, level),
        4 => run_curve(Mont::<4>::new(n), n, sigma, level),
        5 | 6 => run_curve(Mont::<6>::new(n), n, sigma, level),
        7 | 8 => run_curve(Mont::<8>::new(n), n, sigma, level),
        _ => run_curve(BigRing { n }, n, sigma, level),
    }
}

pub(crate) fn mod_inverse(a: &BigUint, n: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    let a = BigInt::from(a.clone());
    let n_int = BigInt::from(n.clone());
    let e = a.extended_gcd(&n_int);
    if !e.gcd.is_one() {
        return None;
    }
    e.x.mod_floor(&n_int).to_biguint()
}

/// Find a non-trivial factor of the odd composite `n`, which must not be a
/// perfect power.
pub(crate) fn find_factor(n: &BigUint) -> BigUint {
    let mut sigma = 6u64;
    for round in 0.. {
        let level = round.min(SCHEDULE.len() - 1);
        for _ in 0..SCHEDULE[level].1 {
            if let Some(f) = run_curve_sized(n, sigma, level) {
                return f;
            }
            sigma += 1;
        }
    }
    unreachable!("schedule loop is unbounded")
}


#[cfg(test)]
mod arith_tests {
    use super::*;

    #[test]
    fn montgomery_matches_bigint() {
        let moduli = [
            "2881057373263945657323238342922304190321",
            "340282366920938463463374607431768211297",
            "57114060077255412860546177956372685236283571874040868571",
        ];
        for m in moduli {
            let n: BigUint = m.parse().unwrap();
            let a = (&n >> 3u32) + 12345u32;
            let b = (&n >> 1u32) + 999u32;
            let big = BigRing { n: &n };
            let check = |mont_prod: BigUint| assert_eq!(mont_prod, big.mul(&a, &b), "{m}");
            match n.bits().div_ceil(64) {
                2 => {
                    let r = Mont::<2>::new(&n);
                    let p = r.mul(&r.import(&a), &r.import(&b));
                    check(from_limbs(&r.mul(&p, &to_limbs(&BigUint::one()))));
                }
                3 => {
                    let r = Mont::<3>::new(&n);
                    let p = r.mul(&r.import(&a), &r.import(&b));
                    let s = r.sub(&r.import(&a), &r.import(&b));
                    check(from_limbs(&r.mul(&p, &to_limbs(&BigUint::one()))));
                    let s = from_limbs(&r.mul(&s, &to_limbs(&BigUint::one())));
                    assert_eq!(s, big.sub(&a, &b));
                }
                _ => unreachable!(),
            }
        }
    }
}
