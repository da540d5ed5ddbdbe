//! Brute-force ground truth.
//!
//! Everything here works by direct evaluation: root search modulo `m`,
//! square-free counting, and re-verification of certificates. Nothing from
//! the certifier or the GF(2) code is reused, so agreement between the two
//! sides is meaningful.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certifier::{Failure, IntersectivityCertificate, Verdict};
use crate::family::QuadraticFamily;
use crate::minimality::{MinimalityReport, MinimalityVerdict};
use crate::ntheory::{
    crt, factorize, is_perfect_square, is_prime, is_prime_u64, legendre, witness_exponent, Exponent,
    ResidueClass,
};
use crate::serde_int;
use crate::{Error, Result};

/// Moduli up to this size are checked by exhaustive root search during
/// certificate verification.
pub const SCAN_LIMIT: u64 = 1_000_000;

/// Families larger than this cannot have a missing odd square subset
/// verified by enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

/// Residues `a mod m` of the members.
fn reduced(family: &QuadraticFamily, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    family
        .members()
        .iter()
        .map(|a| a.value().mod_floor(&mb).to_u64().expect("reduced below m"))
        .collect()
}

fn is_root(x: u64, reduced: &[u64], m: u64) -> bool {
    if m <= u32::MAX as u64 {
        // products of two residues fit in a u64
        let sq = x * x % m;
        let mut acc = 1u64;
        for &a in reduced {
            acc = acc * ((sq + m - a) % m) % m;
            if acc == 0 {
                return true;
            }
        }
        return false;
    }
    let m128 = m as u128;
    let sq = (x as u128 * x as u128 % m128) as u64;
    let mut acc = 1u128;
    for &a in reduced {
        acc = acc * ((sq + m - a) % m) as u128 % m128;
        if acc == 0 {
            return true;
        }
    }
    false
}

/// All `x ∈ [0, m)` with `∏(x² − aᵢ) ≡ 0 (mod m)`.
pub fn roots_mod(family: &QuadraticFamily, m: u64) -> Vec<u64> {
    assert!(m >= 2, "modulus must be at least 2");
    let a = reduced(family, m);
    (0..m).filter(|&x| is_root(x, &a, m)).collect()
}

/// Smallest root modulo `m`, by scanning every residue.
pub fn first_root(family: &QuadraticFamily, m: u64) -> Option<u64> {
    assert!(m >= 2, "modulus must be at least 2");
    let a = reduced(family, m);
    if m > 2 && m <= u32::MAX as u64 && is_prime_u64(m) {
        return first_root_prime(&a, m);
    }
    // x and m − x are both roots or neither
    (0..=m / 2).find(|&x| is_root(x, &a, m))
}

/// Modulo a prime the product vanishes iff one factor does, so it is enough
/// to compare `x²` with each `aᵢ`. Squares are stepped by `2x + 1`.
fn first_root_prime(a: &[u64], p: u64) -> Option<u64> {
    let mut sq = 0u64;
    for x in 0..=p / 2 {
        if a.contains(&sq) {
            return Some(x);
        }
        sq += 2 * x + 1;
        while sq >= p {
            sq -= p;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Largest modulus examined; all of `2..=max_checked` were checked.
    #[serde(with = "serde_int::decimal")]
    pub max_checked: u64,
    #[serde(with = "serde_int::opt_decimal")]
    pub first_failure: Option<u64>,
    /// One root for a few moduli: the largest power of each prime below 50
    /// that fits, and `max_checked` itself.
    #[serde(with = "serde_int::decimal_map")]
    pub roots_sample: BTreeMap<u64, u64>,
}

fn sample_moduli(max_m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if p > max_m {
            break;
        }
        let mut q = p;
        while q <= max_m / p {
            q *= p;
        }
        out.push(q);
    }
    out.push(max_m);
    out
}

/// Check every modulus `2..=max_m` by scanning residues directly.
pub fn sweep_naive(family: &QuadraticFamily, max_m: u64) -> SweepResult {
    assert!(max_m >= 2, "max_m must be at least 2");
    for m in 2..=max_m {
        if first_root(family, m).is_none() {
            return SweepResult {
                max_checked: m,
                first_failure: Some(m),
                roots_sample: BTreeMap::new(),
            };
        }
    }
    let roots_sample = sample_moduli(max_m)
        .into_iter()
        .map(|m| (m, first_root(family, m).expect("checked above")))
        .collect();
    SweepResult {
        max_checked: max_m,
        first_failure: None,
        roots_sample,
    }
}

/// Root finder that splits `m` into prime powers, scans each once and glues
/// the roots with the Chinese remainder theorem.
pub struct CrtRootFinder<'a> {
    family: &'a QuadraticFamily,
    smallest_factor: Vec<u32>,
    cache: HashMap<u64, Option<u64>>,
}

impl<'a> CrtRootFinder<'a> {
    pub fn new(family: &'a QuadraticFamily, max_m: u64) -> Self {
        let len = max_m as usize + 1;
        let mut smallest_factor = vec![0u32; len];
        for i in 2..len {
            if smallest_factor[i] == 0 {
                for j in (i..len).step_by(i) {
                    if smallest_factor[j] == 0 {
                        smallest_factor[j] = i as u32;
                    }
                }
            }
        }
        CrtRootFinder {
            family,
            smallest_factor,
            cache: HashMap::new(),
        }
    }

    fn prime_power_root(&mut self, q: u64) -> Option<u64> {
        let family = self.family;
        *self.cache.entry(q).or_insert_with(|| first_root(family, q))
    }

    fn prime_power_parts(&self, mut m: u64) -> Vec<u64> {
        let mut parts = Vec::new();
        while m > 1 {
            let p = self.smallest_factor[m as usize] as u64;
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            parts.push(q);
        }
        parts
    }

    fn check_range(&self, m: u64) {
        assert!(
            m >= 2 && (m as usize) < self.smallest_factor.len(),
            "modulus outside sieve"
        );
    }

    /// Whether a root modulo `m` exists.
    pub fn has_root(&mut self, mut m: u64) -> bool {
        self.check_range(m);
        while m > 1 {
            let p = self.smallest_factor[m as usize] as u64;
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            if self.prime_power_root(q).is_none() {
                return false;
            }
        }
        true
    }

    /// Some root modulo `m` (not necessarily the smallest), or `None`.
    pub fn root(&mut self, m: u64) -> Option<u64> {
        self.check_range(m);
        let mut classes = Vec::new();
        for q in self.prime_power_parts(m) {
            let r = self.prime_power_root(q)?;
            classes.push(ResidueClass::from_u64(r, q).expect("q ≥ 2"));
        }
        let glued = crt(&classes).expect("prime powers are coprime");
        glued.residue().to_u64()
    }
}

/// Same contract as [`sweep_naive`], using prime-power scans and CRT.
pub fn sweep(family: &QuadraticFamily, max_m: u64) -> SweepResult {
    assert!(max_m >= 2, "max_m must be at least 2");
    let mut finder = CrtRootFinder::new(family, max_m);
    for m in 2..=max_m {
        if !finder.has_root(m) {
            return SweepResult {
                max_checked: m,
                first_failure: Some(m),
                roots_sample: BTreeMap::new(),
            };
        }
    }
    let roots_sample = sample_moduli(max_m)
        .into_iter()
        .map(|m| (m, finder.root(m).expect("checked above")))
        .collect();
    SweepResult {
        max_checked: max_m,
        first_failure: None,
        roots_sample,
    }
}

/// Anything [`verify_certificate`] accepts.
#[derive(Debug, Clone, Copy)]
pub enum CertificateRef<'a> {
    Intersectivity(&'a IntersectivityCertificate),
    Minimality(&'a MinimalityReport),
}

impl<'a> From<&'a IntersectivityCertificate> for CertificateRef<'a> {
    fn from(c: &'a IntersectivityCertificate) -> Self {
        CertificateRef::Intersectivity(c)
    }
}

impl<'a> From<&'a MinimalityReport> for CertificateRef<'a> {
    fn from(r: &'a MinimalityReport) -> Self {
        CertificateRef::Minimality(r)
    }
}

/// Re-check every claim. See [`audit`] for the reasons behind a rejection.
pub fn verify_certificate<'a>(cert: impl Into<CertificateRef<'a>>) -> bool {
    audit(cert).is_empty()
}

/// Every problem found in a certificate; empty means it checks out.
pub fn audit<'a>(cert: impl Into<CertificateRef<'a>>) -> Vec<String> {
    let mut problems = Vec::new();
    match cert.into() {
        CertificateRef::Intersectivity(c) => audit_intersectivity(c, &mut problems),
        CertificateRef::Minimality(r) => audit_minimality(r, &mut problems),
    }
    problems
}

fn audit_minimality(report: &MinimalityReport, problems: &mut Vec<String>) {
    let n = report.family.len();
    if report.base_certificate.family != report.family {
        problems.push("base certificate is for a different family".into());
    }
    if report.base_certificate.verdict != Verdict::Intersective {
        problems.push("base family is not certified intersective".into());
    }
    audit_intersectivity(&report.base_certificate, problems);
    if n < 4 {
        problems.push(format!("drop-one reduction needs n ≥ 4, got {n}"));
    }
    if report.divisor_reports.len() != n {
        problems.push(format!(
            "{} divisor reports for {n} members",
            report.divisor_reports.len()
        ));
    }
    let mut offending = Vec::new();
    for (k, d) in report.divisor_reports.iter().enumerate() {
        if d.dropped_index != k + 1 {
            problems.push(format!("divisor report {} drops index {}", k + 1, d.dropped_index));
            continue;
        }
        let mut expected = report.family.clone();
        if k < expected.len() {
            expected.remove(k);
        }
        if d.certificate.family != expected {
            problems.push(format!("divisor {} has the wrong members", k + 1));
        }
        audit_intersectivity(&d.certificate, problems);
        if d.certificate.verdict == Verdict::Intersective {
            offending.push(k + 1);
        }
    }
    let expected = if offending.is_empty() {
        MinimalityVerdict::Minimal
    } else {
        MinimalityVerdict::NotMinimal { offending }
    };
    if report.verdict != expected {
        problems.push(format!(
            "verdict {:?} does not follow from the divisors ({expected:?})",
            report.verdict
        ));
    }
}

fn member_product(family: &QuadraticFamily, indices: &[usize]) -> BigInt {
    indices
        .iter()
        .map(|&i| family.member(i).value().clone())
        .product()
}

fn is_square_product(family: &QuadraticFamily, indices: &[usize]) -> bool {
    let p = member_product(family, indices);
    !p.is_negative() && is_perfect_square(p.magnitude())
}

/// Odd, strictly increasing, in range, and with square product.
fn check_odd_square_subset(
    family: &QuadraticFamily,
    indices: &[usize],
    what: &str,
    problems: &mut Vec<String>,
) -> bool {
    let n = family.len();
    if indices.len() % 2 == 0 {
        problems.push(format!("{what} has even size {}", indices.len()));
        return false;
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i == 0 || i > n) {
        problems.push(format!("{what} {indices:?} is not a sorted set of positions in 1..={n}"));
        return false;
    }
    if !is_square_product(family, indices) {
        problems.push(format!("{what} {indices:?} does not have square product"));
        return false;
    }
    true
}

fn odd_primes_of(a: &BigInt) -> Vec<BigUint> {
    let two = BigUint::from(2u32);
    factorize(a)
        .map(|f| f.primes().filter(|&p| *p != two).cloned().collect())
        .unwrap_or_default()
}

fn is_qr(a: &BigInt, p: &BigUint) -> bool {
    legendre(a, p) == Ok(1)
}

fn audit_intersectivity(c: &IntersectivityCertificate, problems: &mut Vec<String>) {
    let family = match QuadraticFamily::validate(&c.family) {
        Ok(f) => f,
        Err(e) => {
            problems.push(format!("invalid family: {e}"));
            return;
        }
    };
    match c.verdict {
        Verdict::Intersective => audit_positive(&family, c, problems),
        Verdict::NotIntersective => audit_negative(&family, c, problems),
    }
}

fn audit_positive(family: &QuadraticFamily, c: &IntersectivityCertificate, problems: &mut Vec<String>) {
    let n = family.len();
    if c.failure.is_some() || c.witness_modulus.is_some() || c.prop1_only {
        problems.push("positive verdict carries failure evidence".into());
    }
    let Some(t) = &c.subset_t else {
        problems.push("positive verdict without subset T".into());
        return;
    };
    if !check_odd_square_subset(family, t.indices(), "T", problems) {
        return;
    }
    // every listed witness must hold
    for w in &c.legendre_witnesses {
        let ok = t.contains(w.j)
            && w.i != w.j
            && (1..=n).contains(&w.i)
            && w.symbol == 1
            && family.member(w.j).divisible_by(&w.prime)
            && is_prime(&w.prime)
            && w.prime != BigUint::from(2u32)
            && is_qr(family.member(w.i).value(), &w.prime)
            && {
                let p = BigInt::from(w.prime.clone());
                let r = BigInt::from(w.root.clone());
                (&r * &r - family.member(w.i).value()).mod_floor(&p).is_zero()
            };
        if !ok {
            problems.push(format!(
                "Legendre witness (j={}, p={}, i={}) does not hold",
                w.j, w.prime, w.i
            ));
        }
    }
    // and together they must cover every (j, p)
    for &j in t.indices() {
        for p in odd_primes_of(family.member(j).value()) {
            if !c.legendre_witnesses.iter().any(|w| w.j == j && w.prime == p) {
                problems.push(format!("no Legendre witness for j={j}, p={p}"));
            }
        }
    }
    match c.mod8_witness {
        Some(i) if (1..=n).contains(&i) => {
            let a = family.member(i).value();
            if !a.mod_floor(&BigInt::from(8)).is_one() || a.is_one() {
                problems.push(format!("member {i} = {a} is not 1 mod 8"));
            }
        }
        _ => problems.push("missing or out-of-range mod-8 witness".into()),
    }
}

fn audit_negative(family: &QuadraticFamily, c: &IntersectivityCertificate, problems: &mut Vec<String>) {
    if c.subset_t.is_some() || !c.legendre_witnesses.is_empty() || c.mod8_witness.is_some() {
        problems.push("negative verdict carries positive evidence".into());
    }
    if c.prop1_only != c.witness_modulus.is_none() {
        problems.push("prop1_only flag disagrees with witness presence".into());
    }
    match &c.failure {
        None => problems.push("negative verdict without a failed condition".into()),
        Some(Failure::NoOddSquareSubset) => {
            let n = family.len();
            if n > ENUMERATION_LIMIT {
                problems.push(format!("cannot enumerate subsets of {n} members"));
            } else {
                let found = (1u64..1 << n).filter(|s| s.count_ones() % 2 == 1).find(|&s| {
                    let idx: Vec<usize> = (0..n).filter(|&k| s >> k & 1 == 1).map(|k| k + 1).collect();
                    is_square_product(family, &idx)
                });
                if let Some(s) = found {
                    problems.push(format!("odd square subset exists (mask {s:#b})"));
                }
            }
        }
        Some(Failure::LegendreGap { subset, j, prime }) => {
            if check_odd_square_subset(family, subset.indices(), "failure subset", problems) {
                let j = *j;
                if !subset.contains(j)
                    || !is_prime(prime)
                    || *prime == BigUint::from(2u32)
                    || !family.member(j).divisible_by(prime)
                {
                    problems.push(format!("gap pair (j={j}, p={prime}) is not an odd prime of a T member"));
                } else if let Some(i) =
                    (1..=family.len()).find(|&i| i != j && is_qr(family.member(i).value(), prime))
                {
                    problems.push(format!("member {i} is a residue modulo {prime}; no gap"));
                }
            }
        }
        Some(Failure::NoMod8Member) => {
            let eight = BigInt::from(8);
            if let Some(a) = family
                .members()
                .iter()
                .find(|a| a.value().mod_floor(&eight).is_one() && !a.value().is_one())
            {
                problems.push(format!("{a} is 1 mod 8"));
            }
        }
    }
    if let Some(w) = &c.witness_modulus {
        if w.exponent == 0 || w.prime.pow(w.exponent) != w.modulus || !is_prime(&w.prime) {
            problems.push(format!("witness {} is not {}^{}", w.modulus, w.prime, w.exponent));
            return;
        }
        let small = w.modulus.to_u64().filter(|&m| m <= SCAN_LIMIT);
        if w.verified_by_scan != small.is_some() {
            problems.push("verified_by_scan flag is wrong".into());
        }
        match small {
            Some(m) => {
                if let Some(x) = first_root(family, m) {
                    problems.push(format!("root {x} exists modulo witness {m}"));
                }
            }
            None => match witness_exponent(family.members(), &w.prime) {
                Exponent::Finite(e) if e <= w.exponent => {}
                e => problems.push(format!(
                    "witness {}^{} below the obstruction exponent {e}",
                    w.prime, w.exponent
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub class: ResidueClass,
    #[serde(with = "serde_int::big_uint")]
    pub lower_bound: BigUint,
    #[serde(with = "serde_int::decimal")]
    pub scan_limit: u64,
    /// Square-free members of the class in `(lower_bound, scan_limit]`.
    #[serde(with = "serde_int::decimal")]
    pub qualifying_count: u64,
    /// `qualifying_count / scan_limit`.
    pub empirical: f64,
    pub formula: String,
    pub formula_value: f64,
    pub relative_gap: f64,
}

pub const DENSITY_FORMULA: &str =
    "(6/pi^2) * (1/a) * prod_{p|a} (1 - 1/p^2)^-1 * prod_{p||a, p|r} (1 - 1/p)";

/// Density of square-free integers `≡ r (mod a)`, assuming `gcd(r, a)` is
/// square-free. The last product corrects for primes dividing both `r` and
/// `a` exactly once and is 1 when `gcd(r, a) = 1`.
pub fn squarefree_density(class: &ResidueClass) -> Result<f64> {
    let a = class.modulus();
    let r = class.residue();
    let g = r.gcd(a);
    let gf = factorize(&BigInt::from(g.clone()))?;
    if !gf.is_squarefree() {
        return Err(Error::NonSquarefreeProgression {
            residue: r.to_string(),
            modulus: a.to_string(),
        });
    }
    let af = factorize(&BigInt::from(a.clone()))?;
    let mut value = 6.0 / (PI * PI) / a.to_f64().unwrap_or(f64::INFINITY);
    for (p, e) in af.factors() {
        let pf = p.to_f64().unwrap_or(f64::INFINITY);
        value /= 1.0 - 1.0 / (pf * pf);
        if *e == 1 && (&g % p).is_zero() {
            value *= 1.0 - 1.0 / pf;
        }
    }
    Ok(value)
}

/// Count square-free members of `class` in `(lower_bound, limit]`.
pub fn density_scan(class: &ResidueClass, lower_bound: &BigUint, limit: u64) -> Result<DensityEstimate> {
    if BigUint::from(limit) <= *lower_bound {
        return Err(Error::Domain(format!(
            "scan limit {limit} must exceed the lower bound {lower_bound}"
        )));
    }
    let formula_value = squarefree_density(class)?;
    let lb = lower_bound.to_u64().expect("below limit");
    let len = limit as usize + 1;
    let mut squarefree = vec![true; len];
    squarefree[0] = false;
    let mut d = 2usize;
    while d * d < len {
        for k in (d * d..len).step_by(d * d) {
            squarefree[k] = false;
        }
        d += 1;
    }
    let qualifying_count = match (class.modulus().to_u64(), class.residue().to_u64()) {
        (Some(a), Some(r)) => {
            // first x > lb with x ≡ r (mod a)
            let start = lb + 1 + (r + a - (lb + 1) % a) % a;
            (start..=limit)
                .step_by(a as usize)
                .filter(|&x| squarefree[x as usize])
                .count() as u64
        }
        _ => 0,
    };
    let empirical = qualifying_count as f64 / limit as f64;
    Ok(DensityEstimate {
        class: class.clone(),
        lower_bound: lower_bound.clone(),
        scan_limit: limit,
        qualifying_count,
        empirical,
        formula: DENSITY_FORMULA.into(),
        formula_value,
        relative_gap: (empirical - formula_value).abs() / formula_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::{certify_intersective, CertifyOptions};

    fn fam(v: &[i64]) -> QuadraticFamily {
        QuadraticFamily::validate_i64(v).unwrap()
    }

    #[test]
    fn roots_mod_examples() {
        assert!(roots_mod(&fam(&[15, 17, 255]), 27).is_empty());
        let r8 = roots_mod(&fam(&[15, 17, 255, 2161]), 8);
        assert!(r8.contains(&1));
        // mod 2 every integer is 0 or 1, so some x always works
        assert!(!roots_mod(&fam(&[3, 5, 7]), 2).is_empty());
    }

    #[test]
    fn sweep_examples() {
        let s = sweep(&fam(&[15, 17, 255]), 30);
        assert_eq!(s.first_failure, Some(27));
        assert_eq!(sweep_naive(&fam(&[15, 17, 255]), 30).first_failure, Some(27));
        let s = sweep(&fam(&[15, 17, 255, 2161]), 2000);
        assert_eq!(s.first_failure, None);
        for (&m, &x) in &s.roots_sample {
            assert!(roots_mod(&fam(&[15, 17, 255, 2161]), m).contains(&x));
        }
    }

    #[test]
    fn crt_finder_agrees_with_scan() {
        let f = fam(&[-3, 7, 13, 21]);
        let mut finder = CrtRootFinder::new(&f, 400);
        for m in 2..=400 {
            assert_eq!(finder.root(m).is_some(), first_root(&f, m).is_some(), "m={m}");
        }
    }

    #[test]
    fn verify_round_trip() {
        for v in [&[15, 17, 255, 2161][..], &[15, 17, 255], &[17, 255, 2161], &[2, 3, 6, 13]] {
            let c = certify_intersective(&fam(v), &CertifyOptions::default());
            assert!(audit(&c).is_empty(), "{v:?}: {:?}", audit(&c));
        }
    }

    #[test]
    fn tampered_subset_is_rejected() {
        let mut c = certify_intersective(&fam(&[15, 17, 255, 2161]), &CertifyOptions::default());
        c.subset_t = Some(crate::gf2::SubsetWitness::new(vec![1, 2]));
        assert!(!verify_certificate(&c));
    }

    #[test]
    fn undersized_witness_is_rejected() {
        let mut c = certify_intersective(&fam(&[15, 17, 255]), &CertifyOptions::default());
        let w = c.witness_modulus.as_mut().unwrap();
        w.exponent = 2;
        w.modulus = BigUint::from(9u32);
        assert_eq!(first_root(&fam(&[15, 17, 255]), 9), Some(0));
        assert!(!verify_certificate(&c));
    }

    #[test]
    fn density_examples() {
        let odd = density_scan(&ResidueClass::from_u64(1, 2).unwrap(), &BigUint::zero(), 1_000_000).unwrap();
        let expected = 6.0 / (PI * PI) * 0.5 * 4.0 / 3.0;
        assert!((odd.empirical - expected).abs() / expected < 0.01);
        assert!((odd.formula_value - expected).abs() < 1e-12);

        let c = ResidueClass::from_u64(121, 2040).unwrap();
        let d = density_scan(&c, &BigUint::from(255u32), 1_000_000).unwrap();
        assert!((d.formula_value - 4.67e-4).abs() < 0.01e-4);
        assert!(d.relative_gap < 0.1);

        assert!(matches!(
            density_scan(&ResidueClass::from_u64(0, 4).unwrap(), &BigUint::zero(), 100),
            Err(Error::NonSquarefreeProgression { .. })
        ));
    }

    #[test]
    fn density_with_shared_factor() {
        // 3 mod 6: numbers 3·(odd), square-free iff the odd cofactor is
        // square-free and prime to 3
        let c = ResidueClass::from_u64(3, 6).unwrap();
        let d = density_scan(&c, &BigUint::zero(), 1_000_000).unwrap();
        assert!(d.relative_gap < 0.01, "{d:?}");
    }
}
