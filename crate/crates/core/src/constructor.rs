//! Deterministic construction of minimally intersective families.
//!
//! Given `n ≥ 4` and distinct odd primes `p₁, p₂` with non-residues `bᵢ` and
//! residues `cᵢ` modulo `pᵢ`:
//!
//! 1. `a₁ = p₁p₂`;
//! 2. `a₂, …, a_{n−3}` square-free, `≡ b₁ (mod p₁)`, `≡ b₂ (mod p₂)`;
//! 3. `a_{n−2}` likewise but `≡ c₁ (mod p₁)` when `n` is odd;
//! 4. every searched `aᵢ` exceeds the square-free part of every sub-product
//!    of `a₁, …, a_{i−1}`;
//! 5. `a_{n−1} = rad(a₁⋯a_{n−2})` for even `n`, `rad(a₁⋯a_{n−3})` for odd `n`;
//! 6. `a_n` square-free, `≡ 1 (mod 8)`, a residue `cⱼ` modulo every other odd
//!    prime `pⱼ` of `a₁⋯a_{n−1}`, and `≡ c₁` (even `n`) or `b₁` (odd `n`)
//!    modulo `p₁`, again above every sub-product's square-free part.
//!
//! Where the procedure says "pick", a [`ChoicePolicy`] decides. The result is
//! checked with [`certify_minimal`] before it is returned.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certifier::CertifyOptions;
use crate::family::QuadraticFamily;
use crate::gf2::{max_subset_squarefree_part, SubsetWitness};
use crate::minimality::{certify_minimal, MinimalityReport};
use crate::ntheory::primality::small_primes;
use crate::ntheory::{
    crt, factorize, is_perfect_square, is_prime, symbol_for_known_prime, Factored, ResidueClass,
    SquarefreeInt,
};
use crate::serde_int;
use crate::{Error, Result};

pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;
pub const DEFAULT_MAX_RETRIES: u32 = 8;

/// Which qualifying candidate a search returns. Serialized as `smallest`
/// or `offset:K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ChoicePolicy {
    #[default]
    Smallest,
    /// Skip the first `k` qualifying candidates.
    Offset(u64),
}

impl ChoicePolicy {
    pub fn rank(self) -> u64 {
        match self {
            ChoicePolicy::Smallest => 0,
            ChoicePolicy::Offset(k) => k,
        }
    }
}

impl fmt::Display for ChoicePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoicePolicy::Smallest => f.write_str("smallest"),
            ChoicePolicy::Offset(k) => write!(f, "offset:{k}"),
        }
    }
}

impl FromStr for ChoicePolicy {
    type Err = Error;

    /// `smallest` or `offset:K`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "smallest" {
            return Ok(ChoicePolicy::Smallest);
        }
        s.strip_prefix("offset:")
            .and_then(|k| k.parse().ok())
            .map(ChoicePolicy::Offset)
            .ok_or_else(|| Error::InvalidParams(format!("unknown choice policy {s:?}")))
    }
}

impl From<ChoicePolicy> for String {
    fn from(p: ChoicePolicy) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for ChoicePolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Non-residue `b` and residue `c` modulo a seed prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePair {
    #[serde(with = "serde_int::big_uint")]
    pub b: BigUint,
    #[serde(with = "serde_int::big_uint")]
    pub c: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub p1: BigUint,
    pub p2: BigUint,
    /// Overrides for `(b₁, c₁)` and `(b₂, c₂)`.
    pub pair1: Option<ResiduePair>,
    pub pair2: Option<ResiduePair>,
    /// Odd square-free multiple of `p₁p₂` used instead of `p₁p₂`.
    pub a1: Option<BigUint>,
    /// Residues for the last step at primes other than `p₁, p₂`.
    pub prime_residues: BTreeMap<BigUint, BigUint>,
    pub policy: ChoicePolicy,
    /// Per-index policies (1-based), overriding `policy`.
    pub step_policies: BTreeMap<usize, ChoicePolicy>,
    /// Candidates examined per search before giving up.
    pub search_cap: u64,
    /// Further candidates for `a_n` tried if the result is not minimal.
    pub max_retries: u32,
    pub certify: CertifyOptions,
}

impl ConstructionParams {
    pub fn new(n: usize, p1: u64, p2: u64) -> Self {
        ConstructionParams {
            n,
            p1: BigUint::from(p1),
            p2: BigUint::from(p2),
            pair1: None,
            pair2: None,
            a1: None,
            prime_residues: BTreeMap::new(),
            policy: ChoicePolicy::Smallest,
            step_policies: BTreeMap::new(),
            search_cap: DEFAULT_SEARCH_CAP,
            max_retries: DEFAULT_MAX_RETRIES,
            certify: CertifyOptions::default(),
        }
    }

    pub fn policy_for(&self, index: usize) -> ChoicePolicy {
        self.step_policies.get(&index).copied().unwrap_or(self.policy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepRule {
    /// `a₁`, fixed by the seed primes.
    Seed,
    /// Square-free search in a residue class above a lower bound.
    Search,
    /// Square-free part of the product of earlier members.
    SquarefreePart,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    pub index: usize,
    pub rule: StepRule,
    pub targets: Vec<ResidueClass>,
    pub class: Option<ResidueClass>,
    /// The chosen value must exceed this.
    #[serde(with = "serde_int::big_uint")]
    pub lower_bound: BigUint,
    /// Qualifying candidates skipped before the chosen one.
    #[serde(with = "serde_int::decimal")]
    pub rank: u64,
    #[serde(with = "serde_int::decimal")]
    pub candidates_examined: u64,
    /// Members multiplied for [`StepRule::SquarefreePart`].
    pub product_of: Vec<usize>,
    #[serde(with = "serde_int::big_int")]
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub n: usize,
    #[serde(with = "serde_int::big_uint")]
    pub p1: BigUint,
    #[serde(with = "serde_int::big_uint")]
    pub p2: BigUint,
    pub pair1: ResiduePair,
    pub pair2: ResiduePair,
    pub policy: ChoicePolicy,
    /// Odd primes of `a₁⋯a_{n−1}`: `p₁`, `p₂`, then the rest ascending.
    pub last_step_primes: Vec<String>,
    /// Odd-size subset whose product is a square by construction.
    pub designated_subset: SubsetWitness,
    pub steps: Vec<ConstructionStep>,
    /// Candidates for `a_n` rejected by the minimality check.
    pub retries: u32,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub family: QuadraticFamily,
    pub trace: ConstructionTrace,
    pub report: MinimalityReport,
}

fn residue_symbol(a: &BigUint, p: &BigUint) -> i8 {
    symbol_for_known_prime(&BigInt::from(a.clone()), p)
}

/// Smallest positive non-residue and the residue 1.
pub fn pick_residue_pair(p: &BigUint) -> Result<ResiduePair> {
    check_odd_prime(p)?;
    let mut b = BigUint::from(2u32);
    while residue_symbol(&b, p) != -1 {
        b += 1u32;
    }
    Ok(ResiduePair {
        b,
        c: BigUint::one(),
    })
}

/// Residue used in the last step at a prime other than `p₁, p₂`: the
/// smallest quadratic residue in `[2, p)` that is not itself a perfect
/// square, or 1 if there is none.
pub fn last_step_residue(p: &BigUint) -> BigUint {
    let mut c = BigUint::from(2u32);
    while &c < p {
        if !is_perfect_square(&c) && residue_symbol(&c, p) == 1 {
            return c;
        }
        c += 1u32;
    }
    BigUint::one()
}

fn check_odd_prime(p: &BigUint) -> Result<()> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn check_pair(pair: &ResiduePair, p: &BigUint) -> Result<()> {
    let ok = !(&pair.b % p).is_zero()
        && !(&pair.c % p).is_zero()
        && residue_symbol(&pair.b, p) == -1
        && residue_symbol(&pair.c, p) == 1;
    if !ok {
        return Err(Error::InvalidParams(format!(
            "need b non-residue and c residue mod {p}, got b={}, c={}",
            pair.b, pair.c
        )));
    }
    Ok(())
}

/// Largest square-free part of any sub-product (1 for the empty list).
pub fn lower_bound_for(members: &[SquarefreeInt]) -> BigUint {
    max_subset_squarefree_part(members)
}

/// Cheap rejection of values divisible by a small prime squared.
fn has_small_square_factor(x: &BigUint) -> bool {
    small_primes().iter().take_while(|&&p| p < 1 << 12).any(|&p| {
        let pp = p * p;
        BigUint::from(pp) <= *x && (x % pp).is_zero()
    })
}

/// Square-free integers `> lower_bound` in a residue class, ascending, 1
/// excluded.
pub struct SquarefreeScan {
    class: ResidueClass,
    next: BigUint,
    examined: u64,
    cap: u64,
}

impl SquarefreeScan {
    pub fn new(class: &ResidueClass, lower_bound: &BigUint, cap: u64) -> Result<Self> {
        let (r, m) = (class.residue(), class.modulus());
        let g = factorize(&BigInt::from(r.gcd(m)))?;
        if !g.is_squarefree() {
            return Err(Error::NonSquarefreeProgression {
                residue: r.to_string(),
                modulus: m.to_string(),
            });
        }
        let start = lower_bound + 1u32;
        let offset = (BigInt::from(r.clone()) - BigInt::from(start.clone()))
            .mod_floor(&BigInt::from(m.clone()));
        Ok(SquarefreeScan {
            class: class.clone(),
            next: start + offset.to_biguint().expect("non-negative"),
            examined: 0,
            cap,
        })
    }

    pub fn examined(&self) -> u64 {
        self.examined
    }

    fn exhausted(&self) -> Error {
        Error::SearchExhausted {
            class: self.class.to_string(),
            examined: self.examined,
        }
    }
}

impl Iterator for SquarefreeScan {
    type Item = Result<SquarefreeInt>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.examined >= self.cap {
                return Some(Err(self.exhausted()));
            }
            self.examined += 1;
            let x = self.next.clone();
            self.next += self.class.modulus();
            if x.is_one() || has_small_square_factor(&x) {
                continue;
            }
            let f = match factorize(&BigInt::from(x)) {
                Ok(f) => f,
                Err(e) => return Some(Err(e)),
            };
            if f.is_squarefree() {
                return Some(SquarefreeInt::try_from(f));
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub value: SquarefreeInt,
    pub examined: u64,
}

/// The `(k+1)`-th square-free integer `> lower_bound` in `class` (`k = 0` for
/// [`ChoicePolicy::Smallest`]). 1 never qualifies.
pub fn search_squarefree_in_ap(
    class: &ResidueClass,
    lower_bound: &BigUint,
    policy: ChoicePolicy,
    cap: u64,
) -> Result<SearchOutcome> {
    let mut scan = SquarefreeScan::new(class, lower_bound, cap)?;
    let value = scan
        .nth(policy.rank() as usize)
        .unwrap_or_else(|| Err(scan.exhausted()))?;
    Ok(SearchOutcome {
        value,
        examined: scan.examined(),
    })
}

/// Classes for the last member: targets in order `p₁, p₂`, remaining odd
/// primes ascending, then `1 mod 8`; plus their combination.
pub fn last_step_targets(
    prefix: &[SquarefreeInt],
    n: usize,
    p1: &BigUint,
    p2: &BigUint,
    pair1: &ResiduePair,
    pair2: &ResiduePair,
    overrides: &BTreeMap<BigUint, BigUint>,
) -> Result<(Vec<BigUint>, Vec<ResidueClass>, ResidueClass)> {
    let two = BigUint::from(2u32);
    let mut others: Vec<BigUint> = prefix
        .iter()
        .flat_map(|a| a.primes().cloned())
        .filter(|p| *p != two && p != p1 && p != p2)
        .collect();
    others.sort();
    others.dedup();
    let at_p1 = if n % 2 == 0 { &pair1.c } else { &pair1.b };
    let mut primes = vec![p1.clone(), p2.clone()];
    let mut targets = vec![
        class_of(at_p1, p1)?,
        class_of(&pair2.c, p2)?,
    ];
    for p in others {
        let c = match overrides.get(&p) {
            Some(c) => {
                if residue_symbol(c, &p) != 1 {
                    return Err(Error::InvalidParams(format!("{c} is not a residue mod {p}")));
                }
                c.clone()
            }
            None => last_step_residue(&p),
        };
        targets.push(class_of(&c, &p)?);
        primes.push(p);
    }
    targets.push(ResidueClass::from_u64(1, 8)?);
    let class = crt(&targets)?;
    Ok((primes, targets, class))
}

fn class_of(r: &BigUint, m: &BigUint) -> Result<ResidueClass> {
    ResidueClass::new(&BigInt::from(r.clone()), m)
}

fn validate(params: &ConstructionParams) -> Result<(ResiduePair, ResiduePair, BigUint)> {
    if params.n < 4 {
        return Err(Error::InvalidParams(format!("n = {} is below 4", params.n)));
    }
    check_odd_prime(&params.p1)?;
    check_odd_prime(&params.p2)?;
    if params.p1 == params.p2 {
        return Err(Error::InvalidParams("seed primes must be distinct".into()));
    }
    let pair1 = match &params.pair1 {
        Some(pair) => pair.clone(),
        None => pick_residue_pair(&params.p1)?,
    };
    let pair2 = match &params.pair2 {
        Some(pair) => pair.clone(),
        None => pick_residue_pair(&params.p2)?,
    };
    check_pair(&pair1, &params.p1)?;
    check_pair(&pair2, &params.p2)?;
    let a1 = match &params.a1 {
        None => &params.p1 * &params.p2,
        Some(a1) => {
            let ok = a1.is_odd()
                && (a1 % &params.p1).is_zero()
                && (a1 % &params.p2).is_zero()
                && factorize(&BigInt::from(a1.clone()))?.is_squarefree();
            if !ok {
                return Err(Error::InvalidParams(format!(
                    "a1 = {a1} must be odd, square-free and divisible by {} and {}",
                    params.p1, params.p2
                )));
            }
            a1.clone()
        }
    };
    Ok((pair1, pair2, a1))
}

fn designated_subset(n: usize) -> SubsetWitness {
    if n % 2 == 0 {
        SubsetWitness::new((1..n).collect())
    } else {
        SubsetWitness::new((1..=n - 3).chain([n - 1]).collect())
    }
}

fn search_step(
    index: usize,
    targets: Vec<ResidueClass>,
    prefix: &[SquarefreeInt],
    policy: ChoicePolicy,
    cap: u64,
) -> Result<(SquarefreeInt, ConstructionStep)> {
    let class = crt(&targets)?;
    let lower_bound = lower_bound_for(prefix);
    let found = search_squarefree_in_ap(&class, &lower_bound, policy, cap)?;
    log::debug!("a{index} = {} ({} candidates)", found.value, found.examined);
    let step = ConstructionStep {
        index,
        rule: StepRule::Search,
        targets,
        class: Some(class),
        lower_bound,
        rank: policy.rank(),
        candidates_examined: found.examined,
        product_of: Vec::new(),
        value: found.value.value().clone(),
    };
    Ok((found.value, step))
}

fn squarefree_part_step(index: usize, prefix: &[SquarefreeInt], upto: usize) -> (SquarefreeInt, ConstructionStep) {
    let mut odd: BTreeMap<&BigUint, u32> = BTreeMap::new();
    for a in &prefix[..upto] {
        for p in a.primes() {
            *odd.entry(p).or_default() += 1;
        }
    }
    let primes = odd
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p.clone())
        .collect();
    let value = SquarefreeInt::try_from(Factored::from_distinct_primes(primes))
        .expect("product of distinct primes");
    let step = ConstructionStep {
        index,
        rule: StepRule::SquarefreePart,
        targets: Vec::new(),
        class: None,
        lower_bound: BigUint::zero(),
        rank: 0,
        candidates_examined: 0,
        product_of: (1..=upto).collect(),
        value: value.value().clone(),
    };
    (value, step)
}

/// Run the construction and check that the result is minimally intersective.
pub fn construct(params: &ConstructionParams) -> Result<Construction> {
    let (pair1, pair2, a1) = validate(params)?;
    let n = params.n;
    let (p1, p2) = (&params.p1, &params.p2);
    let mut members = vec![SquarefreeInt::new(&BigInt::from(a1.clone()))?];
    let mut steps = vec![ConstructionStep {
        index: 1,
        rule: StepRule::Seed,
        targets: vec![class_of(&BigUint::zero(), p1)?, class_of(&BigUint::zero(), p2)?],
        class: None,
        lower_bound: BigUint::zero(),
        rank: 0,
        candidates_examined: 0,
        product_of: Vec::new(),
        value: BigInt::from(a1),
    }];
    for i in 2..=n - 2 {
        let at_p1 = if i == n - 2 && n % 2 == 1 { &pair1.c } else { &pair1.b };
        let targets = vec![class_of(at_p1, p1)?, class_of(&pair2.b, p2)?];
        let (a, step) = search_step(i, targets, &members, params.policy_for(i), params.search_cap)?;
        members.push(a);
        steps.push(step);
    }
    let upto = if n % 2 == 0 { n - 2 } else { n - 3 };
    let (a, step) = squarefree_part_step(n - 1, &members, upto);
    members.push(a);
    steps.push(step);

    let subset = designated_subset(n);
    let product: BigInt = subset.indices().iter().map(|&i| members[i - 1].value()).product();
    if !is_perfect_square(product.magnitude()) {
        return Err(Error::Postcondition(format!("product over {subset} is not a square")));
    }

    let (primes, targets, class) =
        last_step_targets(&members, n, p1, p2, &pair1, &pair2, &params.prime_residues)?;
    let lower_bound = lower_bound_for(&members);
    let policy = params.policy_for(n);
    let mut scan = SquarefreeScan::new(&class, &lower_bound, params.search_cap)?;
    let mut rank = policy.rank();
    let mut candidate = scan.nth(rank as usize);
    let mut retries = 0;
    loop {
        let a = candidate.unwrap_or_else(|| Err(scan.exhausted()))?;
        let mut all = members.clone();
        all.push(a.clone());
        let family = QuadraticFamily::from_members(all)
            .map_err(|e| Error::Postcondition(e.to_string()))?;
        let rejection = match certify_minimal(&family, &params.certify) {
            Ok(report) if report.is_minimal() => {
                steps.push(ConstructionStep {
                    index: n,
                    rule: StepRule::Search,
                    targets,
                    class: Some(class),
                    lower_bound,
                    rank,
                    candidates_examined: scan.examined(),
                    product_of: Vec::new(),
                    value: a.value().clone(),
                });
                let trace = ConstructionTrace {
                    n,
                    p1: p1.clone(),
                    p2: p2.clone(),
                    pair1,
                    pair2,
                    policy: params.policy,
                    last_step_primes: primes.iter().map(|p| p.to_string()).collect(),
                    designated_subset: subset,
                    steps,
                    retries,
                };
                return Ok(Construction {
                    family,
                    trace,
                    report,
                });
            }
            Ok(report) => format!("{:?}", report.verdict),
            Err(Error::NotIntersectiveBase) => "base not intersective".to_string(),
            Err(e) => return Err(e),
        };
        log::warn!("candidate a{n} = {a} rejected: {rejection}");
        retries += 1;
        if retries > params.max_retries {
            return Err(Error::Postcondition(format!(
                "no minimal family after {retries} candidates for a{n}"
            )));
        }
        rank += 1;
        candidate = scan.next();
    }
}

/// Rebuild the family from a trace, re-deriving every step, and check it
/// matches the recorded values.
pub fn replay(trace: &ConstructionTrace) -> Result<QuadraticFamily> {
    let mismatch = |i: usize, what: &str| Error::Postcondition(format!("step {i}: {what} differs on replay"));
    let mut members: Vec<SquarefreeInt> = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        if step.index != k + 1 {
            return Err(mismatch(k + 1, "index"));
        }
        let value = match step.rule {
            StepRule::Seed => SquarefreeInt::new(&step.value)?,
            StepRule::SquarefreePart => {
                let upto = step.product_of.len();
                if step.product_of != (1..=upto).collect::<Vec<_>>() || upto > members.len() {
                    return Err(mismatch(step.index, "product range"));
                }
                squarefree_part_step(step.index, &members, upto).0
            }
            StepRule::Search => {
                let class = crt(&step.targets)?;
                if step.class.as_ref() != Some(&class) {
                    return Err(mismatch(step.index, "combined class"));
                }
                let lower_bound = lower_bound_for(&members);
                if lower_bound != step.lower_bound {
                    return Err(mismatch(step.index, "lower bound"));
                }
                let cap = step.candidates_examined.max(1);
                search_squarefree_in_ap(&class, &lower_bound, ChoicePolicy::Offset(step.rank), cap)?.value
            }
        };
        if *value.value() != step.value {
            return Err(mismatch(step.index, "value"));
        }
        members.push(value);
    }
    if members.len() != trace.n {
        return Err(Error::Postcondition("trace length differs from n".into()));
    }
    QuadraticFamily::from_members(members)
}

/// Value as `u64` when it fits; convenience for tests and reporting.
pub fn small_values(family: &QuadraticFamily) -> Option<Vec<u64>> {
    family.members().iter().map(|a| a.value().to_u64()).collect()
}
