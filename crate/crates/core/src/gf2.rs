//! Square classes as vectors over GF(2).
//!
//! A square-free integer is determined up to squares by its sign and the set
//! of primes dividing it. Writing that as a bit vector, a product of family
//! members is a perfect square exactly when the members' vectors XOR to zero,
//! so square subsets are the left kernel of the exponent matrix.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::family::QuadraticFamily;
use crate::ntheory::SquarefreeInt;

/// Kernels up to this dimension are enumerated exhaustively when choosing a
/// minimal odd square subset.
pub const EXHAUSTIVE_KERNEL_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnLabel {
    Prime(BigUint),
    Sign,
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::Prime(p) => p.fmt(f),
            ColumnLabel::Sign => f.write_str("SIGN"),
        }
    }
}

/// Dense bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// One row per family member, one column per prime dividing some member
/// (ascending) followed by a sign column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub rows: Vec<Bits>,
    pub column_labels: Vec<ColumnLabel>,
}

impl ExponentMatrix {
    pub fn from_members(members: &[SquarefreeInt]) -> Self {
        let mut primes: Vec<&BigUint> = members.iter().flat_map(|m| m.primes()).collect();
        primes.sort();
        primes.dedup();
        let width = primes.len() + 1;
        let rows = members
            .iter()
            .map(|m| {
                let mut row = Bits::zeros(width);
                for p in m.primes() {
                    row.set(primes.binary_search(&p).expect("collected above"));
                }
                if m.is_negative() {
                    row.set(width - 1);
                }
                row
            })
            .collect();
        let mut column_labels: Vec<ColumnLabel> =
            primes.into_iter().cloned().map(ColumnLabel::Prime).collect();
        column_labels.push(ColumnLabel::Sign);
        ExponentMatrix {
            rows,
            column_labels,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Rows as strings of 0/1 in column order, for display and tests.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| (0..r.len()).map(|i| if r.get(i) { '1' } else { '0' }).collect())
            .collect()
    }
}

pub fn exponent_matrix(family: &QuadraticFamily) -> ExponentMatrix {
    ExponentMatrix::from_members(family.members())
}

/// A nonempty set of 1-based family positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetWitness {
    indices: Vec<usize>,
}

impl SubsetWitness {
    /// Sorts and deduplicates.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SubsetWitness { indices }
    }

    fn from_bits(bits: &Bits) -> Self {
        SubsetWitness {
            indices: bits.ones().map(|i| i + 1).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.indices.len() % 2 == 1
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

impl fmt::Display for SubsetWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Kernel basis as combination vectors over the rows.
fn kernel_combinations(matrix: &ExponentMatrix) -> Vec<Bits> {
    let n = matrix.n_rows();
    let mut pivots: Vec<(usize, Bits, Bits)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in matrix.rows.iter().enumerate() {
        let mut v = row.clone();
        let mut combo = Bits::zeros(n);
        combo.set(i);
        for (col, pv, pc) in &pivots {
            if v.get(*col) {
                v.xor_assign(pv);
                combo.xor_assign(pc);
            }
        }
        match v.first_one() {
            Some(col) => pivots.push((col, v, combo)),
            None => kernel.push(combo),
        }
    }
    kernel
}

/// A basis of the square subsets: every subset with square product is a
/// symmetric difference of basis elements. Empty iff no nonempty subset has
/// square product.
pub fn square_subsets_basis(matrix: &ExponentMatrix) -> Vec<SubsetWitness> {
    kernel_combinations(matrix)
        .iter()
        .map(SubsetWitness::from_bits)
        .collect()
}

/// An odd-cardinality subset with square product, if one exists.
///
/// Parity is linear on the kernel, so one exists iff some basis vector is
/// odd. For kernels of dimension up to [`EXHAUSTIVE_KERNEL_DIM`] the result
/// is the minimum-weight odd kernel vector, ties broken by the
/// lexicographically smallest sorted index list; larger kernels fall back to
/// the first odd basis vector.
pub fn odd_square_subset(matrix: &ExponentMatrix) -> Option<SubsetWitness> {
    let basis = kernel_combinations(matrix);
    if basis.iter().all(|b| b.count_ones() % 2 == 0) {
        return None;
    }
    if basis.len() > EXHAUSTIVE_KERNEL_DIM {
        return basis
            .iter()
            .find(|b| b.count_ones() % 2 == 1)
            .map(SubsetWitness::from_bits);
    }
    let n = matrix.n_rows();
    let mut best: Option<SubsetWitness> = None;
    for mask in 1u64..(1u64 << basis.len()) {
        let mut v = Bits::zeros(n);
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.xor_assign(b);
            }
        }
        if v.count_ones() % 2 == 0 {
            continue;
        }
        let cand = SubsetWitness::from_bits(&v);
        let better = match &best {
            None => true,
            Some(b) => (cand.len(), &cand.indices) < (b.len(), &b.indices),
        };
        if better {
            best = Some(cand);
        }
    }
    best
}

/// Largest square-free part of a product over any subset of `members`
/// (empty product counts as 1). Signs are ignored.
///
/// Square-free parts of subset products are exactly the prime-column parts
/// of vectors in the row space, so this enumerates the span of a reduced
/// basis rather than all `2^n` subsets.
pub fn max_subset_squarefree_part(members: &[SquarefreeInt]) -> BigUint {
    let matrix = ExponentMatrix::from_members(members);
    let prime_cols = matrix.column_labels.len() - 1;
    let mut basis: Vec<Bits> = Vec::new();
    for row in &matrix.rows {
        let mut v = Bits::zeros(prime_cols);
        for c in row.ones().filter(|&c| c < prime_cols) {
            v.set(c);
        }
        for b in &basis {
            let lead = b.first_one().unwrap();
            if v.get(lead) {
                v.xor_assign(b);
            }
        }
        if !v.is_zero() {
            basis.push(v);
        }
    }
    let labels: Vec<&BigUint> = matrix
        .column_labels
        .iter()
        .filter_map(|l| match l {
            ColumnLabel::Prime(p) => Some(p),
            ColumnLabel::Sign => None,
        })
        .collect();
    let mut best = BigUint::one();
    let mut v = Bits::zeros(prime_cols);
    // Gray-code walk over the span.
    for step in 1u64..(1u64 << basis.len()) {
        v.xor_assign(&basis[step.trailing_zeros() as usize]);
        let value = v
            .ones()
            .fold(BigUint::one(), |acc, c| acc * labels[c]);
        if value > best {
            best = value;
        }
    }
    best
}
