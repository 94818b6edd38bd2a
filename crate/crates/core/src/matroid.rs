//! Binary matroids given by a GF(2) representation with labelled columns.
//!
//! A [`BinaryMatroid`] keeps its matrix in reduced row-echelon form with zero
//! rows removed, so the number of rows is the rank. It also caches a basis of
//! the cycle space (the null space of the matrix). A set is a cycle exactly
//! when its columns sum to zero, and two binary matroids on the same labelled
//! ground set are equal exactly when their row spaces agree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, BitVec, XorBasis};
use crate::weights::Weights;

/// Largest ground set for which circuits are enumerated.
pub const CIRCUIT_GUARD: usize = 20;
/// Largest ground set compared subset-by-subset in [`EqualityMode::Exhaustive`].
pub const EXHAUSTIVE_GUARD: usize = 20;

/// Globally unique label of a ground-set element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type ElementSet = BTreeSet<ElementId>;

/// Builds an [`ElementSet`] from raw ids.
pub fn set_of(ids: &[u32]) -> ElementSet {
    ids.iter().map(|&i| ElementId(i)).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatroidError {
    #[error("element {0} appears twice among the column labels")]
    DuplicateLabel(ElementId),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("element {0} is not in the ground set")]
    UnknownElement(ElementId),
    #[error("element {0} is both deleted and contracted")]
    DeleteContractOverlap(ElementId),
    #[error("{operation} is limited to {limit} elements, got {actual}")]
    GuardExceeded {
        operation: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("the given set is dependent")]
    DependentSet,
    #[error("adding {0} keeps the set independent, so there is no circuit")]
    NoFundamentalCircuit(ElementId),
    #[error("element {0} is a loop")]
    LoopElement(ElementId),
    #[error("element {0} is already in the ground set")]
    AlreadyPresent(ElementId),
    #[error("ground sets differ")]
    GroundMismatch,
}

/// A GF(2) matrix whose columns carry element labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    pub rows: Vec<BitVec>,
    pub column_labels: Vec<ElementId>,
}

impl Gf2Matrix {
    pub fn new(column_labels: Vec<ElementId>, rows: Vec<BitVec>) -> Self {
        Self {
            rows,
            column_labels,
        }
    }

    /// Builds the matrix from column vectors of a common height.
    pub fn from_columns(column_labels: Vec<ElementId>, height: usize, columns: &[BitVec]) -> Self {
        let rows = (0..height)
            .map(|r| {
                BitVec::from_indices(
                    columns.len(),
                    columns
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.get(r))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        Self::new(column_labels, rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityMode {
    /// Compare independence of every subset.
    Exhaustive,
    /// Compare row spaces after aligning columns.
    Algebraic,
}

#[derive(Clone, Debug)]
pub struct BinaryMatroid {
    labels: Vec<ElementId>,
    index: HashMap<ElementId, usize>,
    rows: Vec<BitVec>,
    cycles: Vec<BitVec>,
    // column c as a word with bit r = rows[r][c]; present when rank <= 64
    packed: Option<Vec<u64>>,
}

impl BinaryMatroid {
    pub fn from_matrix(matrix: Gf2Matrix) -> Result<Self, MatroidError> {
        Self::from_rows(matrix.column_labels, matrix.rows)
    }

    pub fn from_rows(labels: Vec<ElementId>, mut rows: Vec<BitVec>) -> Result<Self, MatroidError> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, &e) in labels.iter().enumerate() {
            if index.insert(e, i).is_some() {
                return Err(MatroidError::DuplicateLabel(e));
            }
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(MatroidError::RaggedRow {
                row,
                expected: n,
                found: r.len(),
            });
        }
        let pivots = gf2::rref(&mut rows, n);
        let cycles = gf2::null_space_of_rref(&rows, &pivots, n);
        let packed = (rows.len() <= 64).then(|| {
            (0..n)
                .map(|c| {
                    rows.iter()
                        .enumerate()
                        .filter(|(_, row)| row.get(c))
                        .fold(0u64, |acc, (r, _)| acc | (1 << r))
                })
                .collect()
        });
        Ok(Self {
            labels,
            index,
            rows,
            cycles,
            packed,
        })
    }

    pub fn from_columns(labels: Vec<ElementId>, height: usize, columns: &[BitVec]) -> Result<Self, MatroidError> {
        Self::from_matrix(Gf2Matrix::from_columns(labels, height, columns))
    }

    /// The binary matroid whose cycle space is spanned by `basis`.
    pub fn from_cycle_space(labels: Vec<ElementId>, basis: &[BitVec]) -> Result<Self, MatroidError> {
        let rows = gf2::null_space(basis, labels.len());
        Self::from_rows(labels, rows)
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.labels
    }

    pub fn ground(&self) -> ElementSet {
        self.labels.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows of the reduced row-echelon representation.
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn matrix(&self) -> Gf2Matrix {
        Gf2Matrix::new(self.labels.clone(), self.rows.clone())
    }

    /// Basis of the cycle space, as indicator vectors over the columns.
    pub fn cycle_basis(&self) -> &[BitVec] {
        &self.cycles
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.index.contains_key(&e)
    }

    pub fn index_of(&self, e: ElementId) -> Result<usize, MatroidError> {
        self.index
            .get(&e)
            .copied()
            .ok_or(MatroidError::UnknownElement(e))
    }

    pub fn column(&self, e: ElementId) -> Result<BitVec, MatroidError> {
        let c = self.index_of(e)?;
        Ok(self.column_at(c))
    }

    fn column_at(&self, c: usize) -> BitVec {
        BitVec::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, row)| row.get(c))
                .map(|(r, _)| r),
        )
    }

    pub fn indices<'a, I>(&self, set: I) -> Result<Vec<usize>, MatroidError>
    where
        I: IntoIterator<Item = &'a ElementId>,
    {
        set.into_iter().map(|&e| self.index_of(e)).collect()
    }

    pub fn rank_of<'a, I>(&self, set: I) -> Result<usize, MatroidError>
    where
        I: IntoIterator<Item = &'a ElementId>,
    {
        let idx = self.indices(set)?;
        Ok(self.rank_of_indices(&idx))
    }

    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        if let Some(packed) = &self.packed {
            let mut slots = [0u64; 64];
            let mut dim = 0;
            for &i in idx {
                if insert_word(&mut slots, packed[i]) {
                    dim += 1;
                }
            }
            dim
        } else {
            let mut basis = XorBasis::new(self.rank());
            idx.iter()
                .filter(|&&i| basis.insert(&self.column_at(i)))
                .count()
        }
    }

    pub fn is_independent<'a, I>(&self, set: I) -> Result<bool, MatroidError>
    where
        I: IntoIterator<Item = &'a ElementId>,
    {
        let idx = self.indices(set)?;
        let mut dedup = idx.clone();
        dedup.sort_unstable();
        dedup.dedup();
        Ok(self.rank_of_indices(&dedup) == dedup.len())
    }

    /// True iff the columns of `set` sum to zero, i.e. the set is a disjoint
    /// union of circuits. The empty set is a cycle.
    pub fn is_cycle<'a, I>(&self, set: I) -> Result<bool, MatroidError>
    where
        I: IntoIterator<Item = &'a ElementId>,
    {
        let idx = self.indices(set)?;
        let mut parity = vec![false; self.labels.len()];
        for i in idx {
            parity[i] = !parity[i];
        }
        Ok(self.rows.iter().all(|row| {
            row.iter_ones().filter(|&c| parity[c]).count() % 2 == 0
        }))
    }

    /// A circuit is a nonempty cycle all of whose proper subsets are independent.
    pub fn is_circuit(&self, set: &ElementSet) -> Result<bool, MatroidError> {
        if set.is_empty() || !self.is_cycle(set)? {
            return Ok(false);
        }
        Ok(self.rank_of(set)? == set.len() - 1)
    }

    pub fn is_loop(&self, e: ElementId) -> Result<bool, MatroidError> {
        let c = self.index_of(e)?;
        Ok(self.rows.iter().all(|row| !row.get(c)))
    }

    pub fn loops(&self) -> ElementSet {
        (0..self.len())
            .filter(|&c| self.rows.iter().all(|row| !row.get(c)))
            .map(|c| self.labels[c])
            .collect()
    }

    /// Elements in every basis (equivalently, in no circuit).
    pub fn coloops(&self) -> ElementSet {
        (0..self.len())
            .filter(|&c| self.cycles.iter().all(|v| !v.get(c)))
            .map(|c| self.labels[c])
            .collect()
    }

    // ---- bitmask fast paths (ground sets of at most 64 elements) ----

    fn packed(&self) -> &[u64] {
        self.packed
            .as_deref()
            .expect("bitmask operations need rank <= 64")
    }

    pub fn mask_of<'a, I>(&self, set: I) -> Result<u64, MatroidError>
    where
        I: IntoIterator<Item = &'a ElementId>,
    {
        assert!(self.len() <= 64, "bitmask operations need at most 64 elements");
        Ok(self.indices(set)?.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn set_of_mask(&self, mask: u64) -> ElementSet {
        mask_bits(mask).map(|i| self.labels[i]).collect()
    }

    pub fn rank_of_mask(&self, mask: u64) -> usize {
        let packed = self.packed();
        let mut slots = [0u64; 64];
        mask_bits(mask)
            .filter(|&i| insert_word(&mut slots, packed[i]))
            .count()
    }

    pub fn is_independent_mask(&self, mask: u64) -> bool {
        self.rank_of_mask(mask) == mask.count_ones() as usize
    }

    pub fn is_cycle_mask(&self, mask: u64) -> bool {
        let packed = self.packed();
        mask_bits(mask).fold(0u64, |acc, i| acc ^ packed[i]) == 0
    }

    /// Circuits as bitmasks, by increasing size then lexicographically.
    pub fn circuit_masks(&self) -> Result<Vec<u64>, MatroidError> {
        let n = self.len();
        if n > CIRCUIT_GUARD {
            return Err(MatroidError::GuardExceeded {
                operation: "circuit enumeration",
                limit: CIRCUIT_GUARD,
                actual: n,
            });
        }
        let packed = self.packed();
        let mut found: Vec<u64> = Vec::new();
        for k in 1..=(self.rank() + 1).min(n) {
            let mut comb: Vec<usize> = (0..k).collect();
            loop {
                let mask = comb.iter().fold(0u64, |m, &i| m | (1 << i));
                // a k-set with zero column sum and no smaller circuit inside is a circuit
                if comb.iter().fold(0u64, |acc, &i| acc ^ packed[i]) == 0
                    && !found.iter().any(|&c| c & !mask == 0)
                {
                    found.push(mask);
                }
                if !next_combination(&mut comb, n) {
                    break;
                }
            }
        }
        Ok(found)
    }

    pub fn enumerate_circuits(&self) -> Result<Vec<ElementSet>, MatroidError> {
        Ok(self
            .circuit_masks()?
            .into_iter()
            .map(|m| self.set_of_mask(m))
            .collect())
    }

    /// The unique circuit inside `independent ∪ {e}`.
    pub fn fundamental_circuit(
        &self,
        independent: &ElementSet,
        e: ElementId,
    ) -> Result<ElementSet, MatroidError> {
        let basis: Vec<usize> = self.indices(independent)?;
        let target = self.index_of(e)?;
        if self.rank_of_indices(&basis) != basis.len() {
            return Err(MatroidError::DependentSet);
        }
        if independent.contains(&e) {
            return Err(MatroidError::NoFundamentalCircuit(e));
        }
        // solve sum_i x_i col(basis_i) = col(e) on the augmented system
        let k = basis.len();
        let mut cols = basis.clone();
        cols.push(target);
        let mut aug: Vec<BitVec> = self.rows.iter().map(|r| r.select(&cols)).collect();
        let order: Vec<usize> = (0..=k).collect();
        let pivots = gf2::rref_in_order(&mut aug, &order);
        // a pivot on the target column means the system has no solution
        if pivots.contains(&k) {
            return Err(MatroidError::NoFundamentalCircuit(e));
        }
        let mut circuit: ElementSet = aug
            .iter()
            .zip(&pivots)
            .filter(|(row, _)| row.get(k))
            .map(|(_, &p)| self.labels[basis[p]])
            .collect();
        circuit.insert(e);
        Ok(circuit)
    }

    /// `(M - delete) / contract`.
    pub fn minor(&self, delete: &ElementSet, contract: &ElementSet) -> Result<Self, MatroidError> {
        for &e in delete.iter().chain(contract) {
            self.index_of(e)?;
        }
        if let Some(&e) = delete.intersection(contract).next() {
            return Err(MatroidError::DeleteContractOverlap(e));
        }
        let contracted: Vec<usize> = self.indices(contract)?;
        let kept: Vec<usize> = (0..self.len())
            .filter(|&c| !delete.contains(&self.labels[c]) && !contract.contains(&self.labels[c]))
            .collect();
        let mut cols = contracted.clone();
        cols.extend(&kept);
        let mut rows: Vec<BitVec> = self.rows.iter().map(|r| r.select(&cols)).collect();
        let order: Vec<usize> = (0..cols.len()).collect();
        let pivots = gf2::rref_in_order(&mut rows, &order);
        let k = contracted.len();
        let tail: Vec<usize> = (k..cols.len()).collect();
        let remaining: Vec<BitVec> = rows
            .iter()
            .zip(&pivots)
            .filter(|(_, &p)| p >= k)
            .map(|(r, _)| r.select(&tail))
            .collect();
        let labels = kept.iter().map(|&c| self.labels[c]).collect();
        Self::from_rows(labels, remaining)
    }

    pub fn delete(&self, set: &ElementSet) -> Result<Self, MatroidError> {
        self.minor(set, &ElementSet::new())
    }

    pub fn contract(&self, set: &ElementSet) -> Result<Self, MatroidError> {
        self.minor(&ElementSet::new(), set)
    }

    pub fn restrict(&self, keep: &ElementSet) -> Result<Self, MatroidError> {
        for &e in keep {
            self.index_of(e)?;
        }
        let drop: ElementSet = self.ground().difference(keep).copied().collect();
        self.delete(&drop)
    }

    /// `M(z, a)`: adds `z` with the same column as `a`.
    pub fn add_parallel(&self, z: ElementId, a: ElementId) -> Result<Self, MatroidError> {
        if self.contains(z) {
            return Err(MatroidError::AlreadyPresent(z));
        }
        let ca = self.index_of(a)?;
        if self.is_loop(a)? {
            return Err(MatroidError::LoopElement(a));
        }
        let n = self.len();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut wide = BitVec::zeros(n + 1);
                for c in r.iter_ones() {
                    wide.set(c);
                }
                wide.assign(n, r.get(ca));
                wide
            })
            .collect();
        let mut labels = self.labels.clone();
        labels.push(z);
        Self::from_rows(labels, rows)
    }

    /// The dual matroid: its representation rows span this matroid's cycle space.
    pub fn dual(&self) -> Self {
        Self::from_rows(self.labels.clone(), self.cycles.clone())
            .expect("cycle basis has the same labels and width")
    }

    /// Renames elements; ids missing from `map` keep their name.
    pub fn relabel(&self, map: &BTreeMap<ElementId, ElementId>) -> Result<Self, MatroidError> {
        let labels = self
            .labels
            .iter()
            .map(|e| map.get(e).copied().unwrap_or(*e))
            .collect();
        Self::from_rows(labels, self.rows.clone())
    }

    /// Parallel classes of the non-loop elements, ordered by smallest member.
    pub fn parallel_classes(&self) -> Vec<ElementSet> {
        let mut by_column: BTreeMap<BitVec, ElementSet> = BTreeMap::new();
        for c in 0..self.len() {
            let col = self.column_at(c);
            if !col.is_zero() {
                by_column.entry(col).or_default().insert(self.labels[c]);
            }
        }
        let mut classes: Vec<ElementSet> = by_column.into_values().collect();
        classes.sort_by_key(|c| *c.iter().next().expect("classes are nonempty"));
        classes
    }

    /// True iff `{x, y}` is a circuit.
    pub fn are_parallel(&self, x: ElementId, y: ElementId) -> Result<bool, MatroidError> {
        if x == y {
            return Ok(false);
        }
        let (cx, cy) = (self.column(x)?, self.column(y)?);
        Ok(!cx.is_zero() && cx == cy)
    }

    /// Maximum-weight independent set by the matroid greedy algorithm.
    ///
    /// Elements are scanned by decreasing weight, ties by increasing id;
    /// zero-weight elements are never taken.
    pub fn greedy_opt(&self, weights: &Weights) -> ElementSet {
        let mut order: Vec<usize> = (0..self.len())
            .filter(|&c| weights.get(self.labels[c]) > 0.0)
            .collect();
        order.sort_by(|&a, &b| {
            let (wa, wb) = (weights.get(self.labels[a]), weights.get(self.labels[b]));
            wb.total_cmp(&wa).then(self.labels[a].cmp(&self.labels[b]))
        });
        let mut basis = XorBasis::new(self.rank());
        order
            .into_iter()
            .filter(|&c| basis.insert(&self.column_at(c)))
            .map(|c| self.labels[c])
            .collect()
    }

    /// A basis of `M|set`, grown greedily in the given order.
    pub fn basis_in_order(&self, order: &[ElementId]) -> Result<Vec<ElementId>, MatroidError> {
        let mut basis = XorBasis::new(self.rank());
        let mut out = Vec::new();
        for &e in order {
            if basis.insert(&self.column(e)?) {
                out.push(e);
            }
        }
        Ok(out)
    }
}

pub fn weight_of(set: &ElementSet, weights: &Weights) -> f64 {
    set.iter().map(|&e| weights.get(e)).sum()
}

/// Decides whether two matroids on the same ground set are equal.
pub fn matroids_equal(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    mode: EqualityMode,
) -> Result<bool, MatroidError> {
    if m1.ground() != m2.ground() {
        return Err(MatroidError::GroundMismatch);
    }
    // position in m2 of each column of m1
    let perm: Vec<usize> = m1
        .elements()
        .iter()
        .map(|&e| m2.index_of(e))
        .collect::<Result<_, _>>()?;
    match mode {
        EqualityMode::Algebraic => {
            if m1.rank() != m2.rank() {
                return Ok(false);
            }
            let mut rows: Vec<BitVec> = m2.rows.iter().map(|r| r.select(&perm)).collect();
            gf2::rref(&mut rows, m1.len());
            Ok(rows == m1.rows)
        }
        EqualityMode::Exhaustive => {
            let n = m1.len();
            if n > EXHAUSTIVE_GUARD {
                return Err(MatroidError::GuardExceeded {
                    operation: "exhaustive equality",
                    limit: EXHAUSTIVE_GUARD,
                    actual: n,
                });
            }
            Ok((0u64..1 << n).all(|mask| {
                let mapped = mask_bits(mask).fold(0u64, |m, i| m | (1 << perm[i]));
                m1.is_independent_mask(mask) == m2.is_independent_mask(mapped)
            }))
        }
    }
}

/// Iterates the positions of the set bits of `mask`.
pub fn mask_bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let bit = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(bit)
    })
}

fn insert_word(slots: &mut [u64; 64], mut v: u64) -> bool {
    while v != 0 {
        let p = v.trailing_zeros() as usize;
        if slots[p] == 0 {
            slots[p] = v;
            return true;
        }
        v ^= slots[p];
    }
    false
}

/// Advances `comb` (strictly increasing, values < n) to the next k-combination.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
