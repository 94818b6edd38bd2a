//! Dense GF(2) vectors and the handful of elimination routines the matroid
//! kernel is built on.
//!
//! Everything here works on plain bit positions. Element labels live one
//! layer up, in [`crate::matroid`].

use std::fmt;

/// A dense vector over GF(2), packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// hashing agree with the mathematical vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Parses a string of `'0'`/`'1'` characters; character `i` is bit `i`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn assign(&mut self, i: usize, value: bool) {
        if value {
            self.set(i)
        } else {
            self.clear(i)
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + bit)
            })
        })
    }

    /// Keeps the listed positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self::from_indices(
            positions.len(),
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| self.get(p))
                .map(|(i, _)| i),
        )
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_bit_string())
    }
}

/// Brings `rows` into reduced row-echelon form, choosing pivot columns in the
/// order given by `column_order`. Zero rows are removed. Returns the pivot
/// column of each remaining row.
///
/// A row whose pivot comes later in `column_order` is zero on every column that
/// comes earlier; contraction and sum composition rely on that.
pub fn rref_in_order(rows: &mut Vec<BitVec>, column_order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in column_order {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// [`rref_in_order`] with the natural column order.
pub fn rref(rows: &mut Vec<BitVec>, ncols: usize) -> Vec<usize> {
    let order: Vec<usize> = (0..ncols).collect();
    rref_in_order(rows, &order)
}

/// Basis of `{x : r·x = 0 for every row r}` for a matrix already in RREF with
/// the given pivot columns.
pub fn null_space_of_rref(rows: &[BitVec], pivots: &[usize], ncols: usize) -> Vec<BitVec> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVec::zeros(ncols);
            v.set(free);
            for (row, &p) in rows.iter().zip(pivots) {
                if row.get(free) {
                    v.set(p);
                }
            }
            v
        })
        .collect()
}

pub fn null_space(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    null_space_of_rref(&work, &pivots, ncols)
}

pub fn rank(rows: &[BitVec], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Incrementally maintained basis of a subspace, keyed by lowest set bit.
///
/// Reducing against `slots[p]` clears bit `p` and touches only higher bits, so
/// the lowest set bit strictly increases and insertion terminates.
#[derive(Clone, Debug)]
pub struct XorBasis {
    slots: Vec<Option<BitVec>>,
    dim: usize,
}

impl XorBasis {
    pub fn new(ambient: usize) -> Self {
        Self {
            slots: vec![None; ambient],
            dim: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &mut BitVec) -> Option<usize> {
        while let Some(p) = v.first_one() {
            match &self.slots[p] {
                Some(b) => v.xor_assign(b),
                None => return Some(p),
            }
        }
        None
    }

    pub fn is_independent_of(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w).is_some()
    }

    /// Adds `v`; returns false (and leaves the basis unchanged) when `v` is
    /// already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        match self.reduce(&mut w) {
            Some(p) => {
                self.slots[p] = Some(w);
                self.dim += 1;
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> Vec<BitVec> {
        rows.iter().map(|r| BitVec::parse(r).unwrap()).collect()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let v = BitVec::parse("0110100").unwrap();
        assert_eq!(v.to_bit_string(), "0110100");
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(BitVec::parse("012").is_none());
    }

    #[test]
    fn words_past_64_bits() {
        let mut v = BitVec::zeros(130);
        v.set(0);
        v.set(64);
        v.set(129);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        v.clear(0);
        assert_eq!(v.first_one(), Some(64));
    }

    #[test]
    fn rref_drops_dependent_rows() {
        let mut rows = m(&["110", "011", "101"]);
        let piv = rref(&mut rows, 3);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rows, m(&["101", "011"]));
    }

    #[test]
    fn rref_respects_column_priority() {
        let mut rows = m(&["110", "011"]);
        let piv = rref_in_order(&mut rows, &[2, 0, 1]);
        assert_eq!(piv, vec![2, 0]);
        // second row has its leading entry on column 0, so it vanishes on column 2
        assert!(!rows[1].get(2));
    }

    #[test]
    fn null_space_is_orthogonal_and_complementary() {
        let rows = m(&["1011", "0110"]);
        let ns = null_space(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(!r.dot(v));
            }
        }
        assert_eq!(rank(&ns, 4), 2);
    }

    #[test]
    fn xor_basis_detects_dependence() {
        let mut b = XorBasis::new(3);
        assert!(b.insert(&BitVec::parse("110").unwrap()));
        assert!(b.insert(&BitVec::parse("011").unwrap()));
        assert!(!b.insert(&BitVec::parse("101").unwrap()));
        assert!(!b.insert(&BitVec::zeros(3)));
        assert_eq!(b.dim(), 2);
    }
}
