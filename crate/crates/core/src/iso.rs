//! Isomorphism search for small binary matroids.

use std::collections::{BTreeMap, HashSet};

use crate::matroid::{mask_bits, BinaryMatroid, ElementId, MatroidError};

pub const ISOMORPHISM_GUARD: usize = 10;

/// Finds a bijection `E(m1) -> E(m2)` carrying circuits onto circuits, if any.
///
/// Candidates are pruned by the multiset of circuit sizes through each
/// element; a partial map is rejected as soon as a fully mapped circuit of
/// `m1` lands on a non-circuit. Equal circuit counts make the final injection
/// onto.
pub fn matroids_isomorphic(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
) -> Result<Option<BTreeMap<ElementId, ElementId>>, MatroidError> {
    for m in [m1, m2] {
        if m.len() > ISOMORPHISM_GUARD {
            return Err(MatroidError::GuardExceeded {
                operation: "isomorphism search",
                limit: ISOMORPHISM_GUARD,
                actual: m.len(),
            });
        }
    }
    let n = m1.len();
    if n != m2.len() || m1.rank() != m2.rank() {
        return Ok(None);
    }
    let c1 = m1.circuit_masks()?;
    let c2 = m2.circuit_masks()?;
    let sizes = |cs: &[u64]| {
        let mut s: Vec<u32> = cs.iter().map(|c| c.count_ones()).collect();
        s.sort_unstable();
        s
    };
    if sizes(&c1) != sizes(&c2) {
        return Ok(None);
    }
    let signature = |cs: &[u64], i: usize| {
        let mut s: Vec<u32> = cs
            .iter()
            .filter(|&&c| c & (1 << i) != 0)
            .map(|c| c.count_ones())
            .collect();
        s.sort_unstable();
        s
    };
    let sig1: Vec<Vec<u32>> = (0..n).map(|i| signature(&c1, i)).collect();
    let sig2: Vec<Vec<u32>> = (0..n).map(|i| signature(&c2, i)).collect();
    // circuits of m1 that become fully mapped once element k is placed
    let mut closing: Vec<Vec<u64>> = vec![Vec::new(); n];
    for &c in &c1 {
        let last = 63 - c.leading_zeros() as usize;
        closing[last].push(c);
    }
    let targets: HashSet<u64> = c2.iter().copied().collect();
    let search = Search {
        n,
        sig1: &sig1,
        sig2: &sig2,
        closing: &closing,
        targets: &targets,
    };
    let mut map = vec![usize::MAX; n];
    if search.extend(0, &mut map, 0) {
        let bijection = map
            .iter()
            .enumerate()
            .map(|(i, &j)| (m1.elements()[i], m2.elements()[j]))
            .collect();
        Ok(Some(bijection))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    n: usize,
    sig1: &'a [Vec<u32>],
    sig2: &'a [Vec<u32>],
    closing: &'a [Vec<u64>],
    targets: &'a HashSet<u64>,
}

impl Search<'_> {
    fn extend(&self, k: usize, map: &mut [usize], used: u64) -> bool {
        if k == self.n {
            return true;
        }
        for j in 0..self.n {
            if used & (1 << j) != 0 || self.sig1[k] != self.sig2[j] {
                continue;
            }
            map[k] = j;
            let consistent = self.closing[k].iter().all(|&c| {
                let image = mask_bits(c).fold(0u64, |m, i| m | (1 << map[i]));
                self.targets.contains(&image)
            });
            if consistent && self.extend(k + 1, map, used | (1 << j)) {
                return true;
            }
        }
        map[k] = usize::MAX;
        false
    }
}
