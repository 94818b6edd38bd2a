//! Brute-force oracles shared by the integration tests. They work from raw
//! columns or from graphs and never call the rank code under test.
#![allow(dead_code)]

use std::collections::BTreeMap;

use matroid_secretary::graph::GraphModel;
use matroid_secretary::{BinaryMatroid, ElementId, ElementSet, Weights};

/// Columns of `m` packed into words, keyed by element.
pub fn columns(m: &BinaryMatroid) -> BTreeMap<ElementId, u64> {
    m.elements()
        .iter()
        .map(|&e| {
            let c = m.column(e).unwrap();
            assert!(c.len() <= 64);
            let word = c.iter_ones().fold(0u64, |acc, i| acc | (1 << i));
            (e, word)
        })
        .collect()
}

/// GF(2) rank of a list of words by plain elimination.
pub fn rank_of_words(words: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut w in words {
        for &b in &basis {
            w = w.min(w ^ b);
        }
        if w != 0 {
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub struct Oracle {
    pub elements: Vec<ElementId>,
    cols: BTreeMap<ElementId, u64>,
}

impl Oracle {
    pub fn new(m: &BinaryMatroid) -> Self {
        Oracle {
            elements: m.elements().to_vec(),
            cols: columns(m),
        }
    }

    pub fn rank(&self, set: &ElementSet) -> usize {
        rank_of_words(set.iter().map(|e| self.cols[e]))
    }

    pub fn independent(&self, set: &ElementSet) -> bool {
        self.rank(set) == set.len()
    }

    /// A cycle is a set whose columns sum to zero.
    pub fn is_cycle(&self, set: &ElementSet) -> bool {
        set.iter().fold(0u64, |acc, e| acc ^ self.cols[e]) == 0
    }

    pub fn is_circuit(&self, set: &ElementSet) -> bool {
        !set.is_empty()
            && !self.independent(set)
            && set.iter().all(|e| {
                let mut smaller = set.clone();
                smaller.remove(e);
                self.independent(&smaller)
            })
    }

    pub fn full_rank(&self) -> usize {
        rank_of_words(self.cols.values().copied())
    }

    pub fn subsets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        subsets(&self.elements)
    }

    pub fn circuits(&self) -> Vec<ElementSet> {
        self.subsets().filter(|s| self.is_circuit(s)).collect()
    }

    pub fn cycles(&self) -> Vec<ElementSet> {
        self.subsets().filter(|s| self.is_cycle(s)).collect()
    }

    /// Maximum weight of an independent set, by trying them all.
    pub fn brute_opt(&self, w: &Weights) -> f64 {
        self.subsets()
            .filter(|s| self.independent(s))
            .map(|s| s.iter().map(|&e| w.get(e)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Independent sets of `m / contract`, derived from `m` itself: `S` is
    /// independent after contraction iff `r(S ∪ C) = |S| + r(C)`.
    pub fn independent_after_contracting(&self, set: &ElementSet, contract: &ElementSet) -> bool {
        let union: ElementSet = set.union(contract).copied().collect();
        self.rank(&union) == set.len() + self.rank(contract)
    }
}

pub fn subsets(elements: &[ElementId]) -> impl Iterator<Item = ElementSet> + '_ {
    assert!(elements.len() <= 24, "too many elements to enumerate");
    (0u64..1 << elements.len()).map(move |mask| {
        elements
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    })
}

/// Whether the edges of `set` form a forest in `g`.
pub fn acyclic(g: &GraphModel, set: &ElementSet) -> bool {
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(p: &mut BTreeMap<u32, u32>, v: u32) -> u32 {
        let up = *p.entry(v).or_insert(v);
        if up == v {
            v
        } else {
            let r = find(p, up);
            p.insert(v, r);
            r
        }
    }
    for &e in set {
        let (u, v) = g.ends(e).unwrap();
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent.insert(a, b);
    }
    true
}

/// Whether the edges outside `set` still connect every vertex, i.e. `set`
/// is independent in the bond matroid of a connected graph.
pub fn complement_connected(g: &GraphModel, set: &ElementSet) -> bool {
    let rest: ElementSet = g.elements().difference(set).copied().collect();
    let mut parent: BTreeMap<u32, u32> = g.vertices().into_iter().map(|v| (v, v)).collect();
    fn find(p: &mut BTreeMap<u32, u32>, v: u32) -> u32 {
        let up = p[&v];
        if up == v {
            v
        } else {
            let r = find(p, up);
            p.insert(v, r);
            r
        }
    }
    let mut components = parent.len();
    for e in rest {
        let (u, v) = g.ends(e).unwrap();
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent.insert(a, b);
            components -= 1;
        }
    }
    components == 1
}

/// Applies a relabelling to a set.
pub fn map_set(map: &BTreeMap<ElementId, ElementId>, set: &ElementSet) -> ElementSet {
    set.iter().map(|e| map[e]).collect()
}
