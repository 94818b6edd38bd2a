//! Multigraphs whose edges are matroid elements, kept alongside graphic
//! basic matroids so that the graphic secretary can work on real vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::BitVec;
use crate::matroid::{BinaryMatroid, ElementId, ElementSet};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphModel {
    edges: BTreeMap<ElementId, (u32, u32)>,
}

impl GraphModel {
    pub fn new<I: IntoIterator<Item = (ElementId, (u32, u32))>>(edges: I) -> Self {
        Self {
            edges: edges.into_iter().collect(),
        }
    }

    /// Edges labelled `0..m` in list order.
    pub fn from_edge_list(edges: &[(u32, u32)]) -> Self {
        Self::new(
            edges
                .iter()
                .enumerate()
                .map(|(i, &uv)| (ElementId(i as u32), uv)),
        )
    }

    pub fn edges(&self) -> impl Iterator<Item = (ElementId, (u32, u32))> + '_ {
        self.edges.iter().map(|(&e, &uv)| (e, uv))
    }

    pub fn elements(&self) -> ElementSet {
        self.edges.keys().copied().collect()
    }

    pub fn ends(&self, e: ElementId) -> Option<(u32, u32)> {
        self.edges.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.edges.values().flat_map(|&(u, v)| [u, v]).collect()
    }

    pub fn delete(&mut self, e: ElementId) -> bool {
        self.edges.remove(&e).is_some()
    }

    /// Adds `z` with the same endpoints as `a`.
    pub fn add_parallel(&mut self, z: ElementId, a: ElementId) -> bool {
        match self.ends(a) {
            Some(uv) if !self.edges.contains_key(&z) => {
                self.edges.insert(z, uv);
                true
            }
            _ => false,
        }
    }

    pub fn restrict(&self, keep: &ElementSet) -> Self {
        Self::new(self.edges().filter(|(e, _)| keep.contains(e)))
    }

    /// Identifies the endpoints of every edge in `set` and drops those edges.
    /// Remaining edges whose ends merge become self-loops.
    pub fn contract(&self, set: &ElementSet) -> Self {
        let mut parent: BTreeMap<u32, u32> = self.vertices().into_iter().map(|v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<u32, u32>, v: u32) -> u32 {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for e in set {
            if let Some((u, v)) = self.ends(*e) {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                // the smaller vertex names the merged class
                let (lo, hi) = (ru.min(rv), ru.max(rv));
                parent.insert(hi, lo);
            }
        }
        Self::new(
            self.edges()
                .filter(|(e, _)| !set.contains(e))
                .map(|(e, (u, v))| (e, (find(&mut parent, u), find(&mut parent, v))))
                .collect::<Vec<_>>(),
        )
    }

    pub fn relabel(&self, map: &BTreeMap<ElementId, ElementId>) -> Self {
        Self::new(
            self.edges()
                .map(|(e, uv)| (map.get(&e).copied().unwrap_or(e), uv)),
        )
    }

    /// Cycle matroid from the GF(2) vertex-edge incidence matrix with the last
    /// vertex row dropped. Columns follow increasing element id.
    pub fn cycle_matroid(&self) -> BinaryMatroid {
        let vertices: Vec<u32> = self.vertices().into_iter().collect();
        let row_of: BTreeMap<u32, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let height = vertices.len().saturating_sub(1);
        let columns: Vec<BitVec> = self
            .edges
            .values()
            .map(|&(u, v)| {
                let mut col = BitVec::zeros(height);
                if u != v {
                    for w in [u, v] {
                        let r = row_of[&w];
                        if r < height {
                            col.set(r);
                        }
                    }
                }
                col
            })
            .collect();
        BinaryMatroid::from_columns(self.edges.keys().copied().collect(), height, &columns)
            .expect("edge labels are distinct")
    }

    pub fn is_connected(&self) -> bool {
        let vertices = self.vertices();
        let Some(&start) = vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(u, v) in self.edges.values() {
                for (a, b) in [(u, v), (v, u)] {
                    if a == x && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        seen.len() == vertices.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{matroids_equal, set_of, EqualityMode};

    fn k4() -> GraphModel {
        GraphModel::from_edge_list(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn k4_cycle_matroid() {
        let m = k4().cycle_matroid();
        assert_eq!(m.rank(), 3);
        let circuits = m.enumerate_circuits().unwrap();
        assert_eq!(circuits.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(circuits.iter().filter(|c| c.len() == 4).count(), 3);
        assert_eq!(circuits.len(), 7);
    }

    #[test]
    fn dropped_row_choice_does_not_matter() {
        // the same K4 with vertex names permuted drops a different original row
        let g = k4();
        let h = GraphModel::new(g.edges().map(|(e, (u, v))| (e, (3 - u, 3 - v))));
        assert!(matroids_equal(&g.cycle_matroid(), &h.cycle_matroid(), EqualityMode::Exhaustive).unwrap());
    }

    #[test]
    fn graph_contraction_matches_matroid_contraction() {
        let g = k4();
        let m = g.cycle_matroid();
        for set in [set_of(&[0]), set_of(&[0, 3]), set_of(&[0, 1, 3])] {
            let via_graph = g.contract(&set).cycle_matroid();
            let via_matroid = m.contract(&set).unwrap();
            assert!(matroids_equal(&via_graph, &via_matroid, EqualityMode::Exhaustive).unwrap());
        }
    }

    #[test]
    fn parallel_edges_and_loops() {
        let mut g = GraphModel::from_edge_list(&[(0, 1), (1, 2), (2, 0)]);
        assert!(g.add_parallel(ElementId(7), ElementId(0)));
        assert!(!g.add_parallel(ElementId(7), ElementId(1)));
        let m = g.cycle_matroid();
        assert!(m.are_parallel(ElementId(0), ElementId(7)).unwrap());
        let c = g.contract(&set_of(&[0]));
        assert_eq!(c.ends(ElementId(7)), Some((0, 0)));
        assert!(c.cycle_matroid().is_loop(ElementId(7)).unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(k4().is_connected());
        assert!(!GraphModel::from_edge_list(&[(0, 1), (2, 3)]).is_connected());
    }
}
