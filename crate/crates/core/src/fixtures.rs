//! Ready-made decompositions used by tests, benchmarks and the CLI, plus a
//! random generator of small decompositions.
//!
//! Element ids below 100 are real in the composed matroid; ids from 100 up
//! are shared between two leaves unless a fixture says otherwise.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decomposition::{DecompSpec, LeafInput, Shape};
use crate::gf2::BitVec;
use crate::graph::GraphModel;
use crate::matroid::{BinaryMatroid, ElementId, ElementSet};
use crate::sums::{delta_sum, SumTag};
use crate::zoo::{zoo, ClassTag};

fn ids(raw: &[u32]) -> Vec<ElementId> {
    raw.iter().map(|&i| ElementId(i)).collect()
}

/// A zoo entry relabelled position by position with `labels`.
pub fn zoo_leaf(name: &str, zoo_name: &str, labels: &[u32]) -> LeafInput {
    let z = zoo(zoo_name).expect("fixture names are valid");
    assert_eq!(z.matroid.len(), labels.len(), "{zoo_name} needs {} labels", z.matroid.len());
    let map: BTreeMap<ElementId, ElementId> = (0..labels.len() as u32)
        .map(|i| (ElementId(i), ElementId(labels[i as usize])))
        .collect();
    LeafInput {
        name: name.to_string(),
        class: z.class,
        matroid: z.matroid.relabel(&map).expect("labels are distinct"),
        graph: z.graph.map(|g| g.relabel(&map)),
    }
}

/// A custom leaf given by its columns as bit strings.
pub fn columns_leaf(name: &str, labels: &[u32], columns: &[&str]) -> LeafInput {
    let cols: Vec<BitVec> = columns.iter().map(|c| BitVec::parse(c).expect("bit string")).collect();
    let height = cols.first().map_or(0, BitVec::len);
    LeafInput {
        name: name.to_string(),
        class: ClassTag::Custom,
        matroid: BinaryMatroid::from_columns(ids(labels), height, &cols).expect("valid fixture"),
        graph: None,
    }
}

/// A graphic leaf given by labelled edges.
pub fn graph_leaf(name: &str, edges: &[(u32, (u32, u32))]) -> LeafInput {
    let graph = GraphModel::new(edges.iter().map(|&(e, uv)| (ElementId(e), uv)));
    LeafInput {
        name: name.to_string(),
        class: ClassTag::Graphic,
        matroid: graph.cycle_matroid(),
        graph: Some(graph),
    }
}

use Shape as S;

fn two(l: Shape, r: Shape) -> Shape {
    S::sum(SumTag::Two, l, r)
}

fn three(l: Shape, r: Shape) -> Shape {
    S::sum(SumTag::Three, l, r)
}

/// Two triangles glued along one edge; the result is M(C4).
pub fn two_triangles() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            zoo_leaf("T1", "triangle", &[100, 1, 2]),
            zoo_leaf("T2", "triangle", &[100, 3, 4]),
        ],
        shape: two(S::leaf("T1"), S::leaf("T2")),
    }
}

/// One bad sum-set. The 3-sum along `{11,12,13}` uses a triangle that the
/// 2-sum `B1 (+) B2` creates from `11` (in B1) and `12, 13` (in B2); element
/// `10` is the witness. Normalization moves `11` into B2.
pub fn badseed1() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            columns_leaf("B1", &[11, 10, 1], &["10", "10", "01"]),
            columns_leaf("B2", &[12, 13, 10, 2], &["100", "010", "110", "001"]),
            zoo_leaf("B3", "k4", &[11, 12, 3, 13, 4, 5]),
        ],
        shape: three(two(S::leaf("B1"), S::leaf("B2")), S::leaf("B3")),
    }
}

/// Two stacked bad sum-sets: fixing the lower one turns the upper one from
/// `g = 11` into one that still needs a move. The potential goes 18, 11, 0.
pub fn stacked_bad() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            columns_leaf("B1", &[11, 10, 1], &["1", "1", "1"]),
            columns_leaf("B2", &[12, 13, 10, 2], &["100", "010", "110", "001"]),
            zoo_leaf("B3", "k4", &[11, 12, 3, 13, 4, 5]),
            zoo_leaf("B4", "k4", &[1, 3, 6, 4, 7, 8]),
        ],
        shape: three(
            three(two(S::leaf("B1"), S::leaf("B2")), S::leaf("B3")),
            S::leaf("B4"),
        ),
    }
}

/// A child whose real element `5` is parallel to the element `20` it shares
/// with its parent; normalization lifts `5` into the parent.
pub fn parallel_child() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            zoo_leaf("P", "triangle", &[1, 2, 20]),
            graph_leaf("C", &[(20, (0, 1)), (3, (1, 2)), (4, (0, 2)), (5, (0, 1))]),
        ],
        shape: two(S::leaf("P"), S::leaf("C")),
    }
}

/// Element `7` must climb two levels: from L to P, where it is parallel to
/// `20`, and from P to G.
pub fn parallel_chain() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            zoo_leaf("G", "triangle", &[1, 2, 20]),
            columns_leaf("P", &[20, 21, 3, 4], &["10", "10", "01", "11"]),
            columns_leaf("L", &[21, 5, 6, 7], &["10", "01", "11", "10"]),
        ],
        shape: two(S::leaf("G"), two(S::leaf("P"), S::leaf("L"))),
    }
}

fn regular_chain_leaves() -> Vec<LeafInput> {
    let r10_labels: Vec<u32> = std::iter::once(106).chain(26..=34).collect();
    vec![
        zoo_leaf("K5a", "k5", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 101]),
        zoo_leaf("K4", "k4", &[101, 102, 103, 11, 12, 104]),
        zoo_leaf("K5b", "k5", &[102, 103, 13, 14, 104, 15, 16, 17, 18, 105]),
        zoo_leaf("K33", "k33", &[105, 19, 20, 21, 22, 23, 24, 25, 106]),
        zoo_leaf("R10", "r10", &r10_labels),
    ]
}

fn regular_chain_shape() -> Shape {
    two(
        two(
            three(two(S::leaf("K5a"), S::leaf("K4")), S::leaf("K5b")),
            S::leaf("K33"),
        ),
        S::leaf("R10"),
    )
}

/// A regular matroid on 33 elements built from K5, K4, K5, K3,3 and R10.
pub fn regular_chain() -> DecompSpec {
    DecompSpec {
        leaves: regular_chain_leaves(),
        shape: regular_chain_shape(),
    }
}

/// F7 2-summed with a triangle: 8 elements, one F7 leaf.
pub fn mfmc_small() -> DecompSpec {
    DecompSpec {
        leaves: vec![
            zoo_leaf("F7", "f7", &[100, 1, 2, 3, 4, 5, 6]),
            zoo_leaf("T", "triangle", &[100, 7, 8]),
        ],
        shape: two(S::leaf("F7"), S::leaf("T")),
    }
}

/// The regular chain 2-summed with F7 along element `1` of the first K5:
/// 38 elements.
pub fn mfmc_chain() -> DecompSpec {
    let mut leaves = regular_chain_leaves();
    leaves.push(zoo_leaf("F7", "f7", &[1, 41, 42, 43, 44, 45, 46]));
    DecompSpec {
        leaves,
        shape: two(regular_chain_shape(), S::leaf("F7")),
    }
}

/// U(1, n) on elements `0..n`.
pub fn uniform_rank_one(n: usize) -> BinaryMatroid {
    let cols = vec![BitVec::parse("1").expect("bit"); n];
    BinaryMatroid::from_columns((0..n as u32).map(ElementId).collect(), 1, &cols).expect("distinct labels")
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<(&'static str, DecompSpec)> {
    vec![
        ("two_triangles", two_triangles()),
        ("badseed1", badseed1()),
        ("stacked_bad", stacked_bad()),
        ("parallel_child", parallel_child()),
        ("parallel_chain", parallel_chain()),
        ("regular_chain", regular_chain()),
        ("mfmc_small", mfmc_small()),
        ("mfmc_chain", mfmc_chain()),
    ]
}

pub fn by_name(name: &str) -> Option<DecompSpec> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

/// Largest composed matroid the random generator returns.
pub const RANDOM_MAX_ELEMENTS: usize = 16;

/// A random decomposition with 2 to 4 leaves drawn from triangles, K4 and F7.
///
/// Leaves built from simple matroids never produce a bad sum-set, so each
/// leaf gets one extra element parallel to a random element with probability
/// 1/2. 3-sums prefer triangles whose elements come from different leaves.
/// The composed matroid has at most [`RANDOM_MAX_ELEMENTS`] elements and no
/// loops.
pub fn random_decomposition<R: Rng + ?Sized>(rng: &mut R) -> DecompSpec {
    loop {
        if let Some(spec) = try_random(rng) {
            return spec;
        }
    }
}

struct Generator {
    next_id: u32,
    leaves: Vec<LeafInput>,
}

fn try_random<R: Rng + ?Sized>(rng: &mut R) -> Option<DecompSpec> {
    let mut g = Generator {
        next_id: 0,
        leaves: Vec::new(),
    };
    let n = rng.gen_range(2..=4);
    let (shape, root) = g.subtree(rng, n)?;
    if root.is_empty() || root.len() > RANDOM_MAX_ELEMENTS || !root.loops().is_empty() {
        return None;
    }
    Some(DecompSpec {
        leaves: g.leaves,
        shape,
    })
}

impl Generator {
    fn fresh(&mut self) -> u32 {
        self.next_id += 1;
        self.next_id
    }

    fn subtree<R: Rng + ?Sized>(&mut self, rng: &mut R, n: usize) -> Option<(Shape, BinaryMatroid)> {
        if n == 1 {
            return Some(self.random_leaf(rng));
        }
        let k = rng.gen_range(1..n);
        let first = self.leaves.len();
        let (ls, lm) = self.subtree(rng, k)?;
        let mid = self.leaves.len();
        let (rs, rm) = self.subtree(rng, n - k)?;

        let mut map = BTreeMap::new();
        let roll: f64 = rng.gen();
        let left_tri = triangles(&lm);
        let right_tri = triangles(&rm);
        let tag = if roll < 0.5 && !left_tri.is_empty() && !right_tri.is_empty() {
            let nonbasic: Vec<&[ElementId; 3]> = left_tri
                .iter()
                .filter(|t| self.owners(first..mid, t.as_slice()).len() > 1)
                .collect();
            let tl = match nonbasic.choose(rng) {
                Some(t) => **t,
                None => *left_tri.choose(rng)?,
            };
            let mut tr = *right_tri.choose(rng)?;
            tr.shuffle(rng);
            for i in 0..3 {
                map.insert(tr[i], tl[i]);
            }
            SumTag::Three
        } else if roll < 0.85 {
            let pick = |m: &BinaryMatroid, rng: &mut R| {
                let loops = m.loops();
                let ok: Vec<ElementId> = m.elements().iter().copied().filter(|e| !loops.contains(e)).collect();
                ok.choose(rng).copied()
            };
            let a = pick(&lm, rng)?;
            let b = pick(&rm, rng)?;
            map.insert(b, a);
            SumTag::Two
        } else {
            SumTag::One
        };
        for leaf in &mut self.leaves[mid..] {
            leaf.matroid = leaf.matroid.relabel(&map).ok()?;
            leaf.graph = leaf.graph.as_ref().map(|g| g.relabel(&map));
        }
        let rm = rm.relabel(&map).ok()?;
        let sum = delta_sum(&lm, &rm).ok()?;
        if sum.len() > RANDOM_MAX_ELEMENTS + 4 {
            return None;
        }
        Some((Shape::sum(tag, ls, rs), sum))
    }

    fn owners(&self, range: std::ops::Range<usize>, set: &[ElementId]) -> BTreeSet<usize> {
        set.iter()
            .filter_map(|&e| range.clone().find(|&i| self.leaves[i].matroid.contains(e)))
            .collect()
    }

    fn random_leaf<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (Shape, BinaryMatroid) {
        let zoo_name = *["triangle", "k4", "f7"].choose(rng).expect("nonempty");
        let size = zoo(zoo_name).expect("valid").matroid.len();
        let labels: Vec<u32> = (0..size).map(|_| self.fresh()).collect();
        let name = format!("L{}", self.leaves.len());
        let mut leaf = zoo_leaf(&name, zoo_name, &labels);
        if rng.gen_bool(0.5) {
            let a = *leaf.matroid.elements().choose(rng).expect("nonempty");
            let z = ElementId(self.fresh());
            leaf.matroid = leaf.matroid.add_parallel(z, a).expect("fresh label");
            if let Some(g) = &mut leaf.graph {
                g.add_parallel(z, a);
            }
        }
        let m = leaf.matroid.clone();
        self.leaves.push(leaf);
        (Shape::Leaf(name), m)
    }
}

fn triangles(m: &BinaryMatroid) -> Vec<[ElementId; 3]> {
    let e = m.elements();
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            for k in j + 1..e.len() {
                let set: ElementSet = [e[i], e[j], e[k]].into();
                if m.is_circuit(&set).unwrap_or(false) {
                    out.push([e[i], e[j], e[k]]);
                }
            }
        }
    }
    out
}
