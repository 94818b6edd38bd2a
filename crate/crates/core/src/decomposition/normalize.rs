//! Making a decomposition good, building its rooted conflict forest, and
//! pushing real elements parallel to contracted ones up the forest.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::tree::{DecompTree, NodeId};
use super::DecompError;
use crate::matroid::{ElementId, ElementSet};
use crate::sums::{three_circuit_witness, SumKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadSumSet {
    pub node: NodeId,
    pub z: [ElementId; 3],
    /// Lowest node on each side containing all of `z`.
    pub creation: [NodeId; 2],
    /// Sum of the post-order numbers of the creation nodes.
    pub g: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    MakeGood,
    EliminateBadElements,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub element: ElementId,
    pub from: String,
    pub to: String,
    pub witness: ElementId,
    pub stage: Stage,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MakeGoodReport {
    pub iterations: usize,
    /// Potential before each iteration and after the last one.
    pub phi_trace: Vec<usize>,
    /// `|internal nodes| * 2 * |nodes|`.
    pub bound: usize,
    pub moves: Vec<MoveRecord>,
}

/// All size-3 sum-sets with a non-leaf creation node, in node order.
pub fn bad_sum_sets(tree: &DecompTree) -> Result<Vec<BadSumSet>, DecompError> {
    let f = tree.post_order_numbering();
    let mut out = Vec::new();
    for id in tree.internal_nodes() {
        let node = tree.node(id);
        let Some(SumKind::Three { z }) = node.sum_kind() else {
            continue;
        };
        let children = node.children().expect("internal");
        let mut creation = [0; 2];
        for (slot, &child) in creation.iter_mut().zip(&children) {
            let holders: Vec<NodeId> = z
                .iter()
                .map(|&e| {
                    tree.leaf_containing(child, e).ok_or_else(|| {
                        DecompError::Inconsistent(format!("no leaf below {} holds {e}", tree.label(child)))
                    })
                })
                .collect::<Result<_, _>>()?;
            *slot = tree.lca(tree.lca(holders[0], holders[1]), holders[2]);
        }
        if creation.iter().any(|&c| !tree.node(c).is_leaf()) {
            out.push(BadSumSet {
                node: id,
                z: *z,
                creation,
                g: f[creation[0]] + f[creation[1]],
            });
        }
    }
    Ok(out)
}

pub fn potential(bad: &[BadSumSet]) -> usize {
    bad.iter().map(|b| b.g).sum()
}

/// Repeatedly moves one element of a bad sum-set into the child of its
/// creation node that holds the other two, until no bad sum-set remains.
///
/// The bad set with the smallest `g` is handled first. The potential must
/// drop strictly on every iteration and the iteration count must stay within
/// the bound; either failure is reported as an error.
pub fn make_good(tree: &DecompTree) -> Result<(DecompTree, MakeGoodReport), DecompError> {
    let mut t = tree.clone();
    let mut report = MakeGoodReport {
        bound: t.internal_nodes().len() * 2 * t.len(),
        ..Default::default()
    };
    loop {
        let bad = bad_sum_sets(&t)?;
        let phi = potential(&bad);
        if let Some(&before) = report.phi_trace.last() {
            if phi >= before {
                return Err(DecompError::PotentialNotDecreasing { before, after: phi });
            }
        }
        report.phi_trace.push(phi);
        let Some(pick) = bad.iter().min_by_key(|b| b.g) else {
            break;
        };
        if report.iterations >= report.bound {
            return Err(DecompError::IterationBound {
                iterations: report.iterations,
                bound: report.bound,
            });
        }
        let m = *pick
            .creation
            .iter()
            .find(|&&c| !t.node(c).is_leaf())
            .expect("bad sets have a non-leaf creation node");
        let [c0, c1] = t.node(m).children().expect("internal");
        let in_c0: Vec<ElementId> = pick.z.iter().copied().filter(|&e| t.node(c0).matroid.contains(e)).collect();
        // orient so that the lone element sits on the first side
        let (m1, m2) = if in_c0.len() == 1 { (c0, c1) } else { (c1, c0) };
        let z1 = *pick
            .z
            .iter()
            .find(|&&e| t.node(m1).matroid.contains(e))
            .ok_or_else(|| DecompError::Inconsistent(format!("creation node {} does not split {:?}", t.label(m), pick.z)))?;
        let rest: Vec<ElementId> = pick.z.iter().copied().filter(|&e| e != z1).collect();
        let a = three_circuit_witness(&t.node(m1).matroid, &t.node(m2).matroid, z1, rest[0], rest[1])?;
        let from = t.leaf_containing(m1, z1).expect("z1 is below its side");
        let to = t
            .leaf_containing(m2, a)
            .ok_or_else(|| DecompError::Inconsistent(format!("witness {a} is in no leaf below {}", t.label(m2))))?;
        log::debug!("make_good: moving {z1} from {} to {} (witness {a})", t.label(from), t.label(to));
        t.move_element(z1, from, to, a)?;
        report.moves.push(MoveRecord {
            element: z1,
            from: t.label(from),
            to: t.label(to),
            witness: a,
            stage: Stage::MakeGood,
        });
        report.iterations += 1;
    }
    Ok((t, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub shared: ElementSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictGraph {
    pub vertices: Vec<NodeId>,
    pub edges: Vec<ConflictEdge>,
    pub is_forest: bool,
}

impl ConflictGraph {
    pub fn neighbours(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.a == v {
                Some(e.b)
            } else if e.b == v {
                Some(e.a)
            } else {
                None
            }
        })
    }
}

/// Leaves joined whenever their ground sets meet.
pub fn conflict_graph(tree: &DecompTree) -> ConflictGraph {
    let vertices = tree.leaves();
    let mut edges = Vec::new();
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            let ga = tree.node(a).matroid.ground();
            let shared: ElementSet = tree
                .node(b)
                .matroid
                .elements()
                .iter()
                .copied()
                .filter(|e| ga.contains(e))
                .collect();
            if !shared.is_empty() {
                edges.push(ConflictEdge { a, b, shared });
            }
        }
    }
    // an edge inside an existing component closes a cycle
    let mut comp: BTreeMap<NodeId, NodeId> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(comp: &mut BTreeMap<NodeId, NodeId>, v: NodeId) -> NodeId {
        let p = comp[&v];
        if p == v {
            return v;
        }
        let r = find(comp, p);
        comp.insert(v, r);
        r
    }
    let mut is_forest = true;
    for e in &edges {
        let (ra, rb) = (find(&mut comp, e.a), find(&mut comp, e.b));
        if ra == rb {
            is_forest = false;
        } else {
            comp.insert(ra, rb);
        }
    }
    ConflictGraph {
        vertices,
        edges,
        is_forest,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootedForest {
    pub roots: Vec<NodeId>,
    pub parent: BTreeMap<NodeId, Option<NodeId>>,
    /// `A_M = E(M) ∩ E(p(M))`, empty for roots.
    pub contraction: BTreeMap<NodeId, ElementSet>,
}

impl RootedForest {
    pub fn parent_of(&self, leaf: NodeId) -> Option<NodeId> {
        self.parent.get(&leaf).copied().flatten()
    }

    pub fn contraction_of(&self, leaf: NodeId) -> ElementSet {
        self.contraction.get(&leaf).cloned().unwrap_or_default()
    }
}

/// Roots every tree of the forest at the leaf with the smallest element id
/// (ties by node id) and records each leaf's contraction set.
pub fn root_and_assign(graph: &ConflictGraph, tree: &DecompTree) -> Result<RootedForest, DecompError> {
    if !graph.is_forest {
        return Err(DecompError::NotForest);
    }
    let key = |v: NodeId| {
        let smallest = tree.node(v).matroid.elements().iter().min().map_or(u32::MAX, |e| e.0);
        (smallest, v)
    };
    let mut order = graph.vertices.clone();
    order.sort_by_key(|&v| key(v));
    let mut parent: BTreeMap<NodeId, Option<NodeId>> = BTreeMap::new();
    let mut roots = Vec::new();
    for &start in &order {
        if parent.contains_key(&start) {
            continue;
        }
        roots.push(start);
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in graph.neighbours(v) {
                if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(w) {
                    slot.insert(Some(v));
                    queue.push_back(w);
                }
            }
        }
    }
    let contraction = parent
        .iter()
        .map(|(&v, p)| {
            let a = match p {
                None => ElementSet::new(),
                Some(p) => {
                    let gp = tree.node(*p).matroid.ground();
                    tree.node(v)
                        .matroid
                        .elements()
                        .iter()
                        .copied()
                        .filter(|e| gp.contains(e))
                        .collect()
                }
            };
            (v, a)
        })
        .collect();
    roots.sort_unstable();
    Ok(RootedForest {
        roots,
        parent,
        contraction,
    })
}

/// Real elements parallel to a contracted element of their leaf, as
/// `(leaf, element, partner in A_M)`.
pub fn bad_elements(tree: &DecompTree, forest: &RootedForest) -> Result<Vec<(NodeId, ElementId, ElementId)>, DecompError> {
    let real = tree.real_elements();
    let mut out = Vec::new();
    for leaf in tree.leaves() {
        let m = &tree.node(leaf).matroid;
        let a_set = forest.contraction_of(leaf);
        for &z in m.elements().iter().filter(|e| real.contains(e)) {
            for &a in &a_set {
                if m.are_parallel(z, a)? {
                    out.push((leaf, z, a));
                    break;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Moves every real element that is parallel to a contracted element of its
/// leaf into the parent leaf, repeating until none is left.
pub fn eliminate_bad_elements(
    tree: &DecompTree,
    forest: &RootedForest,
) -> Result<(DecompTree, RootedForest, Vec<MoveRecord>), DecompError> {
    let mut t = tree.clone();
    let mut moves = Vec::new();
    // each move lifts one real element one level; this many is always enough
    let cap = t.real_elements().len() * t.leaves().len() + 1;
    while let Some(&(leaf, z, a)) = bad_elements(&t, forest)?.first() {
        let parent = forest
            .parent_of(leaf)
            .ok_or_else(|| DecompError::MoveAtRoot(t.label(leaf)))?;
        if moves.len() >= cap {
            return Err(DecompError::Inconsistent("bad-element elimination does not terminate".into()));
        }
        log::debug!("eliminate: moving {z} from {} to {} (parallel to {a})", t.label(leaf), t.label(parent));
        t.move_element(z, leaf, parent, a)?;
        moves.push(MoveRecord {
            element: z,
            from: t.label(leaf),
            to: t.label(parent),
            witness: a,
            stage: Stage::EliminateBadElements,
        });
    }
    Ok((t, forest.clone(), moves))
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub tree: DecompTree,
    pub forest: RootedForest,
    pub graph: ConflictGraph,
    pub provenance: Vec<MoveRecord>,
    pub make_good: MakeGoodReport,
    pub stripped_loops: ElementSet,
}

/// Strips root loops, makes the decomposition good, roots its conflict
/// forest and eliminates bad elements.
pub fn normalize(tree: &DecompTree) -> Result<Normalized, DecompError> {
    let mut t = tree.clone();
    let loops = t.root_matroid().loops();
    for &e in &loops {
        log::warn!("removing loop {e} from the decomposition");
        t.delete_real(e)?;
    }
    let (good, report) = make_good(&t)?;
    let graph = conflict_graph(&good);
    if !graph.is_forest {
        return Err(DecompError::NotForest);
    }
    let forest = root_and_assign(&graph, &good)?;
    let (done, forest, moves) = eliminate_bad_elements(&good, &forest)?;
    let mut provenance = report.moves.clone();
    provenance.extend(moves);
    Ok(Normalized {
        tree: done,
        forest,
        graph,
        provenance,
        make_good: report,
        stripped_loops: loops,
    })
}
