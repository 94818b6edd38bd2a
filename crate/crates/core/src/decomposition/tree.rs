//! Sum decomposition trees stored as an arena. Node ids follow post-order:
//! children are always created before their parent.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::DecompError;
use crate::graph::GraphModel;
use crate::matroid::{matroids_equal, BinaryMatroid, ElementId, ElementSet, EqualityMode};
use crate::sums::{classify_sum, delta_sum, k_sum, shared_elements, Mode, Side, SumKind, SumTag, Violation};
use crate::zoo::ClassTag;

pub type NodeId = usize;

/// Largest node ground set compared subset by subset during validation.
pub const VALIDATION_EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct Leaf {
    pub name: String,
    pub class: ClassTag,
    pub graph: Option<GraphModel>,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    Leaf(Leaf),
    Sum { kind: SumKind, children: [NodeId; 2] },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub matroid: BinaryMatroid,
    pub parent: Option<NodeId>,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf(_))
    }

    pub fn leaf(&self) -> Option<&Leaf> {
        match &self.kind {
            NodeKind::Leaf(l) => Some(l),
            NodeKind::Sum { .. } => None,
        }
    }

    pub fn children(&self) -> Option<[NodeId; 2]> {
        match &self.kind {
            NodeKind::Leaf(_) => None,
            NodeKind::Sum { children, .. } => Some(*children),
        }
    }

    pub fn sum_kind(&self) -> Option<&SumKind> {
        match &self.kind {
            NodeKind::Leaf(_) => None,
            NodeKind::Sum { kind, .. } => Some(kind),
        }
    }
}

/// Input for [`build_tree`]: a basic matroid with its metadata.
#[derive(Clone, Debug)]
pub struct LeafInput {
    pub name: String,
    pub class: ClassTag,
    pub matroid: BinaryMatroid,
    pub graph: Option<GraphModel>,
}

/// Shape of a decomposition; leaves refer to [`LeafInput`]s by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf(String),
    Sum(SumTag, Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn sum(tag: SumTag, left: Shape, right: Shape) -> Self {
        Shape::Sum(tag, Box::new(left), Box::new(right))
    }

    pub fn leaf(name: &str) -> Self {
        Shape::Leaf(name.to_string())
    }
}

/// A decomposition before materialization: its leaves and its shape.
#[derive(Clone, Debug)]
pub struct DecompSpec {
    pub leaves: Vec<LeafInput>,
    pub shape: Shape,
}

impl DecompSpec {
    pub fn build(&self, mode: Mode) -> Result<DecompTree, DecompError> {
        build_tree(self.leaves.clone(), &self.shape, mode)
    }
}

#[derive(Clone, Debug)]
pub struct DecompTree {
    nodes: Vec<Node>,
    root: NodeId,
}

/// Builds the tree and materializes every internal matroid bottom-up with
/// [`k_sum`] under `mode`.
pub fn build_tree(leaves: Vec<LeafInput>, shape: &Shape, mode: Mode) -> Result<DecompTree, DecompError> {
    let mut by_name: BTreeMap<String, LeafInput> = BTreeMap::new();
    for leaf in leaves {
        if by_name.contains_key(&leaf.name) {
            return Err(DecompError::DuplicateLeaf(leaf.name));
        }
        by_name.insert(leaf.name.clone(), leaf);
    }
    let mut nodes = Vec::new();
    let root = build_node(shape, &mut by_name, &mut nodes, mode)?;
    if let Some(name) = by_name.keys().next() {
        return Err(DecompError::UnusedLeaf(name.clone()));
    }
    let tree = DecompTree { nodes, root };
    for (element, count) in tree.leaf_multiplicity() {
        if count > 2 {
            return Err(DecompError::TooManyLeaves { element, count });
        }
    }
    Ok(tree)
}

fn build_node(
    shape: &Shape,
    leaves: &mut BTreeMap<String, LeafInput>,
    nodes: &mut Vec<Node>,
    mode: Mode,
) -> Result<NodeId, DecompError> {
    match shape {
        Shape::Leaf(name) => {
            let input = leaves.remove(name).ok_or_else(|| DecompError::UnknownLeaf(name.clone()))?;
            nodes.push(Node {
                matroid: input.matroid,
                parent: None,
                kind: NodeKind::Leaf(Leaf {
                    name: input.name,
                    class: input.class,
                    graph: input.graph,
                }),
            });
            Ok(nodes.len() - 1)
        }
        Shape::Sum(tag, left, right) => {
            let l = build_node(left, leaves, nodes, mode)?;
            let r = build_node(right, leaves, nodes, mode)?;
            let (matroid, kind) = k_sum(&nodes[l].matroid, &nodes[r].matroid, mode).map_err(|source| {
                DecompError::Sum {
                    node: describe(nodes, l, r, *tag),
                    source,
                }
            })?;
            if kind.tag() != *tag {
                return Err(DecompError::TagMismatch {
                    node: describe(nodes, l, r, *tag),
                    declared: *tag,
                    actual: kind.tag(),
                });
            }
            let id = nodes.len();
            nodes.push(Node {
                matroid,
                parent: None,
                kind: NodeKind::Sum { kind, children: [l, r] },
            });
            nodes[l].parent = Some(id);
            nodes[r].parent = Some(id);
            Ok(id)
        }
    }
}

fn describe(nodes: &[Node], l: NodeId, r: NodeId, tag: SumTag) -> String {
    let name = |id: NodeId| match nodes[id].leaf() {
        Some(leaf) => leaf.name.clone(),
        None => format!("#{id}"),
    };
    format!("{tag}({}, {})", name(l), name(r))
}

impl DecompTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_matroid(&self) -> &BinaryMatroid {
        &self.nodes[self.root].matroid
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Display name: the leaf name, or `#id` for internal nodes.
    pub fn label(&self, id: NodeId) -> String {
        match self.nodes[id].leaf() {
            Some(leaf) => leaf.name.clone(),
            None => format!("#{id}"),
        }
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf()).collect()
    }

    pub fn internal_nodes(&self) -> Vec<NodeId> {
        (0..self.nodes.len()).filter(|&i| !self.nodes[i].is_leaf()).collect()
    }

    pub fn leaf_by_name(&self, name: &str) -> Option<NodeId> {
        self.leaves()
            .into_iter()
            .find(|&i| self.nodes[i].leaf().is_some_and(|l| l.name == name))
    }

    /// Real elements: the ground set of the root.
    pub fn real_elements(&self) -> ElementSet {
        self.root_matroid().ground()
    }

    /// Strict ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p].parent;
        }
        out
    }

    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        let mut up_a: BTreeSet<NodeId> = self.ancestors(a).into_iter().collect();
        up_a.insert(a);
        let mut cur = b;
        loop {
            if up_a.contains(&cur) {
                return cur;
            }
            cur = self.nodes[cur].parent.expect("nodes share the root");
        }
    }

    pub fn subtree_leaves(&self, id: NodeId) -> Vec<NodeId> {
        match self.nodes[id].children() {
            None => vec![id],
            Some([l, r]) => {
                let mut v = self.subtree_leaves(l);
                v.extend(self.subtree_leaves(r));
                v
            }
        }
    }

    /// The leaf below (or equal to) `under` whose ground set contains `e`.
    pub fn leaf_containing(&self, under: NodeId, e: ElementId) -> Option<NodeId> {
        self.subtree_leaves(under)
            .into_iter()
            .find(|&l| self.nodes[l].matroid.contains(e))
    }

    /// Number of leaves holding each element.
    pub fn leaf_multiplicity(&self) -> BTreeMap<ElementId, usize> {
        let mut count = BTreeMap::new();
        for l in self.leaves() {
            for &e in self.nodes[l].matroid.elements() {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        count
    }

    /// Post-order number of every node, starting at 1; parents outnumber
    /// their children.
    pub fn post_order_numbering(&self) -> Vec<usize> {
        let mut f = vec![0; self.nodes.len()];
        let mut next = 1;
        self.number(self.root, &mut f, &mut next);
        f
    }

    fn number(&self, id: NodeId, f: &mut [usize], next: &mut usize) {
        if let Some([l, r]) = self.nodes[id].children() {
            self.number(l, f, next);
            self.number(r, f, next);
        }
        f[id] = *next;
        *next += 1;
    }

    /// The current leaves and shape, e.g. for writing a normalized tree back out.
    pub fn to_spec(&self) -> DecompSpec {
        let leaves = self
            .leaves()
            .into_iter()
            .map(|id| {
                let leaf = self.nodes[id].leaf().expect("leaf");
                LeafInput {
                    name: leaf.name.clone(),
                    class: leaf.class,
                    matroid: self.nodes[id].matroid.clone(),
                    graph: leaf.graph.clone(),
                }
            })
            .collect();
        DecompSpec {
            leaves,
            shape: self.shape_of(self.root),
        }
    }

    fn shape_of(&self, id: NodeId) -> Shape {
        match &self.nodes[id].kind {
            NodeKind::Leaf(leaf) => Shape::Leaf(leaf.name.clone()),
            NodeKind::Sum { kind, children: [l, r] } => Shape::sum(kind.tag(), self.shape_of(*l), self.shape_of(*r)),
        }
    }

    /// Replaces the matroid stored at a node without any checking. Meant for
    /// what-if experiments and negative controls.
    pub fn replace_matroid(&mut self, id: NodeId, matroid: BinaryMatroid) {
        self.nodes[id].matroid = matroid;
    }

    /// Moves `z` from leaf `from` to leaf `to`, where it is added parallel to
    /// `a`. Nodes strictly below the common ancestor lose `z` on the `from`
    /// side and gain `z` parallel to `a` on the `to` side.
    pub(crate) fn move_element(
        &mut self,
        z: ElementId,
        from: NodeId,
        to: NodeId,
        a: ElementId,
    ) -> Result<(), DecompError> {
        let top = self.lca(from, to);
        let single: ElementSet = [z].into();
        let mut cur = from;
        while cur != top {
            let node = &mut self.nodes[cur];
            node.matroid = node.matroid.delete(&single)?;
            if let NodeKind::Leaf(Leaf { graph: Some(g), .. }) = &mut node.kind {
                g.delete(z);
            }
            cur = node.parent.expect("below the common ancestor");
        }
        let mut cur = to;
        while cur != top {
            let node = &mut self.nodes[cur];
            node.matroid = node.matroid.add_parallel(z, a)?;
            if let NodeKind::Leaf(leaf) = &mut node.kind {
                if let Some(g) = &mut leaf.graph {
                    if !g.add_parallel(z, a) {
                        log::warn!("leaf {} lost its graph model while receiving {z}", leaf.name);
                        leaf.graph = None;
                    }
                }
            }
            cur = node.parent.expect("below the common ancestor");
        }
        Ok(())
    }

    /// Deletes a real element from its leaf and every ancestor.
    pub(crate) fn delete_real(&mut self, e: ElementId) -> Result<(), DecompError> {
        let leaf = self
            .leaf_containing(self.root, e)
            .ok_or(DecompError::Matroid(crate::matroid::MatroidError::UnknownElement(e)))?;
        let single: ElementSet = [e].into();
        let mut cur = Some(leaf);
        while let Some(id) = cur {
            let node = &mut self.nodes[id];
            node.matroid = node.matroid.delete(&single)?;
            if let NodeKind::Leaf(Leaf { graph: Some(g), .. }) = &mut node.kind {
                g.delete(e);
            }
            cur = node.parent;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum Finding {
    /// Children of a sum node share a number of elements no sum allows.
    OverlapSize { node: String, size: usize },
    /// The recorded shared set differs from the children's common elements.
    SharedSetMismatch { node: String, recorded: Vec<ElementId>, actual: Vec<ElementId> },
    NotCircuit { node: String, side: Side },
    /// An element sits in the wrong number of leaves (real: 1, other: 2).
    Multiplicity { element: ElementId, leaves: usize, expected: usize },
    /// The stored matroid differs from the sum of the children.
    MatroidMismatch { node: String },
    /// A strict-mode non-triviality condition fails.
    StrictViolation { node: String, violation: Violation },
    /// A root matroid supplied with the decomposition differs from the computed one.
    RootMismatch { detail: String },
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finding::OverlapSize { node, size } => write!(f, "{node}: children share {size} elements"),
            Finding::SharedSetMismatch { node, recorded, actual } => {
                write!(f, "{node}: recorded shared set {recorded:?}, children share {actual:?}")
            }
            Finding::NotCircuit { node, side } => {
                write!(f, "{node}: shared set is not a circuit of the {side:?} child")
            }
            Finding::Multiplicity { element, leaves, expected } => {
                write!(f, "element {element} is in {leaves} leaves, expected {expected}")
            }
            Finding::MatroidMismatch { node } => write!(f, "{node}: stored matroid is not the sum of its children"),
            Finding::StrictViolation { node, violation } => write!(f, "{node}: {violation}"),
            Finding::RootMismatch { detail } => write!(f, "claimed root: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    /// Internal nodes whose matroid was re-derived and compared.
    pub rederived: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Compares a claimed root matroid with the tree's root, subset by subset
/// when `exhaustive` and the ground set is small enough, by row space
/// otherwise.
pub fn check_claimed_root(tree: &DecompTree, claimed: &BinaryMatroid, exhaustive: bool) -> Option<Finding> {
    let root = tree.root_matroid();
    if root.ground() != claimed.ground() {
        let only_claimed: Vec<ElementId> = claimed.ground().difference(&root.ground()).copied().collect();
        let only_root: Vec<ElementId> = root.ground().difference(&claimed.ground()).copied().collect();
        return Some(Finding::RootMismatch {
            detail: format!("ground sets differ (only claimed: {only_claimed:?}, only computed: {only_root:?})"),
        });
    }
    let mode = if exhaustive && root.len() <= VALIDATION_EXHAUSTIVE_LIMIT {
        EqualityMode::Exhaustive
    } else {
        EqualityMode::Algebraic
    };
    match matroids_equal(root, claimed, mode) {
        Ok(true) => None,
        Ok(false) => Some(Finding::RootMismatch {
            detail: format!("not equal to the computed root ({mode:?} comparison)"),
        }),
        Err(e) => Some(Finding::RootMismatch { detail: e.to_string() }),
    }
}

/// Structural checks always; with `exhaustive`, every internal matroid is
/// recomputed from its children and compared (subset by subset up to
/// [`VALIDATION_EXHAUSTIVE_LIMIT`] elements, by row space above that).
pub fn validate_tree(tree: &DecompTree, exhaustive: bool, mode: Mode) -> ValidationReport {
    let mut report = ValidationReport::default();
    for id in tree.internal_nodes() {
        let node = tree.node(id);
        let [l, r] = node.children().expect("internal");
        let (ml, mr) = (&tree.node(l).matroid, &tree.node(r).matroid);
        let label = tree.label(id);
        let actual = shared_elements(ml, mr);
        let recorded = node.sum_kind().expect("internal").shared();
        if actual != recorded {
            report.findings.push(Finding::SharedSetMismatch {
                node: label.clone(),
                recorded: recorded.iter().copied().collect(),
                actual: actual.iter().copied().collect(),
            });
        }
        match classify_sum(ml, mr, mode) {
            Err(_) => report.findings.push(Finding::OverlapSize {
                node: label.clone(),
                size: actual.len(),
            }),
            Ok(diag) => {
                for v in diag.violations {
                    match v {
                        Violation::NotCircuit { side } => report.findings.push(Finding::NotCircuit {
                            node: label.clone(),
                            side,
                        }),
                        other if mode == Mode::Strict => report.findings.push(Finding::StrictViolation {
                            node: label.clone(),
                            violation: other,
                        }),
                        _ => {}
                    }
                }
            }
        }
        if exhaustive {
            report.rederived += 1;
            let same = delta_sum(ml, mr).ok().and_then(|derived| {
                let m = &node.matroid;
                let mode = if m.len() <= VALIDATION_EXHAUSTIVE_LIMIT {
                    EqualityMode::Exhaustive
                } else {
                    EqualityMode::Algebraic
                };
                matroids_equal(&derived, m, mode).ok()
            });
            if same != Some(true) {
                report.findings.push(Finding::MatroidMismatch { node: label });
            }
        }
    }
    let real = tree.real_elements();
    for (element, leaves) in tree.leaf_multiplicity() {
        let expected = if real.contains(&element) { 1 } else { 2 };
        if leaves != expected {
            report.findings.push(Finding::Multiplicity {
                element,
                leaves,
                expected,
            });
        }
    }
    for &element in &real {
        if !tree.leaves().iter().any(|&l| tree.node(l).matroid.contains(element)) {
            report.findings.push(Finding::Multiplicity {
                element,
                leaves: 0,
                expected: 1,
            });
        }
    }
    report
}
