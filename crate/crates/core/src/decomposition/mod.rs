//! Decomposition trees and their normalization into a good decomposition
//! with a rooted conflict forest.

mod normalize;
mod tree;

pub use normalize::{
    bad_elements, bad_sum_sets, conflict_graph, eliminate_bad_elements, make_good, normalize, potential,
    root_and_assign, BadSumSet, ConflictEdge, ConflictGraph, MakeGoodReport, MoveRecord, Normalized,
    RootedForest, Stage,
};
pub use tree::{
    build_tree, check_claimed_root, validate_tree, DecompSpec, DecompTree, Finding, Leaf, LeafInput, Node, NodeId,
    NodeKind, Shape, ValidationReport, VALIDATION_EXHAUSTIVE_LIMIT,
};

use thiserror::Error;

use crate::matroid::{ElementId, MatroidError};
use crate::sums::{SumError, SumTag};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error("{node}: {source}")]
    Sum { node: String, source: SumError },
    #[error("{node} is declared {declared} but its children form a {actual} sum")]
    TagMismatch {
        node: String,
        declared: SumTag,
        actual: SumTag,
    },
    #[error("tree refers to unknown leaf {0:?}")]
    UnknownLeaf(String),
    #[error("leaf {0:?} is defined twice or used twice")]
    DuplicateLeaf(String),
    #[error("leaf {0:?} is not used by the tree")]
    UnusedLeaf(String),
    #[error("element {element} appears in {count} leaves; at most 2 are allowed")]
    TooManyLeaves { element: ElementId, count: usize },
    #[error("conflict graph is not a forest")]
    NotForest,
    #[error("bad sum-sets remain after {iterations} iterations (bound {bound})")]
    IterationBound { iterations: usize, bound: usize },
    #[error("potential did not decrease: {before} -> {after}")]
    PotentialNotDecreasing { before: usize, after: usize },
    #[error("a move out of root leaf {0} was requested")]
    MoveAtRoot(String),
    #[error("decomposition is not normalized: {0}")]
    NotNormalized(String),
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

impl From<SumError> for DecompError {
    fn from(source: SumError) -> Self {
        DecompError::Sum {
            node: "move".into(),
            source,
        }
    }
}
