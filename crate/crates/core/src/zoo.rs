//! Named matroids: small graphs, their bond matroids, R10, F7 and F7*.
//!
//! Labels are `0..n` in canonical column order. For graphs that is edge-list
//! order; R10 uses the weight-3 vectors of GF(2)^5 in lexicographic order and
//! F7 the nonzero vectors of GF(2)^3 in lexicographic order (first coordinate
//! most significant).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitVec;
use crate::graph::GraphModel;
use crate::matroid::{BinaryMatroid, ElementId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    Graphic,
    Cographic,
    R10,
    F7,
    F7dual,
    Custom,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Graphic => "graphic",
            ClassTag::Cographic => "cographic",
            ClassTag::R10 => "r10",
            ClassTag::F7 => "f7",
            ClassTag::F7dual => "f7dual",
            ClassTag::Custom => "custom",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZooError {
    #[error("unknown zoo matroid {0:?}")]
    UnknownName(String),
    #[error("malformed edge list {list:?}: {reason}")]
    MalformedEdgeList { list: String, reason: String },
}

#[derive(Clone, Debug)]
pub struct ZooMatroid {
    pub matroid: BinaryMatroid,
    pub class: ClassTag,
    /// Present for graphic entries.
    pub graph: Option<GraphModel>,
}

pub const NAMES: &[&str] = &["triangle", "c4", "k4", "k5", "k23", "k33", "r10", "f7", "f7dual"];

fn named_graph(name: &str) -> Option<Vec<(u32, u32)>> {
    let edges = match name {
        "triangle" | "k3" => vec![(0, 1), (0, 2), (1, 2)],
        "c4" => vec![(0, 1), (1, 2), (2, 3), (0, 3)],
        "k4" => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        "k5" => {
            let mut e = Vec::new();
            for u in 0..5 {
                for v in u + 1..5 {
                    e.push((u, v));
                }
            }
            e
        }
        "k23" => vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
        "k33" => {
            let mut e = Vec::new();
            for u in 0..3 {
                for v in 3..6 {
                    e.push((u, v));
                }
            }
            e
        }
        _ => return None,
    };
    Some(edges)
}

/// Parses `"0-1,1-2,..."`; the result must be simple, connected and nonempty.
pub fn parse_edge_list(list: &str) -> Result<Vec<(u32, u32)>, ZooError> {
    let bad = |reason: String| ZooError::MalformedEdgeList {
        list: list.to_string(),
        reason,
    };
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (u, v) = item
            .split_once('-')
            .ok_or_else(|| bad(format!("edge {item:?} is not of the form u-v")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| bad(format!("bad vertex {s:?}")))
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(bad(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(bad(format!("repeated edge {u}-{v}")));
        }
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(bad("no edges".into()));
    }
    if !GraphModel::from_edge_list(&edges).is_connected() {
        return Err(bad("graph is not connected".into()));
    }
    Ok(edges)
}

fn graph_edges(spec: &str) -> Result<Vec<(u32, u32)>, ZooError> {
    match named_graph(spec) {
        Some(edges) => Ok(edges),
        None => parse_edge_list(spec),
    }
}

fn labels(n: usize) -> Vec<ElementId> {
    (0..n as u32).map(ElementId).collect()
}

/// Columns are the `dim`-bit vectors accepted by `keep`, in increasing order
/// with coordinate 0 the most significant bit.
fn vector_matroid(dim: usize, keep: impl Fn(u32) -> bool) -> BinaryMatroid {
    let columns: Vec<BitVec> = (1u32..1 << dim)
        .filter(|&v| keep(v))
        .map(|v| BitVec::from_indices(dim, (0..dim).filter(|&i| (v >> (dim - 1 - i)) & 1 == 1)))
        .collect();
    BinaryMatroid::from_columns(labels(columns.len()), dim, &columns).expect("distinct labels")
}

pub fn r10() -> BinaryMatroid {
    vector_matroid(5, |v| v.count_ones() == 3)
}

pub fn f7() -> BinaryMatroid {
    vector_matroid(3, |_| true)
}

pub fn zoo(name: &str) -> Result<ZooMatroid, ZooError> {
    let name = name.trim();
    let graphic = |edges: Vec<(u32, u32)>| {
        let graph = GraphModel::from_edge_list(&edges);
        ZooMatroid {
            matroid: graph.cycle_matroid(),
            class: ClassTag::Graphic,
            graph: Some(graph),
        }
    };
    if let Some(rest) = name.strip_prefix("graphic:") {
        return Ok(graphic(graph_edges(rest)?));
    }
    if let Some(rest) = name.strip_prefix("cographic:") {
        let graph = GraphModel::from_edge_list(&graph_edges(rest)?);
        return Ok(ZooMatroid {
            matroid: graph.cycle_matroid().dual(),
            class: ClassTag::Cographic,
            graph: None,
        });
    }
    let plain = |matroid, class| ZooMatroid {
        matroid,
        class,
        graph: None,
    };
    match name {
        "r10" => Ok(plain(r10(), ClassTag::R10)),
        "f7" => Ok(plain(f7(), ClassTag::F7)),
        "f7dual" => Ok(plain(f7().dual(), ClassTag::F7dual)),
        _ => named_graph(name)
            .map(graphic)
            .ok_or_else(|| ZooError::UnknownName(name.to_string())),
    }
}
