//! JSON files for matroids and decompositions, CSV weights.
//!
//! A matroid file is `{"elements": [ids], "rows": ["0110", ...]}` where
//! character `i` of each row belongs to column `i`. Rows are written in
//! reduced row-echelon form, so a written file re-reads to the same bytes.
//!
//! A decomposition file lists leaves and a tree:
//!
//! ```json
//! {
//!   "leaves": [
//!     {"id": "T1", "matroid": "triangle", "labels": [100, 1, 2]},
//!     {"id": "T2", "matroid": {"elements": [100, 3, 4], "rows": ["101", "011"]}}
//!   ],
//!   "tree": ["TWO", "T1", "T2"]
//! }
//! ```
//!
//! A leaf's `matroid` is a zoo name or an inline matrix. `labels` renames
//! columns by position, `class` overrides the class tag and `graph` gives
//! `[element, u, v]` triples for graphic leaves. An optional `root` holds
//! the composed matroid; validation compares it with the computed one.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{DecompError, DecompSpec, LeafInput, MakeGoodReport, MoveRecord, Normalized, Shape};
use crate::gf2::BitVec;
use crate::graph::GraphModel;
use crate::matroid::{matroids_equal, BinaryMatroid, ElementId, EqualityMode, MatroidError};
use crate::sums::SumTag;
use crate::weights::{WeightError, Weights};
use crate::zoo::{zoo, ClassTag, ZooError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Decomposition(#[from] DecompError),
    #[error(transparent)]
    Weights(#[from] WeightError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidFile {
    pub elements: Vec<ElementId>,
    pub rows: Vec<String>,
}

impl MatroidFile {
    pub fn from_matroid(m: &BinaryMatroid) -> Self {
        MatroidFile {
            elements: m.elements().to_vec(),
            rows: m.rows().iter().map(BitVec::to_bit_string).collect(),
        }
    }

    pub fn to_matroid(&self) -> Result<BinaryMatroid, IoError> {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.len() != self.elements.len() {
                    return Err(IoError::Schema(format!(
                        "row {i} has {} entries for {} elements",
                        r.len(),
                        self.elements.len()
                    )));
                }
                BitVec::parse(r).ok_or_else(|| IoError::Schema(format!("row {i} is not a 0/1 string")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BinaryMatroid::from_rows(self.elements.clone(), rows)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatroidSource {
    Zoo(String),
    Inline(MatroidFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafFile {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassTag>,
    pub matroid: MatroidSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<ElementId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Vec<[u32; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeFile {
    Leaf(String),
    Sum(SumTag, Box<TreeFile>, Box<TreeFile>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestFile {
    pub roots: Vec<String>,
    pub parent: BTreeMap<String, Option<String>>,
    pub contraction: BTreeMap<String, Vec<ElementId>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub leaves: Vec<LeafFile>,
    pub tree: TreeFile,
    /// The composed matroid, when the file claims one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<MatroidFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<MoveRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forest: Option<ForestFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub make_good: Option<MakeGoodFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MakeGoodFile {
    pub iterations: usize,
    pub phi_trace: Vec<usize>,
    pub bound: usize,
}

impl From<&MakeGoodReport> for MakeGoodFile {
    fn from(r: &MakeGoodReport) -> Self {
        MakeGoodFile {
            iterations: r.iterations,
            phi_trace: r.phi_trace.clone(),
            bound: r.bound,
        }
    }
}

fn leaf_from_file(leaf: &LeafFile) -> Result<LeafInput, IoError> {
    let (mut matroid, zoo_class, mut graph) = match &leaf.matroid {
        MatroidSource::Zoo(name) => {
            let z = zoo(name)?;
            (z.matroid, z.class, z.graph)
        }
        MatroidSource::Inline(m) => (m.to_matroid()?, ClassTag::Custom, None),
    };
    if let Some(labels) = &leaf.labels {
        if labels.len() != matroid.len() {
            return Err(IoError::Schema(format!(
                "leaf {}: {} labels for {} elements",
                leaf.id,
                labels.len(),
                matroid.len()
            )));
        }
        let map: BTreeMap<ElementId, ElementId> = matroid.elements().iter().copied().zip(labels.iter().copied()).collect();
        matroid = matroid.relabel(&map)?;
        graph = graph.map(|g| g.relabel(&map));
    }
    if let Some(edges) = &leaf.graph {
        let g = GraphModel::new(edges.iter().map(|&[e, u, v]| (ElementId(e), (u, v))));
        let same = g.elements() == matroid.ground()
            && matroids_equal(&g.cycle_matroid(), &matroid, EqualityMode::Algebraic).unwrap_or(false);
        if !same {
            return Err(IoError::Schema(format!(
                "leaf {}: graph does not match its matroid",
                leaf.id
            )));
        }
        graph = Some(g);
    }
    let class = leaf.class.unwrap_or(if leaf.graph.is_some() { ClassTag::Graphic } else { zoo_class });
    Ok(LeafInput {
        name: leaf.id.clone(),
        class,
        matroid,
        graph,
    })
}

fn shape_from_file(t: &TreeFile) -> Shape {
    match t {
        TreeFile::Leaf(name) => Shape::Leaf(name.clone()),
        TreeFile::Sum(tag, l, r) => Shape::sum(*tag, shape_from_file(l), shape_from_file(r)),
    }
}

fn shape_to_file(s: &Shape) -> TreeFile {
    match s {
        Shape::Leaf(name) => TreeFile::Leaf(name.clone()),
        Shape::Sum(tag, l, r) => TreeFile::Sum(*tag, Box::new(shape_to_file(l)), Box::new(shape_to_file(r))),
    }
}

impl DecompositionFile {
    pub fn to_spec(&self) -> Result<DecompSpec, IoError> {
        Ok(DecompSpec {
            leaves: self.leaves.iter().map(leaf_from_file).collect::<Result<_, _>>()?,
            shape: shape_from_file(&self.tree),
        })
    }

    /// Writes every leaf inline, with its graph when it has one.
    pub fn from_spec(spec: &DecompSpec) -> Self {
        let leaves = spec
            .leaves
            .iter()
            .map(|l| LeafFile {
                id: l.name.clone(),
                class: Some(l.class),
                matroid: MatroidSource::Inline(MatroidFile::from_matroid(&l.matroid)),
                labels: None,
                graph: l
                    .graph
                    .as_ref()
                    .map(|g| g.edges().map(|(e, (u, v))| [e.0, u, v]).collect()),
            })
            .collect();
        DecompositionFile {
            leaves,
            tree: shape_to_file(&spec.shape),
            root: None,
            provenance: None,
            forest: None,
            make_good: None,
        }
    }

    /// The normalized tree with its moves and rooted conflict forest.
    pub fn from_normalized(n: &Normalized) -> Self {
        let mut file = Self::from_spec(&n.tree.to_spec());
        let name = |id| n.tree.label(id);
        file.root = Some(MatroidFile::from_matroid(n.tree.root_matroid()));
        file.provenance = Some(n.provenance.clone());
        file.forest = Some(ForestFile {
            roots: n.forest.roots.iter().map(|&r| name(r)).collect(),
            parent: n.forest.parent.iter().map(|(&v, p)| (name(v), p.map(name))).collect(),
            contraction: n
                .forest
                .contraction
                .iter()
                .map(|(&v, a)| (name(v), a.iter().copied().collect()))
                .collect(),
        });
        file.make_good = Some((&n.make_good).into());
        file
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn matroid_from_json(text: &str) -> Result<BinaryMatroid, IoError> {
    serde_json::from_str::<MatroidFile>(text)?.to_matroid()
}

pub fn matroid_to_json(m: &BinaryMatroid) -> String {
    to_pretty(&MatroidFile::from_matroid(m))
}

pub fn decomposition_from_json(text: &str) -> Result<DecompSpec, IoError> {
    serde_json::from_str::<DecompositionFile>(text)?.to_spec()
}

pub fn decomposition_to_json(spec: &DecompSpec) -> String {
    to_pretty(&DecompositionFile::from_spec(spec))
}

pub fn normalized_to_json(n: &Normalized) -> String {
    to_pretty(&DecompositionFile::from_normalized(n))
}

pub fn json<T: Serialize>(value: &T) -> String {
    to_pretty(value)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_matroid(path: &Path) -> Result<BinaryMatroid, IoError> {
    matroid_from_json(&read_text(path)?)
}

pub fn read_decomposition_file(path: &Path) -> Result<DecompositionFile, IoError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

pub fn read_decomposition(path: &Path) -> Result<DecompSpec, IoError> {
    decomposition_from_json(&read_text(path)?)
}

pub fn read_weights(path: &Path) -> Result<Weights, IoError> {
    Ok(Weights::from_csv(read_text(path)?.as_bytes())?)
}
