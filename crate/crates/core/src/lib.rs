//! Binary matroids over GF(2), Seymour 1-, 2- and 3-sums, normalization of
//! sum decompositions, and a composite secretary algorithm that runs one base
//! algorithm per basic matroid.

pub mod decomposition;
pub mod fixtures;
pub mod gf2;
pub mod graph;
pub mod io;
pub mod iso;
pub mod secretary;
pub mod matroid;
pub mod sums;
pub mod weights;
pub mod zoo;

pub use matroid::{BinaryMatroid, ElementId, ElementSet, MatroidError};
pub use weights::Weights;
