//! Random-order secretary algorithms: base algorithms with an independence
//! guard, the composite algorithm over a normalized decomposition, and a
//! seeded simulator.

mod algorithms;
mod composite;
mod simulate;

pub use algorithms::{
    instantiate, ClassicalSecretary, Decision, GraphicSecretary, IndependenceGuard, LocalMatroid, OnlineAlgorithm,
    ParallelClassWrapper, SampleThreshold, Strategy,
};
pub use composite::{build_composite_plan, run_composite, CompositePlan, LocalPlan, RunOutcome};
pub use simulate::{simulate, BasicReport, SimulationReport};

use thiserror::Error;

use crate::matroid::{ElementId, ElementSet, MatroidError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SecretaryError {
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("decomposition is not normalized: {0}")]
    NotNormalized(String),
    #[error("element {0} belongs to no local matroid")]
    DispatchMiss(ElementId),
    #[error("accepted set {0:?} is dependent in the composed matroid")]
    IndependenceViolation(ElementSet),
    #[error("strategy {strategy} needs {needs}")]
    Unsupported { strategy: Strategy, needs: &'static str },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}
