//! Seeded repeated trials of a plan and the resulting report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::algorithms::Strategy;
use super::composite::{run_composite, CompositePlan, RunOutcome};
use super::SecretaryError;
use crate::matroid::weight_of;
use crate::weights::Weights;
use crate::zoo::ClassTag;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasicReport {
    pub name: String,
    pub class: ClassTag,
    pub strategy: Strategy,
    pub elements: usize,
    pub rank: usize,
    pub contracted: usize,
    pub mean_alg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: usize,
    pub opt: f64,
    pub mean_alg: f64,
    /// `mean_alg / opt`; absent when `opt` is 0.
    pub mean_ratio: Option<f64>,
    /// Half-width of the 95% normal interval for `mean_ratio`.
    pub ci_halfwidth: Option<f64>,
    pub seed: u64,
    /// Fraction of trials whose value equals `opt`.
    pub opt_hit_rate: f64,
    pub per_basic: Vec<BasicReport>,
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// Runs `trials` independent trials. Trial `t` uses ChaCha8 seeded with
/// `seed`, stream `2t` for the arrival order and `2t + 1` for the
/// algorithms, so the report depends only on the inputs.
pub fn simulate(
    plan: &CompositePlan,
    weights: &Weights,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, SecretaryError> {
    if trials == 0 {
        return Err(SecretaryError::ZeroTrials);
    }
    let opt = weight_of(&plan.root.greedy_opt(weights), weights);
    let outcomes: Vec<RunOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut order = ChaCha8Rng::seed_from_u64(seed);
            order.set_stream(2 * t);
            let mut alg = ChaCha8Rng::seed_from_u64(seed);
            alg.set_stream(2 * t + 1);
            run_composite(plan, weights, &mut order, &mut alg)
        })
        .collect::<Result<_, _>>()?;
    let n = trials as f64;
    let values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let mean_alg = values.iter().sum::<f64>() / n;
    let var = if trials > 1 {
        values.iter().map(|v| (v - mean_alg).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let (mean_ratio, ci_halfwidth) = if opt > 0.0 {
        (Some(mean_alg / opt), Some(1.96 * var.sqrt() / n.sqrt() / opt))
    } else {
        log::warn!("optimum is 0; the ratio is undefined");
        (None, None)
    };
    let hits = values.iter().filter(|&&v| v == opt).count();
    let per_basic = plan
        .locals
        .iter()
        .enumerate()
        .map(|(i, lp)| BasicReport {
            name: lp.name.clone(),
            class: lp.class,
            strategy: lp.strategy,
            elements: lp.matroid().len(),
            rank: lp.matroid().rank(),
            contracted: lp.contracted.len(),
            mean_alg: outcomes.iter().map(|o| o.per_local[i]).sum::<f64>() / n,
        })
        .collect();
    Ok(SimulationReport {
        trials,
        opt,
        mean_alg,
        mean_ratio,
        ci_halfwidth,
        seed,
        opt_hit_rate: hits as f64 / n,
        per_basic,
        values,
    })
}
