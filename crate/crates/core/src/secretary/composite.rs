//! The composite algorithm: one base algorithm per basic matroid, each run on
//! `(M / A_M) | (E(M) ∩ E(root))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::Serialize;

use super::algorithms::{instantiate, Decision, LocalMatroid, OnlineAlgorithm, Strategy};
use super::SecretaryError;
use crate::decomposition::{bad_elements, bad_sum_sets, NodeId, Normalized};
use crate::graph::GraphModel;
use crate::matroid::{matroids_equal, BinaryMatroid, ElementId, ElementSet, EqualityMode};
use crate::weights::Weights;
use crate::zoo::ClassTag;

#[derive(Clone, Debug, Serialize)]
pub struct LocalPlan {
    pub name: String,
    #[serde(skip)]
    pub leaf: Option<NodeId>,
    pub class: ClassTag,
    pub strategy: Strategy,
    /// `A_M`, the elements contracted before restricting to real elements.
    pub contracted: ElementSet,
    #[serde(skip)]
    pub local: Arc<LocalMatroid>,
}

impl LocalPlan {
    pub fn matroid(&self) -> &BinaryMatroid {
        &self.local.matroid
    }
}

#[derive(Clone, Debug)]
pub struct CompositePlan {
    pub root: BinaryMatroid,
    pub locals: Vec<LocalPlan>,
    /// Which local plan receives each element of the root.
    pub dispatch: BTreeMap<ElementId, usize>,
}

impl CompositePlan {
    /// A plan that runs one algorithm on a whole matroid.
    pub fn single(matroid: BinaryMatroid, strategy: Strategy, graph: Option<GraphModel>) -> Self {
        let dispatch = matroid.elements().iter().map(|&e| (e, 0)).collect();
        CompositePlan {
            root: matroid.clone(),
            locals: vec![LocalPlan {
                name: "single".into(),
                leaf: None,
                class: if graph.is_some() { ClassTag::Graphic } else { ClassTag::Custom },
                strategy,
                contracted: ElementSet::new(),
                local: Arc::new(LocalMatroid::new(matroid, graph)),
            }],
            dispatch,
        }
    }
}

fn strategy_for(class: ClassTag, local: &BinaryMatroid, graph: &Option<GraphModel>, name: &str) -> Strategy {
    match class {
        ClassTag::Graphic => match graph {
            Some(g) if matroids_equal(&g.cycle_matroid(), local, EqualityMode::Algebraic).unwrap_or(false) => {
                Strategy::Graphic
            }
            _ => {
                log::warn!("leaf {name} is tagged graphic but has no usable graph; using sample-threshold");
                Strategy::SampleThreshold
            }
        },
        ClassTag::R10 | ClassTag::F7 | ClassTag::F7dual => Strategy::ParallelClass,
        ClassTag::Cographic | ClassTag::Custom => Strategy::SampleThreshold,
    }
}

/// Builds one local matroid per leaf of a normalized decomposition and the
/// element dispatch map.
pub fn build_composite_plan(n: &Normalized) -> Result<CompositePlan, SecretaryError> {
    let tree = &n.tree;
    let not_normalized = |why: String| SecretaryError::NotNormalized(why);
    if !bad_sum_sets(tree).map_err(|e| not_normalized(e.to_string()))?.is_empty() {
        return Err(not_normalized("bad sum-sets remain".into()));
    }
    if !n.graph.is_forest {
        return Err(not_normalized("conflict graph is not a forest".into()));
    }
    if let Some((leaf, z, a)) = bad_elements(tree, &n.forest)
        .map_err(|e| not_normalized(e.to_string()))?
        .first()
    {
        return Err(not_normalized(format!("{z} is parallel to {a} in {}", tree.label(*leaf))));
    }
    let real = tree.real_elements();
    let mut locals = Vec::new();
    let mut dispatch = BTreeMap::new();
    for leaf in tree.leaves() {
        let node = tree.node(leaf);
        let info = node.leaf().expect("leaf");
        let a = n.forest.contraction_of(leaf);
        let m = &node.matroid;
        let delete: ElementSet = m
            .elements()
            .iter()
            .copied()
            .filter(|e| !a.contains(e) && !real.contains(e))
            .collect();
        let local = m.minor(&delete, &a)?;
        let keep: ElementSet = local.ground();
        let graph = info.graph.as_ref().map(|g| g.contract(&a).restrict(&keep));
        let strategy = strategy_for(info.class, &local, &graph, &info.name);
        for &e in local.elements() {
            if dispatch.insert(e, locals.len()).is_some() {
                return Err(not_normalized(format!("{e} is real in two leaves")));
            }
        }
        locals.push(LocalPlan {
            name: info.name.clone(),
            leaf: Some(leaf),
            class: info.class,
            strategy,
            contracted: a,
            local: Arc::new(LocalMatroid::new(local, graph)),
        });
    }
    if let Some(&e) = real.iter().find(|e| !dispatch.contains_key(e)) {
        return Err(SecretaryError::DispatchMiss(e));
    }
    Ok(CompositePlan {
        root: tree.root_matroid().clone(),
        locals,
        dispatch,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub accepted: ElementSet,
    pub value: f64,
    /// Value collected by each local plan, in plan order.
    pub per_local: Vec<f64>,
    /// Acceptances refused by the independence guards.
    pub blocked: usize,
}

/// One run in the random-order model. `order_rng` draws the arrival order
/// and `alg_rng` feeds the algorithms. The union of the accepted sets is
/// checked for independence in the root.
pub fn run_composite(
    plan: &CompositePlan,
    weights: &Weights,
    order_rng: &mut dyn RngCore,
    alg_rng: &mut dyn RngCore,
) -> Result<RunOutcome, SecretaryError> {
    let mut order: Vec<ElementId> = plan.root.elements().to_vec();
    order.sort_unstable();
    order.shuffle(order_rng);
    let mut algs = Vec::with_capacity(plan.locals.len());
    for lp in &plan.locals {
        let mut alg = instantiate(lp.strategy, &lp.local)?;
        alg.begin(lp.local.matroid.len(), alg_rng);
        algs.push(alg);
    }
    let mut seen = vec![0usize; plan.locals.len()];
    let mut per_local = vec![0.0; plan.locals.len()];
    let mut accepted = ElementSet::new();
    for e in order {
        let i = *plan.dispatch.get(&e).ok_or(SecretaryError::DispatchMiss(e))?;
        let w = weights.get(e);
        if algs[i].offer(e, w, seen[i]) == Decision::Accept {
            accepted.insert(e);
            per_local[i] += w;
        }
        seen[i] += 1;
    }
    if !plan.root.is_independent(&accepted)? {
        return Err(SecretaryError::IndependenceViolation(accepted));
    }
    let value = accepted.iter().map(|&e| weights.get(e)).sum();
    Ok(RunOutcome {
        accepted,
        value,
        per_local,
        blocked: algs.iter().map(|a| a.blocked()).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::normalize;
    use crate::fixtures;
    use crate::sums::Mode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plan_of(spec: crate::decomposition::DecompSpec) -> CompositePlan {
        let tree = spec.build(Mode::Relaxed).unwrap();
        build_composite_plan(&normalize(&tree).unwrap()).unwrap()
    }

    #[test]
    fn two_triangle_plan() {
        let plan = plan_of(fixtures::two_triangles());
        assert_eq!(plan.locals.len(), 2);
        let t1 = &plan.locals[0];
        let t2 = &plan.locals[1];
        assert_eq!((t1.name.as_str(), t1.matroid().len(), t1.matroid().rank()), ("T1", 2, 2));
        assert!(t1.contracted.is_empty());
        assert_eq!((t2.name.as_str(), t2.matroid().len(), t2.matroid().rank()), ("T2", 2, 1));
        assert_eq!(t2.contracted, crate::matroid::set_of(&[100]));
        assert_eq!(t1.strategy, Strategy::Graphic);
        assert_eq!(t2.strategy, Strategy::Graphic);
    }

    #[test]
    fn badseed1_plan_covers_root_once() {
        let plan = plan_of(fixtures::badseed1());
        assert_eq!(plan.locals.len(), 3);
        let total: usize = plan.locals.iter().map(|l| l.matroid().len()).sum();
        assert_eq!(total, plan.root.len());
        assert_eq!(plan.dispatch.keys().copied().collect::<ElementSet>(), plan.root.ground());
    }

    #[test]
    fn runs_are_independent() {
        let plan = plan_of(fixtures::two_triangles());
        let w = Weights::unit(plan.root.elements());
        for seed in 0..1000 {
            let mut a = ChaCha8Rng::seed_from_u64(seed);
            let mut b = ChaCha8Rng::seed_from_u64(seed + 1_000_000);
            let out = run_composite(&plan, &w, &mut a, &mut b).unwrap();
            assert!(out.accepted.len() <= 3);
        }
    }

    #[test]
    fn zero_weights_give_zero() {
        let plan = plan_of(fixtures::regular_chain());
        let w = Weights::default();
        let out = run_composite(&plan, &w, &mut ChaCha8Rng::seed_from_u64(3), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let tree = fixtures::badseed1().build(Mode::Relaxed).unwrap();
        let mut n = normalize(&tree).unwrap();
        n.tree = tree;
        assert!(matches!(build_composite_plan(&n), Err(SecretaryError::NotNormalized(_))));
    }

    #[test]
    fn dispatch_miss_is_reported() {
        let mut plan = plan_of(fixtures::two_triangles());
        plan.dispatch.remove(&ElementId(1));
        let w = Weights::default();
        let err = run_composite(&plan, &w, &mut ChaCha8Rng::seed_from_u64(0), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(err, Err(SecretaryError::DispatchMiss(ElementId(1))));
    }
}
