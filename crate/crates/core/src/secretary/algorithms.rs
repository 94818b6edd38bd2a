//! Base online algorithms. Each one sees the elements of a single local
//! matroid in random order and decides irrevocably on arrival.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::SecretaryError;
use crate::gf2::{BitVec, XorBasis};
use crate::graph::GraphModel;
use crate::matroid::{BinaryMatroid, ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

/// An online algorithm in the random-order model.
///
/// `begin` announces how many elements will be offered. `position` counts the
/// offers made to this algorithm so far, starting at 0.
pub trait OnlineAlgorithm: Send {
    fn begin(&mut self, n: usize, rng: &mut dyn RngCore);
    fn offer(&mut self, e: ElementId, w: f64, position: usize) -> Decision;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Classical,
    SampleThreshold,
    Graphic,
    /// Sample-and-threshold after deleting one random parallel class.
    ParallelClass,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Classical,
        Strategy::SampleThreshold,
        Strategy::Graphic,
        Strategy::ParallelClass,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Classical => "classical",
            Strategy::SampleThreshold => "sample-threshold",
            Strategy::Graphic => "graphic",
            Strategy::ParallelClass => "parallel-class",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Size of the observation phase: `floor(n / e)`.
pub fn sample_size(n: usize) -> usize {
    (n as f64 / std::f64::consts::E).floor() as usize
}

/// Strict order on (weight, id): heavier wins, then the smaller id.
fn beats(a: (f64, ElementId), b: (f64, ElementId)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// A local matroid with its columns looked up by element.
#[derive(Clone, Debug)]
pub struct LocalMatroid {
    pub matroid: BinaryMatroid,
    pub graph: Option<GraphModel>,
    columns: BTreeMap<ElementId, BitVec>,
}

impl LocalMatroid {
    pub fn new(matroid: BinaryMatroid, graph: Option<GraphModel>) -> Self {
        let columns = matroid
            .elements()
            .iter()
            .map(|&e| (e, matroid.column(e).expect("own element")))
            .collect();
        Self {
            matroid,
            graph,
            columns,
        }
    }

    fn tracker(&self) -> XorBasis {
        XorBasis::new(self.matroid.rank())
    }

    /// Adds `e` to `basis` if that keeps it independent. Loops and foreign
    /// elements are refused.
    fn try_add(&self, basis: &mut XorBasis, e: ElementId) -> bool {
        self.columns.get(&e).is_some_and(|c| basis.insert(c))
    }
}

/// Rank-1 secretary: skip the sample, then take the first element that
/// beats everything in it.
#[derive(Clone, Debug, Default)]
pub struct ClassicalSecretary {
    sample: usize,
    best: Option<(f64, ElementId)>,
    done: bool,
}

impl OnlineAlgorithm for ClassicalSecretary {
    fn begin(&mut self, n: usize, _rng: &mut dyn RngCore) {
        *self = Self {
            sample: sample_size(n),
            ..Self::default()
        };
    }

    fn offer(&mut self, e: ElementId, w: f64, position: usize) -> Decision {
        if self.done {
            return Decision::Reject;
        }
        if position < self.sample {
            if self.best.is_none_or(|b| beats((w, e), b)) {
                self.best = Some((w, e));
            }
            return Decision::Reject;
        }
        if self.best.is_none_or(|b| beats((w, e), b)) {
            self.done = true;
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

/// Observes the sample, then greedily accepts every element whose weight is
/// at least the sample maximum and keeps the accepted set independent.
#[derive(Clone, Debug)]
pub struct SampleThreshold {
    local: Arc<LocalMatroid>,
    basis: XorBasis,
    sample: usize,
    threshold: f64,
}

impl SampleThreshold {
    pub fn new(local: Arc<LocalMatroid>) -> Self {
        let basis = local.tracker();
        Self {
            local,
            basis,
            sample: 0,
            threshold: f64::NEG_INFINITY,
        }
    }
}

impl OnlineAlgorithm for SampleThreshold {
    fn begin(&mut self, n: usize, _rng: &mut dyn RngCore) {
        self.basis = self.local.tracker();
        self.sample = sample_size(n);
        self.threshold = f64::NEG_INFINITY;
    }

    fn offer(&mut self, e: ElementId, w: f64, position: usize) -> Decision {
        if position < self.sample {
            self.threshold = self.threshold.max(w);
            return Decision::Reject;
        }
        if w >= self.threshold && self.local.try_add(&mut self.basis, e) {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

/// Every edge is given to a random endpoint; each vertex runs a classical
/// secretary over its edges, and an acceptance stands only if the chosen
/// edges stay acyclic.
#[derive(Clone, Debug)]
pub struct GraphicSecretary {
    graph: GraphModel,
    owner: BTreeMap<ElementId, u32>,
    vertex: BTreeMap<u32, (ClassicalSecretary, usize)>,
    forest: BTreeMap<u32, u32>,
}

impl GraphicSecretary {
    pub fn new(graph: GraphModel) -> Self {
        Self {
            graph,
            owner: BTreeMap::new(),
            vertex: BTreeMap::new(),
            forest: BTreeMap::new(),
        }
    }

    fn find(&mut self, v: u32) -> u32 {
        let p = *self.forest.entry(v).or_insert(v);
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.forest.insert(v, r);
        r
    }
}

impl OnlineAlgorithm for GraphicSecretary {
    fn begin(&mut self, _n: usize, rng: &mut dyn RngCore) {
        self.owner.clear();
        self.forest.clear();
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for (e, (u, v)) in self.graph.edges() {
            let w = if rng.gen_bool(0.5) { u } else { v };
            self.owner.insert(e, w);
            *counts.entry(w).or_insert(0) += 1;
        }
        self.vertex = counts
            .into_iter()
            .map(|(v, n)| {
                let mut c = ClassicalSecretary::default();
                c.begin(n, rng);
                (v, (c, 0))
            })
            .collect();
    }

    fn offer(&mut self, e: ElementId, w: f64, _position: usize) -> Decision {
        let Some(&v) = self.owner.get(&e) else {
            return Decision::Reject;
        };
        let (secretary, seen) = self.vertex.get_mut(&v).expect("owner has a secretary");
        let decision = secretary.offer(e, w, *seen);
        *seen += 1;
        if decision == Decision::Reject {
            return Decision::Reject;
        }
        let (a, b) = self.graph.ends(e).expect("owned edges exist");
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Decision::Reject;
        }
        self.forest.insert(ra, rb);
        Decision::Accept
    }
}

/// Deletes one uniformly random parallel class before running the inner
/// algorithm. Applies only when there are at least two classes and one of
/// them has two or more elements; otherwise it passes everything through.
pub struct ParallelClassWrapper {
    local: Arc<LocalMatroid>,
    inner: Box<dyn OnlineAlgorithm>,
    removed: ElementSet,
    seen: usize,
}

impl ParallelClassWrapper {
    pub fn new(local: Arc<LocalMatroid>, inner: Box<dyn OnlineAlgorithm>) -> Self {
        Self {
            local,
            inner,
            removed: BTreeSet::new(),
            seen: 0,
        }
    }

    /// Elements deleted for the current run.
    pub fn removed(&self) -> &ElementSet {
        &self.removed
    }
}

impl OnlineAlgorithm for ParallelClassWrapper {
    fn begin(&mut self, n: usize, rng: &mut dyn RngCore) {
        let classes = self.local.matroid.parallel_classes();
        self.removed = if classes.len() >= 2 && classes.iter().any(|c| c.len() >= 2) {
            classes.choose(rng).cloned().unwrap_or_default()
        } else {
            BTreeSet::new()
        };
        self.seen = 0;
        self.inner.begin(n.saturating_sub(self.removed.len()), rng);
    }

    fn offer(&mut self, e: ElementId, w: f64, _position: usize) -> Decision {
        if self.removed.contains(&e) {
            return Decision::Reject;
        }
        let position = self.seen;
        self.seen += 1;
        self.inner.offer(e, w, position)
    }
}

/// Refuses any acceptance that would make the accepted set dependent in the
/// local matroid, and counts how often that happened.
pub struct IndependenceGuard {
    local: Arc<LocalMatroid>,
    inner: Box<dyn OnlineAlgorithm>,
    basis: XorBasis,
    blocked: usize,
}

impl IndependenceGuard {
    pub fn new(local: Arc<LocalMatroid>, inner: Box<dyn OnlineAlgorithm>) -> Self {
        let basis = local.tracker();
        Self {
            local,
            inner,
            basis,
            blocked: 0,
        }
    }

    /// Acceptances refused so far.
    pub fn blocked(&self) -> usize {
        self.blocked
    }
}

impl OnlineAlgorithm for IndependenceGuard {
    fn begin(&mut self, n: usize, rng: &mut dyn RngCore) {
        self.basis = self.local.tracker();
        self.blocked = 0;
        self.inner.begin(n, rng);
    }

    fn offer(&mut self, e: ElementId, w: f64, position: usize) -> Decision {
        if self.inner.offer(e, w, position) == Decision::Reject {
            return Decision::Reject;
        }
        if self.local.try_add(&mut self.basis, e) {
            Decision::Accept
        } else {
            log::debug!("guard refused dependent element {e}");
            self.blocked += 1;
            Decision::Reject
        }
    }
}

/// Builds `strategy` for `local`, behind an independence guard.
pub fn instantiate(strategy: Strategy, local: &Arc<LocalMatroid>) -> Result<IndependenceGuard, SecretaryError> {
    let inner: Box<dyn OnlineAlgorithm> = match strategy {
        Strategy::Classical => Box::new(ClassicalSecretary::default()),
        Strategy::SampleThreshold => Box::new(SampleThreshold::new(local.clone())),
        Strategy::Graphic => {
            let graph = local.graph.clone().ok_or(SecretaryError::Unsupported {
                strategy,
                needs: "a graph model",
            })?;
            Box::new(GraphicSecretary::new(graph))
        }
        Strategy::ParallelClass => Box::new(ParallelClassWrapper::new(
            local.clone(),
            Box::new(SampleThreshold::new(local.clone())),
        )),
    };
    Ok(IndependenceGuard::new(local.clone(), inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::uniform_rank_one;
    use crate::zoo::zoo;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: u32) -> ElementId {
        ElementId(i)
    }

    fn run(alg: &mut dyn OnlineAlgorithm, arrivals: &[(u32, f64)], seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        alg.begin(arrivals.len(), &mut rng);
        arrivals
            .iter()
            .enumerate()
            .filter(|&(pos, &(id, w))| alg.offer(e(id), w, pos) == Decision::Accept)
            .map(|(_, &(id, _))| id)
            .collect()
    }

    #[test]
    fn sample_sizes() {
        assert_eq!(sample_size(1), 0);
        assert_eq!(sample_size(2), 0);
        assert_eq!(sample_size(3), 1);
        assert_eq!(sample_size(100), 36);
    }

    #[test]
    fn classical_single_element() {
        assert_eq!(run(&mut ClassicalSecretary::default(), &[(4, 0.5)], 0), vec![4]);
    }

    #[test]
    fn classical_takes_first_after_sample_that_beats_it() {
        // sample is the first element
        let arrivals = [(0, 5.0), (1, 3.0), (2, 7.0), (3, 9.0)];
        assert_eq!(run(&mut ClassicalSecretary::default(), &arrivals, 0), vec![2]);
        let none = [(0, 9.0), (1, 3.0), (2, 7.0)];
        assert!(run(&mut ClassicalSecretary::default(), &none, 0).is_empty());
    }

    #[test]
    fn classical_equal_weights_use_ids() {
        // descending ids: the first post-sample element has the smallest id so far
        let desc: Vec<(u32, f64)> = (0..10).rev().map(|i| (i, 1.0)).collect();
        assert_eq!(run(&mut ClassicalSecretary::default(), &desc, 0), vec![6]);
        let asc: Vec<(u32, f64)> = (0..10).map(|i| (i, 1.0)).collect();
        assert!(run(&mut ClassicalSecretary::default(), &asc, 0).is_empty());
    }

    #[test]
    fn threshold_on_rank_one_accepts_ties() {
        let local = Arc::new(LocalMatroid::new(uniform_rank_one(4), None));
        let arrivals = [(0, 5.0), (1, 5.0), (2, 9.0), (3, 1.0)];
        assert_eq!(run(&mut SampleThreshold::new(local.clone()), &arrivals, 0), vec![1]);
        assert_eq!(run(&mut ClassicalSecretary::default(), &arrivals, 0), vec![2]);
    }

    #[test]
    fn threshold_on_free_matroid() {
        let free = BinaryMatroid::from_columns(
            vec![e(0), e(1), e(2)],
            3,
            &["100", "010", "001"].map(|c| BitVec::parse(c).unwrap()),
        )
        .unwrap();
        let local = Arc::new(LocalMatroid::new(free, None));
        assert_eq!(run(&mut SampleThreshold::new(local.clone()), &[(0, 2.0), (1, 3.0), (2, 1.0)], 0), vec![1]);
        assert_eq!(run(&mut SampleThreshold::new(local), &[(0, 2.0), (1, 1.0), (2, 4.0)], 0), vec![2]);
    }

    #[test]
    fn graphic_single_edge_always_accepted() {
        let z = zoo("graphic:0-1").unwrap();
        let local = Arc::new(LocalMatroid::new(z.matroid, z.graph));
        for seed in 0..20 {
            let mut alg = instantiate(Strategy::Graphic, &local).unwrap();
            assert_eq!(run(&mut alg, &[(0, 0.3)], seed), vec![0]);
        }
    }

    #[test]
    fn graphic_triangle_stays_acyclic() {
        let z = zoo("triangle").unwrap();
        let local = Arc::new(LocalMatroid::new(z.matroid.clone(), z.graph));
        for seed in 0..200 {
            let mut alg = instantiate(Strategy::Graphic, &local).unwrap();
            let got = run(&mut alg, &[(2, 1.0), (0, 1.0), (1, 1.0)], seed);
            assert!(got.len() <= 2);
            assert!(z.matroid.is_independent(&got.iter().map(|&i| e(i)).collect::<ElementSet>()).unwrap());
            assert_eq!(alg.blocked(), 0);
        }
    }

    #[test]
    fn graphic_needs_a_graph() {
        let local = Arc::new(LocalMatroid::new(zoo("f7").unwrap().matroid, None));
        assert!(matches!(
            instantiate(Strategy::Graphic, &local),
            Err(SecretaryError::Unsupported { .. })
        ));
    }

    #[test]
    fn wrapper_removes_one_class() {
        // classes {0,1}, {2}, {3}
        let m = BinaryMatroid::from_columns(
            vec![e(0), e(1), e(2), e(3)],
            2,
            &["10", "10", "01", "11"].map(|c| BitVec::parse(c).unwrap()),
        )
        .unwrap();
        let local = Arc::new(LocalMatroid::new(m, None));
        let mut seen = BTreeSet::new();
        for seed in 0..100 {
            let mut w = ParallelClassWrapper::new(local.clone(), Box::new(SampleThreshold::new(local.clone())));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            w.begin(4, &mut rng);
            assert!(!w.removed().is_empty());
            seen.insert(w.removed().clone());
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn wrapper_passes_simple_matroids_through() {
        let local = Arc::new(LocalMatroid::new(zoo("f7").unwrap().matroid, None));
        let mut w = ParallelClassWrapper::new(local.clone(), Box::new(SampleThreshold::new(local.clone())));
        w.begin(7, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(w.removed().is_empty());
    }

    struct AcceptAll;

    impl OnlineAlgorithm for AcceptAll {
        fn begin(&mut self, _n: usize, _rng: &mut dyn RngCore) {}
        fn offer(&mut self, _e: ElementId, _w: f64, _position: usize) -> Decision {
            Decision::Accept
        }
    }

    #[test]
    fn guard_blocks_dependent_acceptances() {
        let z = zoo("triangle").unwrap();
        let local = Arc::new(LocalMatroid::new(z.matroid, None));
        let mut g = IndependenceGuard::new(local, Box::new(AcceptAll));
        assert_eq!(run(&mut g, &[(0, 1.0), (1, 1.0), (2, 1.0)], 0), vec![0, 1]);
        assert_eq!(g.blocked(), 1);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
    }
}
