//! Normalization over random and named decompositions.

mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use matroid_secretary::decomposition::{bad_elements, bad_sum_sets, normalize, validate_tree, DecompTree, Normalized};
use matroid_secretary::fixtures::{self, random_decomposition};
use matroid_secretary::sums::Mode;
use matroid_secretary::ElementSet;

use support::Oracle;

fn random_tree(seed: u64) -> DecompTree {
    random_decomposition(&mut ChaCha8Rng::seed_from_u64(seed)).build(Mode::Relaxed).unwrap()
}

fn check(before: &DecompTree, n: &Normalized) -> Result<(), TestCaseError> {
    prop_assert!(validate_tree(&n.tree, true, Mode::Relaxed).is_valid());
    prop_assert!(bad_sum_sets(&n.tree).unwrap().is_empty());
    prop_assert!(n.graph.is_forest);
    prop_assert!(bad_elements(&n.tree, &n.forest).unwrap().is_empty());

    // same root matroid, minus stripped loops, by rank on every subset
    let old = Oracle::new(before.root_matroid());
    let new = Oracle::new(n.tree.root_matroid());
    let expected: ElementSet = before.root_matroid().ground().difference(&n.stripped_loops).copied().collect();
    prop_assert_eq!(n.tree.root_matroid().ground(), expected);
    for s in new.subsets() {
        prop_assert_eq!(old.rank(&s), new.rank(&s));
    }

    // parents are leaves, roots have none, A_M is the overlap with the parent
    let leaves = n.tree.leaves();
    for &leaf in &leaves {
        let mine = n.tree.node(leaf).matroid.ground();
        match n.forest.parent_of(leaf) {
            None => prop_assert!(n.forest.contraction_of(leaf).is_empty()),
            Some(p) => {
                prop_assert!(leaves.contains(&p));
                let overlap: ElementSet = mine.intersection(&n.tree.node(p).matroid.ground()).copied().collect();
                prop_assert_eq!(n.forest.contraction_of(leaf), overlap);
            }
        }
        // following parents terminates at a root
        let mut cur = leaf;
        for _ in 0..=leaves.len() {
            match n.forest.parent_of(cur) {
                Some(p) => cur = p,
                None => break,
            }
        }
        prop_assert!(n.forest.roots.contains(&cur));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_decompositions_normalize(seed in any::<u64>()) {
        let tree = random_tree(seed);
        let n = normalize(&tree).unwrap();
        check(&tree, &n)?;
    }

    #[test]
    fn normalization_is_deterministic(seed in any::<u64>()) {
        let tree = random_tree(seed);
        let a = normalize(&tree).unwrap();
        let b = normalize(&tree).unwrap();
        prop_assert_eq!(a.provenance, b.provenance);
        prop_assert_eq!(a.forest, b.forest);
    }

    #[test]
    fn potential_trace_decreases(seed in any::<u64>()) {
        let n = normalize(&random_tree(seed)).unwrap();
        let trace = &n.make_good.phi_trace;
        prop_assert_eq!(*trace.last().unwrap(), 0);
        prop_assert!(trace.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(trace[0] <= n.make_good.bound);
    }
}

#[test]
fn named_fixtures_normalize() {
    for (name, spec) in fixtures::all() {
        let tree = spec.build(Mode::Relaxed).unwrap();
        let n = normalize(&tree).unwrap();
        if tree.root_matroid().len() <= 16 {
            check(&tree, &n).unwrap_or_else(|e| panic!("{name}: {e}"));
        } else {
            assert!(validate_tree(&n.tree, true, Mode::Relaxed).is_valid(), "{name}");
            assert!(bad_elements(&n.tree, &n.forest).unwrap().is_empty(), "{name}");
        }
    }
}

#[test]
fn normalizing_twice_moves_nothing() {
    for (name, spec) in fixtures::all() {
        let once = normalize(&spec.build(Mode::Relaxed).unwrap()).unwrap();
        let twice = normalize(&once.tree).unwrap();
        assert!(twice.provenance.is_empty(), "{name}: {:?}", twice.provenance);
    }
}
