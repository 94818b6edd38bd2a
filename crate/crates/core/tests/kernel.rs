//! Properties of the GF(2) matroid kernel against brute-force oracles.

mod support;

use std::collections::BTreeMap;

use proptest::prelude::*;

use matroid_secretary::gf2::BitVec;
use matroid_secretary::io::{matroid_from_json, matroid_to_json};
use matroid_secretary::matroid::{matroids_equal, weight_of, EqualityMode};
use matroid_secretary::zoo::{zoo, NAMES};
use matroid_secretary::{BinaryMatroid, ElementId, ElementSet, Weights};

use support::Oracle;

fn matroid_strategy(max_cols: usize) -> impl Strategy<Value = BinaryMatroid> {
    (1..=max_cols, 0..=5usize).prop_flat_map(|(n, h)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), h).prop_map(move |rows| {
            let rows: Vec<BitVec> = rows.iter().map(|r| BitVec::from_bools(r)).collect();
            BinaryMatroid::from_rows((0..n as u32).map(ElementId).collect(), rows).unwrap()
        })
    })
}

fn weights_for(m: &BinaryMatroid, raw: &[u8]) -> Weights {
    Weights::from_pairs(m.elements().iter().zip(raw).map(|(&e, &w)| (e, f64::from(w % 20)))).unwrap()
}

proptest! {
    #[test]
    fn rank_matches_oracle(m in matroid_strategy(10)) {
        let o = Oracle::new(&m);
        for s in o.subsets() {
            prop_assert_eq!(m.rank_of(&s).unwrap(), o.rank(&s));
        }
        prop_assert_eq!(m.rank(), o.full_rank());
    }

    #[test]
    fn rank_is_monotone_and_submodular(m in matroid_strategy(8)) {
        let all: Vec<ElementSet> = support::subsets(m.elements()).collect();
        let r = |s: &ElementSet| m.rank_of(s).unwrap();
        for a in &all {
            for b in &all {
                let union: ElementSet = a.union(b).copied().collect();
                let inter: ElementSet = a.intersection(b).copied().collect();
                prop_assert!(r(&union) + r(&inter) <= r(a) + r(b));
                if a.is_subset(b) {
                    prop_assert!(r(a) <= r(b));
                }
            }
        }
    }

    #[test]
    fn circuits_match_oracle(m in matroid_strategy(10)) {
        let mut got = m.enumerate_circuits().unwrap();
        got.sort();
        let mut want = Oracle::new(&m).circuits();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn greedy_is_optimal(m in matroid_strategy(12), raw in proptest::collection::vec(any::<u8>(), 12)) {
        let w = weights_for(&m, &raw);
        let greedy = m.greedy_opt(&w);
        prop_assert!(m.is_independent(&greedy).unwrap());
        prop_assert_eq!(weight_of(&greedy, &w), Oracle::new(&m).brute_opt(&w));
    }

    #[test]
    fn contraction_does_not_depend_on_the_basis(m in matroid_strategy(9), mask in any::<u16>()) {
        let x: ElementSet = m.elements().iter().copied().enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
        let contracted = m.contract(&x).unwrap();
        let o = Oracle::new(&m);
        // two bases of X: greedy in ascending and in descending order
        let xs: Vec<ElementId> = x.iter().copied().collect();
        let b1: ElementSet = m.basis_in_order(&xs).unwrap().into_iter().collect();
        let rev: Vec<ElementId> = xs.iter().rev().copied().collect();
        let b2: ElementSet = m.basis_in_order(&rev).unwrap().into_iter().collect();
        for s in support::subsets(contracted.elements()) {
            let with = |b: &ElementSet| o.independent(&s.union(b).copied().collect());
            prop_assert_eq!(with(&b1), with(&b2));
            prop_assert_eq!(contracted.is_independent(&s).unwrap(), with(&b1));
        }
    }

    #[test]
    fn adding_a_parallel_element_then_deleting_it_is_identity(m in matroid_strategy(8), pick in any::<prop::sample::Index>()) {
        let a = m.elements()[pick.index(m.len())];
        prop_assume!(!m.is_loop(a).unwrap());
        let z = ElementId(99);
        let bigger = m.add_parallel(z, a).unwrap();
        prop_assert!(bigger.are_parallel(z, a).unwrap());
        let back = bigger.minor(&[z].into(), &ElementSet::new()).unwrap();
        prop_assert!(matroids_equal(&back, &m, EqualityMode::Exhaustive).unwrap());
    }

    #[test]
    fn dual_rank_and_involution(m in matroid_strategy(10)) {
        let d = m.dual();
        prop_assert_eq!(d.rank(), m.len() - m.rank());
        prop_assert!(matroids_equal(&d.dual(), &m, EqualityMode::Exhaustive).unwrap());
        // bases of the dual are complements of bases
        let o = Oracle::new(&m);
        let od = Oracle::new(&d);
        for s in o.subsets() {
            let comp: ElementSet = m.ground().difference(&s).copied().collect();
            let basis = s.len() == m.rank() && o.independent(&s);
            let dual_basis = comp.len() == d.rank() && od.independent(&comp);
            prop_assert_eq!(basis, dual_basis);
        }
    }

    #[test]
    fn equality_modes_agree(m in matroid_strategy(8), n in matroid_strategy(8)) {
        if m.ground() == n.ground() {
            prop_assert_eq!(
                matroids_equal(&m, &n, EqualityMode::Exhaustive).unwrap(),
                matroids_equal(&m, &n, EqualityMode::Algebraic).unwrap()
            );
        }
    }

    #[test]
    fn files_round_trip(m in matroid_strategy(12)) {
        let text = matroid_to_json(&m);
        let back = matroid_from_json(&text).unwrap();
        prop_assert_eq!(matroid_to_json(&back), text);
        prop_assert!(matroids_equal(&m, &back, EqualityMode::Algebraic).unwrap());
    }
}

#[test]
fn zoo_entries_satisfy_circuit_axioms() {
    for name in NAMES {
        let m = zoo(name).unwrap().matroid;
        if m.len() > 12 {
            continue;
        }
        let circuits = m.enumerate_circuits().unwrap();
        let o = Oracle::new(&m);
        for (i, c1) in circuits.iter().enumerate() {
            for (j, c2) in circuits.iter().enumerate() {
                if i == j {
                    continue;
                }
                assert!(!c1.is_subset(c2), "{name}: {c1:?} inside {c2:?}");
                let both: Vec<ElementId> = c1.intersection(c2).copied().collect();
                for &x in &both {
                    let mut u: ElementSet = c1.union(c2).copied().collect();
                    u.remove(&x);
                    assert!(!o.independent(&u), "{name}: circuit elimination fails");
                }
            }
        }
    }
}

#[test]
fn k4_circuits_are_triangles_and_squares() {
    let z = zoo("k4").unwrap();
    let circuits = z.matroid.enumerate_circuits().unwrap();
    let sizes: BTreeMap<usize, usize> = circuits.iter().fold(BTreeMap::new(), |mut acc, c| {
        *acc.entry(c.len()).or_insert(0) += 1;
        acc
    });
    assert_eq!(sizes, BTreeMap::from([(3, 4), (4, 3)]));
    let g = z.graph.unwrap();
    for c in &circuits {
        assert!(!support::acyclic(&g, c));
        for &e in c {
            let mut smaller = c.clone();
            smaller.remove(&e);
            assert!(support::acyclic(&g, &smaller));
        }
    }
}

#[test]
fn graphic_builder_matches_graph_oracle() {
    for name in ["triangle", "c4", "k4", "k5", "k23", "k33"] {
        let z = zoo(name).unwrap();
        let g = z.graph.unwrap();
        let o = Oracle::new(&z.matroid);
        for s in o.subsets() {
            assert_eq!(o.independent(&s), support::acyclic(&g, &s), "{name}");
        }
    }
}
