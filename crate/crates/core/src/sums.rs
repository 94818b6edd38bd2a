//! Symmetric-difference sums of binary matroids and the two element-moving
//! primitives used by the normalizer.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, BitVec};
use crate::matroid::{BinaryMatroid, ElementId, ElementSet, MatroidError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumTag {
    #[serde(rename = "ONE")]
    One,
    #[serde(rename = "TWO")]
    Two,
    #[serde(rename = "THREE")]
    Three,
}

impl SumTag {
    pub fn shared_size(self) -> usize {
        match self {
            SumTag::One => 0,
            SumTag::Two => 1,
            SumTag::Three => 3,
        }
    }
}

impl fmt::Display for SumTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumTag::One => "ONE",
            SumTag::Two => "TWO",
            SumTag::Three => "THREE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumKind {
    One,
    Two { z: ElementId },
    Three { z: [ElementId; 3] },
}

impl SumKind {
    pub fn tag(&self) -> SumTag {
        match self {
            SumKind::One => SumTag::One,
            SumKind::Two { .. } => SumTag::Two,
            SumKind::Three { .. } => SumTag::Three,
        }
    }

    pub fn shared(&self) -> ElementSet {
        match self {
            SumKind::One => ElementSet::new(),
            SumKind::Two { z } => [*z].into(),
            SumKind::Three { z } => z.iter().copied().collect(),
        }
    }

    fn from_shared(shared: &ElementSet) -> Option<Self> {
        let v: Vec<ElementId> = shared.iter().copied().collect();
        match v.as_slice() {
            [] => Some(SumKind::One),
            [z] => Some(SumKind::Two { z: *z }),
            [a, b, c] => Some(SumKind::Three { z: [*a, *b, *c] }),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    Size { side: Side, size: usize, minimum: usize },
    Loop { side: Side, element: ElementId },
    Coloop { side: Side, element: ElementId },
    NotCircuit { side: Side },
    CocircuitInside { side: Side },
    OverlapSize { size: usize },
}

impl Violation {
    /// Relaxed mode only cares about the shared set being a common circuit.
    pub fn blocks_relaxed(&self) -> bool {
        matches!(self, Violation::NotCircuit { .. } | Violation::OverlapSize { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Size { side, size, minimum } => {
                write!(f, "{side:?} operand has {size} elements, needs at least {minimum}")
            }
            Violation::Loop { side, element } => write!(f, "shared element {element} is a loop of the {side:?} operand"),
            Violation::Coloop { side, element } => {
                write!(f, "shared element {element} is a coloop of the {side:?} operand")
            }
            Violation::NotCircuit { side } => write!(f, "shared set is not a circuit of the {side:?} operand"),
            Violation::CocircuitInside { side } => {
                write!(f, "shared set contains a cocircuit of the {side:?} operand")
            }
            Violation::OverlapSize { size } => write!(f, "operands share {size} elements"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumDiagnostics {
    pub kind: Option<SumKind>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SumError {
    #[error("operands share {0} elements; sums are defined for 0, 1 or 3")]
    OverlapSize(usize),
    #[error("sum has an empty ground set")]
    EmptyGround,
    #[error("sum conditions fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Violations(Vec<Violation>),
    #[error("{{{z}, {a}}} is not a circuit of the first operand")]
    NotParallel { z: ElementId, a: ElementId },
    #[error("element {0} must not be shared by the operands")]
    SharedElement(ElementId),
    #[error("element {0} is not shared by the operands")]
    NotShared(ElementId),
    #[error("{0}")]
    Precondition(String),
    #[error("no witness for the 3-circuit {0:?}; a 3-circuit of a sum split 1+2 always has one")]
    WitnessNotFound([ElementId; 3]),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

pub fn shared_elements(m1: &BinaryMatroid, m2: &BinaryMatroid) -> ElementSet {
    m1.elements().iter().copied().filter(|&e| m2.contains(e)).collect()
}

/// The matroid on `E(M1) △ E(M2)` whose cycles are the sets `C1 △ C2` with
/// `Ci` a cycle of `Mi` and `C1`, `C2` agreeing on the shared elements.
///
/// Columns are ordered as the unshared columns of `m1`, then those of `m2`.
pub fn delta_sum(m1: &BinaryMatroid, m2: &BinaryMatroid) -> Result<BinaryMatroid, SumError> {
    let shared = shared_elements(m1, m2);
    let own1: Vec<ElementId> = m1.elements().iter().copied().filter(|e| !shared.contains(e)).collect();
    let own2: Vec<ElementId> = m2.elements().iter().copied().filter(|e| !shared.contains(e)).collect();
    if own1.is_empty() && own2.is_empty() {
        return Err(SumError::EmptyGround);
    }
    let (n1, n2, k) = (own1.len(), own2.len(), shared.len());
    let width = n1 + n2 + k;
    let shared_pos: Vec<ElementId> = shared.iter().copied().collect();
    // coordinate of each column of an operand in the stacked layout [own1 | own2 | shared]
    let layout = |m: &BinaryMatroid, own: &[ElementId], offset: usize| -> Vec<usize> {
        m.elements()
            .iter()
            .map(|e| match own.iter().position(|x| x == e) {
                Some(i) => offset + i,
                None => n1 + n2 + shared_pos.iter().position(|x| x == e).expect("shared"),
            })
            .collect()
    };
    let pos1 = layout(m1, &own1, 0);
    let pos2 = layout(m2, &own2, n1);
    let mut stacked: Vec<BitVec> = Vec::new();
    for (m, pos) in [(m1, &pos1), (m2, &pos2)] {
        for c in m.cycle_basis() {
            stacked.push(BitVec::from_indices(width, c.iter_ones().map(|i| pos[i])));
        }
    }
    // shared columns first: rows pivoting later vanish on every shared column
    let order: Vec<usize> = (n1 + n2..width).chain(0..n1 + n2).collect();
    let pivots = gf2::rref_in_order(&mut stacked, &order);
    let keep: Vec<usize> = (0..n1 + n2).collect();
    let basis: Vec<BitVec> = stacked
        .iter()
        .zip(&pivots)
        .filter(|(_, &p)| p < n1 + n2)
        .map(|(row, _)| row.select(&keep))
        .collect();
    let mut labels = own1;
    labels.extend(own2);
    Ok(BinaryMatroid::from_cycle_space(labels, &basis)?)
}

/// Which of the 1-, 2- and 3-sums applies to the pair, and which of the
/// non-triviality conditions fail.
pub fn classify_sum(m1: &BinaryMatroid, m2: &BinaryMatroid, mode: Mode) -> Result<SumDiagnostics, SumError> {
    let shared = shared_elements(m1, m2);
    let candidate = SumKind::from_shared(&shared).ok_or(SumError::OverlapSize(shared.len()))?;
    let mut violations = Vec::new();
    let sides = [(Side::Left, m1), (Side::Right, m2)];
    match &candidate {
        SumKind::One => {
            for (side, m) in sides {
                if m.is_empty() {
                    violations.push(Violation::Size { side, size: 0, minimum: 1 });
                }
            }
        }
        SumKind::Two { z } => {
            for (side, m) in sides {
                if m.len() < 3 {
                    violations.push(Violation::Size { side, size: m.len(), minimum: 3 });
                }
                if m.is_loop(*z)? {
                    violations.push(Violation::Loop { side, element: *z });
                } else if m.coloops().contains(z) {
                    violations.push(Violation::Coloop { side, element: *z });
                }
            }
        }
        SumKind::Three { .. } => {
            for (side, m) in sides {
                if !m.is_circuit(&shared)? {
                    violations.push(Violation::NotCircuit { side });
                }
                if m.len() < 7 {
                    violations.push(Violation::Size { side, size: m.len(), minimum: 7 });
                }
                // Z contains a cocircuit iff deleting Z drops the rank
                let rest: ElementSet = m.ground().difference(&shared).copied().collect();
                if m.rank_of(&rest)? < m.rank() {
                    violations.push(Violation::CocircuitInside { side });
                }
            }
        }
    }
    let ok = match mode {
        Mode::Strict => violations.is_empty(),
        Mode::Relaxed => !violations.iter().any(Violation::blocks_relaxed),
    };
    Ok(SumDiagnostics {
        kind: ok.then_some(candidate),
        violations,
    })
}

/// `M1 ⊕ M2` under `mode`, together with the kind of sum taken.
pub fn k_sum(m1: &BinaryMatroid, m2: &BinaryMatroid, mode: Mode) -> Result<(BinaryMatroid, SumKind), SumError> {
    let diag = classify_sum(m1, m2, mode)?;
    let kind = diag.kind.ok_or(SumError::Violations(diag.violations))?;
    Ok((delta_sum(m1, m2)?, kind))
}

/// Moves `z` from `m1` to `m2`, where it becomes parallel to the shared
/// element `a`. Returns `(M1 - z, M2(z, a))`; the sum is unchanged.
pub fn move_parallel(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    z: ElementId,
    a: ElementId,
) -> Result<(BinaryMatroid, BinaryMatroid), SumError> {
    if !m1.contains(z) {
        return Err(MatroidError::UnknownElement(z).into());
    }
    if m2.contains(z) {
        return Err(SumError::SharedElement(z));
    }
    if !(m1.contains(a) && m2.contains(a)) {
        return Err(SumError::NotShared(a));
    }
    if !m1.are_parallel(z, a)? {
        return Err(SumError::NotParallel { z, a });
    }
    let single: ElementSet = [z].into();
    Ok((m1.delete(&single)?, m2.add_parallel(z, a)?))
}

/// For a 3-circuit `{z1, z2, z3}` of `M1 ⊕ M2` split as `z1` on the left and
/// `z2, z3` on the right, finds a shared `a` with `{z1, a}` a circuit of `M1`
/// and `{z2, z3, a}` a circuit of `M2`. The smallest such `a` is returned.
pub fn three_circuit_witness(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    z1: ElementId,
    z2: ElementId,
    z3: ElementId,
) -> Result<ElementId, SumError> {
    let shared = shared_elements(m1, m2);
    let own = |m: &BinaryMatroid, e: ElementId| m.contains(e) && !shared.contains(&e);
    if !own(m1, z1) || !own(m2, z2) || !own(m2, z3) {
        return Err(SumError::Precondition(format!(
            "expected {z1} only in the first operand and {z2}, {z3} only in the second"
        )));
    }
    let sum = delta_sum(m1, m2)?;
    let triple: ElementSet = [z1, z2, z3].into();
    if !sum.is_circuit(&triple)? {
        return Err(SumError::Precondition(format!("{{{z1}, {z2}, {z3}}} is not a circuit of the sum")));
    }
    for &a in &shared {
        if m1.are_parallel(z1, a)? && m2.is_circuit(&[z2, z3, a].into())? {
            return Ok(a);
        }
    }
    Err(SumError::WitnessNotFound([z1, z2, z3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{matroids_equal, set_of, EqualityMode};
    use crate::zoo::zoo;
    use std::collections::BTreeMap;

    fn relabelled(name: &str, ids: &[u32]) -> BinaryMatroid {
        let m = zoo(name).unwrap().matroid;
        let map: BTreeMap<ElementId, ElementId> = m
            .elements()
            .iter()
            .zip(ids)
            .map(|(&e, &id)| (e, ElementId(id)))
            .collect();
        m.relabel(&map).unwrap()
    }

    fn cols(labels: &[u32], height: usize, columns: &[&str]) -> BinaryMatroid {
        let c: Vec<BitVec> = columns.iter().map(|s| BitVec::parse(s).unwrap()).collect();
        BinaryMatroid::from_columns(labels.iter().map(|&i| ElementId(i)).collect(), height, &c).unwrap()
    }

    #[test]
    fn one_sum_is_a_direct_sum() {
        let t = relabelled("triangle", &[1, 2, 3]);
        let k = relabelled("k4", &[10, 11, 12, 13, 14, 15]);
        let (s, kind) = k_sum(&t, &k, Mode::Strict).unwrap();
        assert_eq!(kind, SumKind::One);
        assert_eq!(s.len(), 9);
        assert_eq!(s.rank(), 5);
        let mut expected = t.enumerate_circuits().unwrap();
        expected.extend(k.enumerate_circuits().unwrap());
        expected.sort();
        let mut got = s.enumerate_circuits().unwrap();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn two_triangles_make_a_square() {
        // triangle edges 01,02,12: z = 01 on both
        let t1 = relabelled("triangle", &[9, 1, 2]);
        let t2 = relabelled("triangle", &[9, 3, 4]);
        let diag = classify_sum(&t1, &t2, Mode::Strict).unwrap();
        assert_eq!(diag.kind, Some(SumKind::Two { z: ElementId(9) }));
        let s = delta_sum(&t1, &t2).unwrap();
        assert_eq!(s.enumerate_circuits().unwrap(), vec![set_of(&[1, 2, 3, 4])]);
    }

    #[test]
    fn k4_three_sum_strict_and_relaxed() {
        // K4 triangle 0-1-2 is edges 0,1,3
        let a = relabelled("k4", &[0, 1, 2, 3, 4, 5]);
        let b = relabelled("k4", &[0, 1, 6, 3, 7, 8]);
        let relaxed = classify_sum(&a, &b, Mode::Relaxed).unwrap();
        assert_eq!(relaxed.kind, Some(SumKind::Three { z: [ElementId(0), ElementId(1), ElementId(3)] }));
        let strict = classify_sum(&a, &b, Mode::Strict).unwrap();
        assert_eq!(strict.kind, None);
        assert!(strict.violations.contains(&Violation::Size { side: Side::Left, size: 6, minimum: 7 }));
        assert!(matches!(k_sum(&a, &b, Mode::Strict), Err(SumError::Violations(_))));
        let (s, _) = k_sum(&a, &b, Mode::Relaxed).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.rank(), 4);
    }

    #[test]
    fn bad_overlaps() {
        let a = relabelled("triangle", &[1, 2, 3]);
        let b = relabelled("triangle", &[1, 2, 4]);
        assert_eq!(classify_sum(&a, &b, Mode::Relaxed).unwrap_err(), SumError::OverlapSize(2));
        let c = relabelled("k4", &[1, 2, 3, 5, 6, 7]);
        // 1,2,3 are edges 01,02,03 of K4: a star, not a circuit
        let d = classify_sum(&a, &c, Mode::Relaxed).unwrap();
        assert_eq!(d.kind, None);
        assert!(d.violations.contains(&Violation::NotCircuit { side: Side::Right }));
        assert_eq!(delta_sum(&a, &a).unwrap_err(), SumError::EmptyGround);
    }

    #[test]
    fn coloop_and_loop_violations() {
        let free = cols(&[1, 2, 9], 3, &["100", "010", "001"]);
        let t = relabelled("triangle", &[9, 3, 4]);
        let d = classify_sum(&free, &t, Mode::Strict).unwrap();
        assert_eq!(d.kind, None);
        assert_eq!(d.violations, vec![Violation::Coloop { side: Side::Left, element: ElementId(9) }]);
        assert!(classify_sum(&free, &t, Mode::Relaxed).unwrap().kind.is_some());
        let with_loop = cols(&[1, 2, 9], 1, &["1", "1", "0"]);
        let d = classify_sum(&with_loop, &t, Mode::Strict).unwrap();
        assert_eq!(d.violations, vec![Violation::Loop { side: Side::Left, element: ElementId(9) }]);
    }

    #[test]
    fn cocircuit_inside_the_shared_triangle() {
        // triangle {1,2,3} alone: deleting it kills all rank
        let t = relabelled("triangle", &[1, 2, 3]);
        let k = relabelled("k4", &[1, 2, 5, 3, 6, 7]);
        let d = classify_sum(&t, &k, Mode::Strict).unwrap();
        assert!(d.violations.contains(&Violation::CocircuitInside { side: Side::Left }));
        assert!(!d.violations.contains(&Violation::CocircuitInside { side: Side::Right }));
    }

    #[test]
    fn delta_sum_commutes() {
        let a = relabelled("f7", &[0, 1, 2, 3, 4, 5, 6]);
        let b = relabelled("k4", &[0, 1, 10, 11, 12, 13]);
        // F7 line {1,2,3} = vectors 001,010,011; K4 triangle is edges 0,1,3
        let b = {
            let map = BTreeMap::from([(ElementId(11), ElementId(2))]);
            b.relabel(&map).unwrap()
        };
        let ab = delta_sum(&a, &b).unwrap();
        let ba = delta_sum(&b, &a).unwrap();
        assert!(matroids_equal(&ab, &ba, EqualityMode::Exhaustive).unwrap());
    }

    #[test]
    fn moving_a_parallel_element_keeps_the_sum() {
        // M1 on {z, a, b}: z parallel to a, b free; M2 = triangle {a, p, q}
        let m1 = cols(&[5, 1, 2], 2, &["10", "10", "01"]);
        let m2 = relabelled("triangle", &[1, 3, 4]);
        let before = delta_sum(&m1, &m2).unwrap();
        let (n1, n2) = move_parallel(&m1, &m2, ElementId(5), ElementId(1)).unwrap();
        assert!(!n1.contains(ElementId(5)));
        assert!(n2.is_circuit(&set_of(&[1, 5])).unwrap());
        let after = delta_sum(&n1, &n2).unwrap();
        assert!(matroids_equal(&before, &after, EqualityMode::Exhaustive).unwrap());
        // and back again, since a is still shared
        let (b2, b1) = move_parallel(&n2, &n1, ElementId(5), ElementId(1)).unwrap();
        assert!(matroids_equal(&b1, &m1, EqualityMode::Exhaustive).unwrap());
        assert!(matroids_equal(&b2, &m2, EqualityMode::Exhaustive).unwrap());
    }

    #[test]
    fn move_parallel_errors() {
        let m1 = cols(&[5, 1, 2], 2, &["10", "10", "01"]);
        let m2 = relabelled("triangle", &[1, 3, 4]);
        assert_eq!(
            move_parallel(&m1, &m2, ElementId(2), ElementId(1)).unwrap_err(),
            SumError::NotParallel { z: ElementId(2), a: ElementId(1) }
        );
        assert_eq!(
            move_parallel(&m1, &m2, ElementId(1), ElementId(1)).unwrap_err(),
            SumError::SharedElement(ElementId(1))
        );
    }

    #[test]
    fn witness_for_a_created_triangle() {
        // M1 = {z1 || a, b}; M2 = triangle {z2, z3, a} plus a free f
        let m1 = cols(&[11, 10, 1], 2, &["10", "10", "01"]);
        let m2 = cols(&[12, 13, 10, 2], 3, &["100", "010", "110", "001"]);
        let (z1, z2, z3) = (ElementId(11), ElementId(12), ElementId(13));
        assert_eq!(three_circuit_witness(&m1, &m2, z1, z2, z3).unwrap(), ElementId(10));
        // wrong split is a precondition failure, not a missing witness
        assert!(matches!(
            three_circuit_witness(&m2, &m1, z1, z2, z3),
            Err(SumError::Precondition(_))
        ));
    }
}
