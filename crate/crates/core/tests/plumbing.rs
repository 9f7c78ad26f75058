mod common;

use blowdown::acceptance::Fixtures;
use blowdown::kernel::int;
use blowdown::plumbing::{
    fundamental_group, quotient_triviality, GeometricFacts, PlumbingError, PlumbingGraph,
    SeifertInvariant, TrivialityOutcome,
};
use blowdown::scenario::{BUILTIN_B4, BUILTIN_C4};
use common::{cofactor_det, Built};
use proptest::prelude::*;

#[test]
fn determinants_match_cofactor_expansion() {
    let fx = Fixtures::reference();
    for (src, pf) in [(BUILTIN_B4, &fx.p), (BUILTIN_C4, &fx.q)] {
        let g = Built::new(src).plumbing();
        let oracle = cofactor_det(&pf.matrix);
        assert_eq!(oracle, pf.determinant as i128);
        assert_eq!(g.determinant(), int(oracle as i64));
    }
}

#[test]
fn pairings_used_by_the_triviality_argument() {
    let b = Built::new(BUILTIN_B4);
    let c = |n: &str| b.last().class_of(n).unwrap().clone();
    assert_eq!(c("L2").pair(&c("L4")), 0);
    // e7 meets u1, u3 and also u7: it is not disjoint from the rest of P.
    let e7 = c("e7");
    for (curve, expected) in [("L2", 1), ("L4", 1), ("q1", 1), ("L1", 0), ("q2", 0), ("L3", 0)] {
        assert_eq!(e7.pair(&c(curve)), expected, "e7.{curve}");
    }
}

fn b4_group() -> (Built, PlumbingGraph, blowdown::plumbing::GroupPresentation) {
    let b = Built::new(BUILTIN_B4);
    let g = b.plumbing();
    let p = fundamental_group(&b.seifert()).unwrap();
    (b, g, p)
}

#[test]
fn identification_through_e7_is_rejected() {
    let (b, g, p) = b4_group();
    let facts = GeometricFacts::default()
        .kill("u3", "e15")
        .identify("u1", "u3", "e7");
    match quotient_triviality(&p, &facts, b.last(), &g) {
        Err(PlumbingError::FactValidation { reason, .. }) => {
            assert!(reason.contains("u7"), "{reason}");
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn chain_spheres_cannot_be_killed() {
    let (b, g, p) = b4_group();
    let facts = GeometricFacts::default().kill("u7", "e15");
    assert!(matches!(
        quotient_triviality(&p, &facts, b.last(), &g),
        Err(PlumbingError::MultiVertexLeg(_))
    ));
}

#[test]
fn witness_must_meet_the_sphere_once() {
    let (b, g, p) = b4_group();
    let facts = GeometricFacts::default().kill("u1", "e15");
    assert!(matches!(
        quotient_triviality(&p, &facts, b.last(), &g),
        Err(PlumbingError::FactValidation { .. })
    ));
}

#[test]
fn kill_alone_stalls() {
    let (b, g, p) = b4_group();
    let facts = GeometricFacts::default().kill("u3", "e15");
    match quotient_triviality(&p, &facts, b.last(), &g).unwrap() {
        TrivialityOutcome::Stalled(s) => assert!(!s.surviving.is_empty()),
        TrivialityOutcome::Trivial(_) => panic!("one kill should not suffice"),
    }
}

#[test]
fn seifert_invariant_determines_h1() {
    let fx = Fixtures::reference();
    for (src, pf) in [(BUILTIN_B4, &fx.p), (BUILTIN_C4, &fx.q)] {
        let s = Built::new(src).seifert();
        assert_eq!(s.h1_order(), int(pf.determinant));
    }
}

// Star-shaped plumbing with the same weights as the reference P, vertex
// names permuted.
fn star(perm: &[usize]) -> PlumbingGraph {
    let fx = Fixtures::reference();
    let m = &fx.p.matrix;
    let names: Vec<String> = (0..8).map(|i| format!("w{}", perm[i])).collect();
    let vertices: Vec<(&str, i64)> = (0..8).map(|i| (names[i].as_str(), m[i][i])).collect();
    let mut edges = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            if m[i][j] == 1 {
                edges.push((names[i].as_str(), names[j].as_str()));
            }
        }
    }
    // Present the vertices in permuted order.
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by_key(|&i| perm[i]);
    let shuffled: Vec<(&str, i64)> = order.iter().map(|&i| vertices[i]).collect();
    PlumbingGraph::from_weights(&shuffled, &edges).unwrap()
}

proptest! {
    #[test]
    fn invariants_survive_renumbering(perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle()) {
        let g = star(&perm);
        prop_assert_eq!(g.determinant(), int(1024));
        prop_assert_eq!(g.first_homology().to_string(), "Z/2 + Z/512");
        let s = SeifertInvariant::from_plumbing(&g).unwrap();
        let mut pairs = s.pairs();
        pairs.sort();
        let expected: Vec<_> = [(2, 1), (4, 1), (4, 1), (25, 18)]
            .iter()
            .map(|&(a, b)| (a.into(), b.into()))
            .collect();
        prop_assert_eq!(pairs, expected);
        prop_assert_eq!(s.b0.clone(), 3.into());
    }
}
