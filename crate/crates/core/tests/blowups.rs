mod common;

use blowdown::blowup::{BlowupStep, ConfigError, Configuration, CurveDecl, PointDecl};
use blowdown::scenario::{BUILTIN_B4, BUILTIN_C4};
use blowdown::HomologyClass;
use common::Built;

#[test]
fn both_scripts_share_the_first_eleven_states() {
    let (b, c) = (Built::new(BUILTIN_B4), Built::new(BUILTIN_C4));
    for i in 0..11 {
        for curve in b.states[i].curves() {
            assert_eq!(
                Some(&curve.class),
                c.states[i].curve(&curve.name).map(|c| &c.class),
                "step {} curve {}",
                i + 1,
                curve.name
            );
        }
    }
}

#[test]
fn incidence_graph_matches_pairings() {
    for src in [BUILTIN_B4, BUILTIN_C4] {
        let b = Built::new(src);
        let g = b.last().incidence_graph().unwrap();
        for x in b.last().curves() {
            for y in b.last().curves() {
                if x.name < y.name {
                    assert_eq!(g.weight(&x.name, &y.name), x.class.pair(&y.class));
                }
            }
        }
    }
}

#[test]
fn every_state_conserves_and_satisfies_adjunction() {
    for src in [BUILTIN_B4, BUILTIN_C4] {
        let b = Built::new(src);
        for state in std::iter::once(&b.start).chain(&b.states) {
            assert!(state.invariant_violations().is_empty());
            let k = HomologyClass::canonical(state.blowups());
            for c in state.curves() {
                assert_eq!(k.pair(&c.class) + c.class.square(), -2, "{}", c.name);
            }
        }
    }
}

fn two_lines() -> Configuration {
    Configuration::define(
        &[CurveDecl::new("A", 1), CurveDecl::new("B", 1)],
        &[PointDecl::transverse("X", &["A", "B"])],
    )
    .unwrap()
}

#[test]
fn blown_up_point_goes_stale() {
    let c = two_lines().blow_up(&BlowupStep::at("X")).unwrap();
    assert_eq!(c.residual("A", "B").unwrap(), 0);
    assert!(matches!(
        c.blow_up(&BlowupStep::at("X")),
        Err(ConfigError::StalePoint(_))
    ));
}

#[test]
fn reserved_names_are_refused() {
    let r = Configuration::define(&[CurveDecl::new("e3", 1)], &[]);
    assert!(matches!(r, Err(ConfigError::ReservedName(_))));
}

#[test]
fn bezout_bound_is_enforced() {
    let r = Configuration::define(
        &[CurveDecl::new("A", 1), CurveDecl::new("B", 1)],
        &[
            PointDecl::transverse("X", &["A", "B"]),
            PointDecl::transverse("Y", &["A", "B"]),
        ],
    );
    assert!(matches!(r, Err(ConfigError::Infeasible { .. })));
}
