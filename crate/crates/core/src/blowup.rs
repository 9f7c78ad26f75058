//! Homology and intersection bookkeeping for plane curves through a
//! sequence of blow-ups.
//!
//! A [`Configuration`] tracks every curve's class, the named intersection
//! points still available for blowing up ("live" points, each carrying
//! pairwise local multiplicities of smooth branches), and the residual
//! count of anonymous intersections per pair. The invariant
//! `class(c)·class(c') = residual(c, c') + Σ live multiplicities`
//! holds for every pair after every step.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::homology::HomologyClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point `{0}` was already blown up")]
    StalePoint(String),
    #[error("name `{0}` is used twice")]
    DuplicateName(String),
    #[error("name `{0}` is reserved (exceptional curves are named e1, e2, …; `:` and `+` are not allowed)")]
    ReservedName(String),
    #[error("curve `{curve}` has degree {degree}; only lines and conics are supported")]
    BadDegree { curve: String, degree: u32 },
    #[error("point `{0}` lies on no curve")]
    EmptyPoint(String),
    #[error("point `{point}`: pair ({a}, {b}) is not a pair of distinct branches through the point")]
    PairNotIncident { point: String, a: String, b: String },
    #[error("point `{point}`: multiplicity of ({a}, {b}) must be at least 1")]
    BadMultiplicity { point: String, a: String, b: String },
    #[error("curves {a} and {b} are declared to meet {declared} times but Bezout allows {bound}")]
    Infeasible {
        a: String,
        b: String,
        declared: u32,
        bound: u32,
    },
    #[error("point `{point}`: {a} and {c} share a tangent with {b} but not with each other")]
    DirectionAmbiguity {
        point: String,
        a: String,
        b: String,
        c: String,
    },
    #[error("curves {a} and {b} have negative intersection {product}")]
    EmbeddingInconsistency { a: String, b: String, product: i64 },
    #[error("script step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<ConfigError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveOrigin {
    Plane { degree: u32 },
    Exceptional { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub name: String,
    pub origin: CurveOrigin,
    pub class: HomologyClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveDecl {
    pub name: String,
    pub degree: u32,
}

impl CurveDecl {
    pub fn new(name: &str, degree: u32) -> Self {
        CurveDecl {
            name: name.to_string(),
            degree,
        }
    }
}

/// Declared intersection point. Pairs of branches not listed in
/// `multiplicities` meet transversally (multiplicity 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDecl {
    pub name: String,
    pub branches: Vec<String>,
    pub multiplicities: Vec<(String, String, u32)>,
}

impl PointDecl {
    pub fn transverse(name: &str, branches: &[&str]) -> Self {
        PointDecl {
            name: name.to_string(),
            branches: branches.iter().map(|s| s.to_string()).collect(),
            multiplicities: Vec::new(),
        }
    }

    pub fn with_multiplicity(mut self, a: &str, b: &str, m: u32) -> Self {
        self.multiplicities.push((a.to_string(), b.to_string(), m));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupStep {
    AtPoint(String),
    GenericOnCurve(String),
}

impl BlowupStep {
    pub fn at(point: &str) -> Self {
        BlowupStep::AtPoint(point.to_string())
    }

    pub fn on(curve: &str) -> Self {
        BlowupStep::GenericOnCurve(curve.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LivePoint {
    name: String,
    branches: Vec<usize>,
    mult: BTreeMap<(usize, usize), u32>,
}

impl LivePoint {
    fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.mult.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    /// Branch sets sharing a tangent direction, ordered by smallest member.
    fn direction_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &b in &self.branches {
            match classes
                .iter_mut()
                .find(|cls| cls.iter().any(|&x| self.multiplicity(x, b) >= 2))
            {
                Some(cls) => cls.push(b),
                None => classes.push(vec![b]),
            }
        }
        classes
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_reserved(name: &str) -> bool {
    let exceptional = name
        .strip_prefix('e')
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()));
    exceptional || name.is_empty() || name.contains([':', '+'])
}

/// Live point as seen from outside: names and multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointView {
    pub name: String,
    pub branches: Vec<String>,
    pub multiplicities: Vec<(String, String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceVertex {
    pub name: String,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceEdge {
    pub a: String,
    pub b: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceGraph {
    pub vertices: Vec<IncidenceVertex>,
    pub edges: Vec<IncidenceEdge>,
}

impl IncidenceGraph {
    pub fn weight(&self, a: &str, b: &str) -> i64 {
        self.edges
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map_or(0, |e| e.weight)
    }

    pub fn neighbours(&self, name: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.a == name {
                    Some(e.b.as_str())
                } else if e.b == name {
                    Some(e.a.as_str())
                } else {
                    None
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    k: usize,
    curves: Vec<Curve>,
    points: Vec<LivePoint>,
    consumed: BTreeSet<String>,
    residual: BTreeMap<(usize, usize), i64>,
}

impl Configuration {
    pub fn define(curves: &[CurveDecl], points: &[PointDecl]) -> Result<Self, ConfigError> {
        let mut seen = BTreeSet::new();
        let mut out_curves = Vec::new();
        for c in curves {
            if is_reserved(&c.name) {
                return Err(ConfigError::ReservedName(c.name.clone()));
            }
            if !seen.insert(c.name.clone()) {
                return Err(ConfigError::DuplicateName(c.name.clone()));
            }
            if !(1..=2).contains(&c.degree) {
                return Err(ConfigError::BadDegree {
                    curve: c.name.clone(),
                    degree: c.degree,
                });
            }
            out_curves.push(Curve {
                name: c.name.clone(),
                origin: CurveOrigin::Plane { degree: c.degree },
                class: HomologyClass::line().scaled(c.degree as i64),
            });
        }
        let mut config = Configuration {
            k: 0,
            curves: out_curves,
            points: Vec::new(),
            consumed: BTreeSet::new(),
            residual: BTreeMap::new(),
        };

        for p in points {
            if is_reserved(&p.name) {
                return Err(ConfigError::ReservedName(p.name.clone()));
            }
            if !seen.insert(p.name.clone()) {
                return Err(ConfigError::DuplicateName(p.name.clone()));
            }
            if p.branches.is_empty() {
                return Err(ConfigError::EmptyPoint(p.name.clone()));
            }
            let mut branches = Vec::new();
            for b in &p.branches {
                let idx = config.index(b)?;
                if branches.contains(&idx) {
                    return Err(ConfigError::DuplicateName(b.clone()));
                }
                branches.push(idx);
            }
            branches.sort_unstable();
            let mut mult = BTreeMap::new();
            for (i, &a) in branches.iter().enumerate() {
                for &b in &branches[i + 1..] {
                    mult.insert((a, b), 1);
                }
            }
            for (a, b, m) in &p.multiplicities {
                let not_incident = || ConfigError::PairNotIncident {
                    point: p.name.clone(),
                    a: a.clone(),
                    b: b.clone(),
                };
                let ia = config.index(a).map_err(|_| not_incident())?;
                let ib = config.index(b).map_err(|_| not_incident())?;
                if ia == ib || !branches.contains(&ia) || !branches.contains(&ib) {
                    return Err(not_incident());
                }
                if *m == 0 {
                    return Err(ConfigError::BadMultiplicity {
                        point: p.name.clone(),
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
                mult.insert(ordered(ia, ib), *m);
            }
            let point = LivePoint {
                name: p.name.clone(),
                branches,
                mult,
            };
            config.check_directions(&point)?;
            config.points.push(point);
        }

        let n = config.curves.len();
        for a in 0..n {
            for b in a + 1..n {
                let declared: u32 = config.points.iter().map(|p| p.multiplicity(a, b)).sum();
                let bound = (config.degree(a) * config.degree(b)) as u32;
                if declared > bound {
                    return Err(ConfigError::Infeasible {
                        a: config.curves[a].name.clone(),
                        b: config.curves[b].name.clone(),
                        declared,
                        bound,
                    });
                }
                config.residual.insert((a, b), (bound - declared) as i64);
            }
        }
        Ok(config)
    }

    fn degree(&self, idx: usize) -> i64 {
        match self.curves[idx].origin {
            CurveOrigin::Plane { degree } => degree as i64,
            CurveOrigin::Exceptional { .. } => 0,
        }
    }

    fn check_directions(&self, p: &LivePoint) -> Result<(), ConfigError> {
        for &a in &p.branches {
            for &b in &p.branches {
                for &c in &p.branches {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    if p.multiplicity(a, b) >= 2
                        && p.multiplicity(b, c) >= 2
                        && p.multiplicity(a, c) < 2
                    {
                        return Err(ConfigError::DirectionAmbiguity {
                            point: p.name.clone(),
                            a: self.curves[a].name.clone(),
                            b: self.curves[b].name.clone(),
                            c: self.curves[c].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn index(&self, name: &str) -> Result<usize, ConfigError> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| ConfigError::UnknownCurve(name.to_string()))
    }

    /// Number of blow-ups performed so far.
    pub fn blowups(&self) -> usize {
        self.k
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn class_of(&self, name: &str) -> Result<&HomologyClass, ConfigError> {
        Ok(&self.curves[self.index(name)?].class)
    }

    pub fn residual(&self, a: &str, b: &str) -> Result<i64, ConfigError> {
        let (ia, ib) = (self.index(a)?, self.index(b)?);
        Ok(self.residual.get(&ordered(ia, ib)).copied().unwrap_or(0))
    }

    pub fn live_points(&self) -> Vec<PointView> {
        self.points
            .iter()
            .map(|p| PointView {
                name: p.name.clone(),
                branches: p.branches.iter().map(|&b| self.curves[b].name.clone()).collect(),
                multiplicities: p
                    .mult
                    .iter()
                    .map(|(&(a, b), &m)| (self.curves[a].name.clone(), self.curves[b].name.clone(), m))
                    .collect(),
            })
            .collect()
    }

    pub fn blow_up(&self, step: &BlowupStep) -> Result<Configuration, ConfigError> {
        let mut next = self.clone();
        next.k += 1;
        let k = next.k;
        let exceptional = HomologyClass::exceptional(k);
        let new_idx = next.curves.len();
        let e_name = format!("e{k}");
        next.curves.push(Curve {
            name: e_name.clone(),
            origin: CurveOrigin::Exceptional { index: k },
            class: exceptional.clone(),
        });

        match step {
            BlowupStep::AtPoint(name) => {
                let pos = match self.points.iter().position(|p| &p.name == name) {
                    Some(pos) => pos,
                    None if self.consumed.contains(name) => {
                        return Err(ConfigError::StalePoint(name.clone()))
                    }
                    None => return Err(ConfigError::UnknownPoint(name.clone())),
                };
                let point = next.points.remove(pos);
                next.consumed.insert(point.name.clone());
                for &b in &point.branches {
                    next.curves[b].class = next.curves[b].class.sub(&exceptional);
                }
                for class in point.direction_classes() {
                    let label: Vec<&str> =
                        class.iter().map(|&b| next.curves[b].name.as_str()).collect();
                    let mut mult = BTreeMap::new();
                    for (i, &a) in class.iter().enumerate() {
                        for &b in &class[i + 1..] {
                            mult.insert(ordered(a, b), point.multiplicity(a, b) - 1);
                        }
                        mult.insert((a, new_idx), 1);
                    }
                    let mut branches = class.clone();
                    branches.push(new_idx);
                    next.points.push(LivePoint {
                        name: format!("{e_name}:{}", label.join("+")),
                        branches,
                        mult,
                    });
                }
            }
            BlowupStep::GenericOnCurve(name) => {
                let idx = self.index(name)?;
                next.curves[idx].class = next.curves[idx].class.sub(&exceptional);
                next.points.push(LivePoint {
                    name: format!("{e_name}:{name}"),
                    branches: vec![idx, new_idx],
                    mult: BTreeMap::from([((idx, new_idx), 1)]),
                });
            }
        }
        Ok(next)
    }

    pub fn run_script(&self, steps: &[BlowupStep]) -> Result<Configuration, ConfigError> {
        Ok(self.run_script_traced(steps)?.pop().unwrap_or_else(|| self.clone()))
    }

    /// Every intermediate state, excluding the starting one.
    pub fn run_script_traced(
        &self,
        steps: &[BlowupStep],
    ) -> Result<Vec<Configuration>, ConfigError> {
        let mut states: Vec<Configuration> = Vec::with_capacity(steps.len());
        for (i, step) in steps.iter().enumerate() {
            let current = states.last().unwrap_or(self);
            let next = current.blow_up(step).map_err(|e| ConfigError::Step {
                index: i + 1,
                source: Box::new(e),
            })?;
            states.push(next);
        }
        Ok(states)
    }

    pub fn incidence_graph(&self) -> Result<IncidenceGraph, ConfigError> {
        let vertices = self
            .curves
            .iter()
            .map(|c| IncidenceVertex {
                name: c.name.clone(),
                self_intersection: c.class.square(),
            })
            .collect();
        let mut edges = Vec::new();
        for (i, a) in self.curves.iter().enumerate() {
            for b in &self.curves[i + 1..] {
                let product = a.class.pair(&b.class);
                if product < 0 {
                    return Err(ConfigError::EmbeddingInconsistency {
                        a: a.name.clone(),
                        b: b.name.clone(),
                        product,
                    });
                }
                if product > 0 {
                    edges.push(IncidenceEdge {
                        a: a.name.clone(),
                        b: b.name.clone(),
                        weight: product,
                    });
                }
            }
        }
        Ok(IncidenceGraph { vertices, edges })
    }

    /// Conservation and Bezout feasibility, as a list of human-readable
    /// violations (empty when everything holds).
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.curves.len();
        for a in 0..n {
            for b in a + 1..n {
                let residual = self.residual.get(&(a, b)).copied().unwrap_or(0);
                if residual < 0 {
                    out.push(format!(
                        "negative residual for ({}, {})",
                        self.curves[a].name, self.curves[b].name
                    ));
                }
                let live: i64 = self.points.iter().map(|p| p.multiplicity(a, b) as i64).sum();
                let product = self.curves[a].class.pair(&self.curves[b].class);
                if product != residual + live {
                    out.push(format!(
                        "({}, {}): product {product} != residual {residual} + live {live}",
                        self.curves[a].name, self.curves[b].name
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_lines() -> Configuration {
        Configuration::define(&[CurveDecl::new("A", 1), CurveDecl::new("B", 1)], &[]).unwrap()
    }

    #[test]
    fn generic_lines_meet_once() {
        let c = two_lines();
        assert_eq!(c.residual("A", "B").unwrap(), 1);
        let g = c.incidence_graph().unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.weight("A", "B"), 1);
    }

    #[test]
    fn bezout_violation_names_the_pair() {
        let err = Configuration::define(
            &[CurveDecl::new("L", 1), CurveDecl::new("Q", 2)],
            &[
                PointDecl::transverse("X", &["L", "Q"]),
                PointDecl::transverse("Y", &["L", "Q"]),
                PointDecl::transverse("Z", &["L", "Q"]),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ConfigError::Infeasible {
                a: "L".into(),
                b: "Q".into(),
                declared: 3,
                bound: 2
            }
        );
    }

    #[test]
    fn intransitive_tangency_is_rejected() {
        let err = Configuration::define(
            &[CurveDecl::new("A", 2), CurveDecl::new("B", 2), CurveDecl::new("C", 2)],
            &[PointDecl::transverse("X", &["A", "B", "C"])
                .with_multiplicity("A", "B", 2)
                .with_multiplicity("B", "C", 2)],
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::DirectionAmbiguity { .. }));
    }

    #[test]
    fn declarations_are_validated() {
        let lines = [CurveDecl::new("A", 1)];
        assert!(matches!(
            Configuration::define(&[CurveDecl::new("C", 3)], &[]),
            Err(ConfigError::BadDegree { .. })
        ));
        assert!(matches!(
            Configuration::define(&[CurveDecl::new("e4", 1)], &[]),
            Err(ConfigError::ReservedName(_))
        ));
        assert!(matches!(
            Configuration::define(&lines, &[PointDecl::transverse("P", &["Z"])]),
            Err(ConfigError::UnknownCurve(_))
        ));
        assert!(matches!(
            Configuration::define(
                &lines,
                &[PointDecl::transverse("P", &["A"]).with_multiplicity("A", "A", 2)]
            ),
            Err(ConfigError::PairNotIncident { .. })
        ));
    }

    #[test]
    fn blowing_up_a_point_on_one_curve_is_local() {
        let c = Configuration::define(
            &[CurveDecl::new("A", 1), CurveDecl::new("B", 1), CurveDecl::new("C", 2)],
            &[PointDecl::transverse("P", &["A"])],
        )
        .unwrap();
        let d = c.blow_up(&BlowupStep::at("P")).unwrap();
        assert_eq!(d.class_of("A").unwrap().to_string(), "h - e1");
        assert_eq!(d.class_of("B").unwrap(), c.class_of("B").unwrap());
        assert_eq!(d.class_of("C").unwrap(), c.class_of("C").unwrap());
        for (x, y) in [("A", "B"), ("A", "C"), ("B", "C")] {
            let before = c.class_of(x).unwrap().pair(c.class_of(y).unwrap());
            let after = d.class_of(x).unwrap().pair(d.class_of(y).unwrap());
            assert_eq!(before, after);
        }
        assert!(d.invariant_violations().is_empty());
    }

    #[test]
    fn tangency_needs_two_blowups_to_separate() {
        let c = Configuration::define(
            &[CurveDecl::new("Q", 2), CurveDecl::new("T", 1)],
            &[PointDecl::transverse("P", &["Q", "T"]).with_multiplicity("Q", "T", 2)],
        )
        .unwrap();
        let d = c.blow_up(&BlowupStep::at("P")).unwrap();
        assert_eq!(
            d.live_points()[0],
            PointView {
                name: "e1:Q+T".into(),
                branches: vec!["Q".into(), "T".into(), "e1".into()],
                multiplicities: vec![
                    ("Q".into(), "T".into(), 1),
                    ("Q".into(), "e1".into(), 1),
                    ("T".into(), "e1".into(), 1)
                ],
            }
        );
        let e = d.blow_up(&BlowupStep::at("e1:Q+T")).unwrap();
        assert_eq!(e.class_of("Q").unwrap().pair(e.class_of("T").unwrap()), 0);
        assert_eq!(e.class_of("e1").unwrap().to_string(), "e1 - e2");
        assert!(e.invariant_violations().is_empty());
        assert_eq!(
            e.blow_up(&BlowupStep::at("P")),
            Err(ConfigError::StalePoint("P".into()))
        );
    }

    #[test]
    fn script_errors_carry_the_step() {
        let err = two_lines()
            .run_script(&[BlowupStep::on("A"), BlowupStep::on("Nope")])
            .unwrap_err();
        assert_eq!(
            err,
            ConfigError::Step {
                index: 2,
                source: Box::new(ConfigError::UnknownCurve("Nope".into()))
            }
        );
        assert_eq!(two_lines().run_script(&[]).unwrap(), two_lines());
        assert!(matches!(
            two_lines().blow_up(&BlowupStep::at("nowhere")),
            Err(ConfigError::UnknownPoint(_))
        ));
    }
}
