//! Deterministic simplification of the boundary π₁ under the relations
//! imposed by spheres and disks outside the plumbing.
//!
//! Three fact kinds are accepted, each checked homologically against the
//! ambient configuration before use:
//!
//! * `kill`: a witness curve meets one leg sphere once and the rest of the
//!   plumbing not at all, so that sphere's normal circle bounds a disk.
//! * `identify`: a witness meets two leg spheres once each and nothing else
//!   in the plumbing; their normal circles are identified (taken as equal).
//! * `pierce`: a witness meets the listed spheres once each and nothing
//!   else. Its complement is a punctured sphere, so a product of conjugates
//!   of the listed meridians is trivial.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{abelianization, FirstHomology, GroupPresentation, PlumbingError, PlumbingGraph, Word};
use crate::blowup::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Fact {
    Kill {
        sphere: String,
        witness: String,
    },
    Identify {
        a: String,
        b: String,
        witness: String,
    },
    Pierce {
        witness: String,
        spheres: Vec<String>,
    },
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Kill { sphere, witness } => write!(f, "kill({sphere} via {witness})"),
            Fact::Identify { a, b, witness } => write!(f, "identify({a} ~ {b} via {witness})"),
            Fact::Pierce { witness, spheres } => {
                write!(f, "pierce({witness}: {})", spheres.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricFacts {
    pub facts: Vec<Fact>,
}

impl GeometricFacts {
    pub fn new(facts: Vec<Fact>) -> Self {
        GeometricFacts { facts }
    }

    pub fn kill(mut self, sphere: &str, witness: &str) -> Self {
        self.facts.push(Fact::Kill {
            sphere: sphere.into(),
            witness: witness.into(),
        });
        self
    }

    pub fn identify(mut self, a: &str, b: &str, witness: &str) -> Self {
        self.facts.push(Fact::Identify {
            a: a.into(),
            b: b.into(),
            witness: witness.into(),
        });
        self
    }

    pub fn pierce(mut self, witness: &str, spheres: &[&str]) -> Self {
        self.facts.push(Fact::Pierce {
            witness: witness.into(),
            spheres: spheres.iter().map(|s| s.to_string()).collect(),
        });
        self
    }
}

/// One step of a triviality certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deduction {
    Kill {
        generator: usize,
        fact: usize,
    },
    Identify {
        generator: usize,
        target: usize,
        fact: usize,
    },
    /// `generator^e = 1` for every listed `e`, whose gcd is 1.
    Power { generator: usize, exponents: Vec<i64> },
    /// New relator read off a pierce fact whose surviving terms are `terms`.
    Pierce {
        fact: usize,
        terms: Vec<Word>,
        relator: Word,
    },
    /// `relator` contains `generator` once with exponent ±1, and solving
    /// for it gives `value`.
    Eliminate {
        generator: usize,
        relator: Word,
        value: Word,
    },
}

impl Deduction {
    pub fn render(&self, p: &GroupPresentation, facts: &GeometricFacts) -> String {
        let g = |i: usize| p.generators[i].clone();
        match self {
            Deduction::Kill { generator, fact } => {
                format!("{} = 1  [{}]", g(*generator), facts.facts[*fact])
            }
            Deduction::Identify {
                generator,
                target,
                fact,
            } => format!("{} = {}  [{}]", g(*generator), g(*target), facts.facts[*fact]),
            Deduction::Power {
                generator,
                exponents,
            } => {
                let list: Vec<String> = exponents.iter().map(|e| e.to_string()).collect();
                if exponents.len() == 1 {
                    format!("{} = 1  [{}^{} = 1]", g(*generator), g(*generator), list[0])
                } else {
                    format!("{} = 1  [gcd({}) = 1]", g(*generator), list.join(", "))
                }
            }
            Deduction::Pierce {
                fact,
                terms,
                relator,
            } => {
                let t: Vec<String> = terms.iter().map(|w| p.render(w)).collect();
                format!(
                    "{} = 1  [{}: product of conjugates of {} is 1]",
                    p.render(relator),
                    facts.facts[*fact],
                    t.join(", ")
                )
            }
            Deduction::Eliminate {
                generator,
                relator,
                value,
            } => format!(
                "{} = {}  [from {} = 1]",
                g(*generator),
                p.render(value),
                p.render(relator)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityCertificate {
    pub facts: GeometricFacts,
    pub steps: Vec<Deduction>,
}

impl TrivialityCertificate {
    pub fn log(&self, p: &GroupPresentation) -> Vec<String> {
        self.steps.iter().map(|s| s.render(p, &self.facts)).collect()
    }
}

/// Where the simplification stopped. Not a proof of nontriviality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stall {
    pub steps: Vec<Deduction>,
    pub surviving: Vec<usize>,
    pub relators: Vec<Word>,
    /// Abelianization of the unsimplified presentation.
    pub abelianization: FirstHomology,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrivialityOutcome {
    Trivial(TrivialityCertificate),
    Stalled(Stall),
}

impl TrivialityOutcome {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TrivialityOutcome::Trivial(_))
    }
}

#[derive(Debug, Clone)]
struct PierceState {
    fact: usize,
    terms: Vec<Word>,
    consumed: bool,
}

/// Presentation under simplification, shared by the engine and the checker.
#[derive(Debug, Clone)]
struct State {
    generators: usize,
    subs: BTreeMap<usize, Word>,
    relators: Vec<Word>,
    pierces: Vec<PierceState>,
}

impl State {
    fn new(p: &GroupPresentation, facts: &GeometricFacts) -> Self {
        let pierces = facts
            .facts
            .iter()
            .enumerate()
            .filter_map(|(i, f)| match f {
                Fact::Pierce { spheres, .. } => Some(PierceState {
                    fact: i,
                    terms: spheres.iter().map(|s| p.meridians[s].clone()).collect(),
                    consumed: false,
                }),
                _ => None,
            })
            .collect();
        let mut s = State {
            generators: p.generators.len(),
            subs: BTreeMap::new(),
            relators: p.relators.clone(),
            pierces,
        };
        s.rewrite();
        s
    }

    fn rewrite(&mut self) {
        let mut relators: Vec<Word> = Vec::new();
        for r in &self.relators {
            let w = r.substitute(&self.subs).cyclically_reduced();
            if !w.is_identity() && !relators.contains(&w) {
                relators.push(w);
            }
        }
        self.relators = relators;
        for p in &mut self.pierces {
            p.terms = p
                .terms
                .iter()
                .map(|t| t.substitute(&self.subs).cyclically_reduced())
                .filter(|t| !t.is_identity())
                .collect();
        }
    }

    fn assign(&mut self, g: usize, value: &Word) {
        let value = value.substitute(&self.subs);
        let single = BTreeMap::from([(g, value.clone())]);
        for v in self.subs.values_mut() {
            *v = v.substitute(&single);
        }
        self.subs.insert(g, value);
        self.rewrite();
    }

    fn is_trivial(&self, g: usize) -> bool {
        self.subs.get(&g).is_some_and(Word::is_identity)
    }

    fn all_trivial(&self) -> bool {
        (0..self.generators).all(|g| self.is_trivial(g))
    }

    /// Absolute exponents `e` with `g^e` a current relator.
    fn powers(&self, g: usize) -> Vec<i64> {
        self.relators
            .iter()
            .filter_map(|r| match r.as_power() {
                Some((x, e)) if x == g => Some(e.abs()),
                _ => None,
            })
            .collect()
    }

    fn order_bound(&self, g: usize) -> i64 {
        self.powers(g).into_iter().fold(0, |a, b| a.gcd(&b))
    }

    /// Relator forced by a two-term pierce: from `x·y ~ 1`, `x = g^k`,
    /// `y = g'^m` and `g'^d = 1`, get `g^{k·d/gcd(d,m)} = 1`.
    fn two_term_relator(&self, x: &Word, y: &Word) -> Option<Word> {
        let (g, k) = x.as_power()?;
        let (g2, m) = y.as_power()?;
        if g == g2 {
            return None;
        }
        let d = self.order_bound(g2);
        if d == 0 {
            return None;
        }
        Some(Word::letter(g, k * (d / d.gcd(&m))))
    }

    fn is_new_power(&self, relator: &Word) -> bool {
        let Some((g, e)) = relator.as_power() else {
            return !self.relators.contains(relator);
        };
        let before = self.order_bound(g);
        before == 0 || before.gcd(&e) != before
    }
}

fn solve_for(relator: &Word, g: usize) -> Option<Word> {
    let letters = relator.letters();
    if relator.occurrences(g) != 1 {
        return None;
    }
    let pos = letters.iter().position(|(x, _)| *x == g)?;
    let e = letters[pos].1;
    if e.abs() != 1 {
        return None;
    }
    let a = Word::from_letters(letters[..pos].iter().copied());
    let b = Word::from_letters(letters[pos + 1..].iter().copied());
    Some(if e == 1 {
        a.inverse().concat(&b.inverse())
    } else {
        b.concat(&a)
    })
}

fn fact_error(fact: &Fact, reason: String) -> PlumbingError {
    PlumbingError::FactValidation {
        fact: fact.to_string(),
        reason,
    }
}

/// Homological check of every fact against the ambient configuration.
pub fn validate_facts(
    p: &GroupPresentation,
    facts: &GeometricFacts,
    config: &Configuration,
    plumbing: &PlumbingGraph,
) -> Result<(), PlumbingError> {
    let names: Vec<&str> = plumbing.vertices().iter().map(|v| v.name.as_str()).collect();
    let sphere_class = |n: &str| {
        plumbing
            .vertices()
            .iter()
            .find(|v| v.name == n)
            .and_then(|v| v.class.as_ref())
            .ok_or_else(|| PlumbingError::UnknownCurve(n.to_string()))
    };
    for fact in &facts.facts {
        let (witness, met): (&str, Vec<&str>) = match fact {
            Fact::Kill { sphere, witness } => (witness, vec![sphere]),
            Fact::Identify { a, b, witness } => (witness, vec![a, b]),
            Fact::Pierce { witness, spheres } => {
                (witness, spheres.iter().map(String::as_str).collect())
            }
        };
        let witness_is_sphere = plumbing
            .vertices()
            .iter()
            .any(|v| v.name == witness || v.curve.as_deref() == Some(witness));
        if witness_is_sphere {
            return Err(fact_error(
                fact,
                format!("witness {witness} is a sphere of the plumbing"),
            ));
        }
        if met.is_empty() {
            return Err(fact_error(fact, "no spheres listed".into()));
        }
        for (i, s) in met.iter().enumerate() {
            if !names.contains(s) {
                return Err(fact_error(fact, format!("{s} is not a sphere of the plumbing")));
            }
            if met[..i].contains(s) {
                return Err(fact_error(fact, format!("{s} is listed twice")));
            }
        }
        if !matches!(fact, Fact::Pierce { .. }) {
            for s in &met {
                if !p.leaves.contains_key(*s) {
                    return if p.meridians.contains_key(*s) && Some(s.to_string()) != center(p) {
                        Err(PlumbingError::MultiVertexLeg(s.to_string()))
                    } else {
                        Err(fact_error(fact, format!("{s} is not the sphere of a leg")))
                    };
                }
            }
        }
        let w = config
            .class_of(witness)
            .map_err(|_| PlumbingError::UnknownCurve(witness.to_string()))?;
        for s in &names {
            let product = w.pair(sphere_class(s)?);
            let expected = met.contains(s) as i64;
            if product != expected {
                return Err(fact_error(
                    fact,
                    format!("{witness}·{s} = {product}, expected {expected}"),
                ));
            }
        }
        if let Fact::Identify { a, b, .. } = fact {
            let product = sphere_class(a)?.pair(sphere_class(b)?);
            if product != 0 {
                return Err(fact_error(fact, format!("{a}·{b} = {product}, expected 0")));
            }
        }
    }
    Ok(())
}

fn center(p: &GroupPresentation) -> Option<String> {
    let h = Word::letter(p.h(), -1);
    p.meridians
        .iter()
        .find(|(_, w)| **w == h)
        .map(|(n, _)| n.clone())
}

/// Validate the facts, then simplify: facts in order, followed by the
/// rules below, each pass restarting at the first rule that fires.
///
/// 1. a generator whose pure-power relators have exponent gcd 1 is trivial;
/// 2. a pierce fact with two surviving single-power terms transfers the
///    order bound of one to the other;
/// 3. a generator occurring once with exponent ±1 in a relator is
///    eliminated (relators in order, highest generator first);
/// 4. a pierce fact with one surviving term makes that term a relator.
pub fn quotient_triviality(
    p: &GroupPresentation,
    facts: &GeometricFacts,
    config: &Configuration,
    plumbing: &PlumbingGraph,
) -> Result<TrivialityOutcome, PlumbingError> {
    validate_facts(p, facts, config, plumbing)?;
    let mut state = State::new(p, facts);
    let mut steps = Vec::new();
    for (i, fact) in facts.facts.iter().enumerate() {
        match fact {
            Fact::Kill { sphere, .. } => {
                let g = p.leaves[sphere];
                state.assign(g, &Word::identity());
                steps.push(Deduction::Kill {
                    generator: g,
                    fact: i,
                });
            }
            Fact::Identify { a, b, .. } => {
                let (g, t) = (p.leaves[a], p.leaves[b]);
                state.assign(g, &Word::letter(t, 1));
                steps.push(Deduction::Identify {
                    generator: g,
                    target: t,
                    fact: i,
                });
            }
            Fact::Pierce { .. } => {}
        }
    }

    while !state.all_trivial() {
        if let Some(step) = next_step(&state) {
            apply(&mut state, &step);
            steps.push(step);
        } else {
            let surviving = (0..state.generators)
                .filter(|g| !state.subs.contains_key(g))
                .collect();
            return Ok(TrivialityOutcome::Stalled(Stall {
                steps,
                surviving,
                relators: state.relators,
                abelianization: abelianization(p),
            }));
        }
    }
    Ok(TrivialityOutcome::Trivial(TrivialityCertificate {
        facts: facts.clone(),
        steps,
    }))
}

fn next_step(state: &State) -> Option<Deduction> {
    for g in 0..state.generators {
        if state.subs.contains_key(&g) {
            continue;
        }
        let exponents = state.powers(g);
        if exponents.iter().fold(0, |a, b| a.gcd(b)) == 1 {
            return Some(Deduction::Power {
                generator: g,
                exponents,
            });
        }
    }
    for pierce in state.pierces.iter().filter(|p| !p.consumed) {
        if let [x, y] = pierce.terms.as_slice() {
            for (x, y) in [(x, y), (y, x)] {
                if let Some(relator) = state.two_term_relator(x, y) {
                    if state.is_new_power(&relator) {
                        return Some(Deduction::Pierce {
                            fact: pierce.fact,
                            terms: pierce.terms.clone(),
                            relator,
                        });
                    }
                }
            }
        }
    }
    for relator in &state.relators {
        for g in relator.generators().into_iter().rev() {
            if let Some(value) = solve_for(relator, g) {
                return Some(Deduction::Eliminate {
                    generator: g,
                    relator: relator.clone(),
                    value,
                });
            }
        }
    }
    for pierce in state.pierces.iter().filter(|p| !p.consumed) {
        if let [only] = pierce.terms.as_slice() {
            return Some(Deduction::Pierce {
                fact: pierce.fact,
                terms: pierce.terms.clone(),
                relator: only.clone(),
            });
        }
    }
    None
}

fn apply(state: &mut State, step: &Deduction) {
    match step {
        Deduction::Kill { generator, .. } | Deduction::Power { generator, .. } => {
            state.assign(*generator, &Word::identity())
        }
        Deduction::Identify {
            generator, target, ..
        } => state.assign(*generator, &Word::letter(*target, 1)),
        Deduction::Pierce { fact, relator, .. } => {
            let pierce = state.pierces.iter_mut().find(|p| p.fact == *fact).unwrap();
            if pierce.terms.len() == 1 {
                pierce.consumed = true;
            }
            state.relators.push(relator.clone());
            state.rewrite();
        }
        Deduction::Eliminate {
            generator,
            relator,
            value,
        } => {
            state.relators.retain(|r| r != relator);
            state.assign(*generator, value);
        }
    }
}

/// Replay a certificate step by step, re-checking each justification.
pub fn check_certificate(
    p: &GroupPresentation,
    cert: &TrivialityCertificate,
) -> Result<(), String> {
    let facts = &cert.facts;
    let mut state = State::new(p, facts);
    for (n, step) in cert.steps.iter().enumerate() {
        let fail = |why: &str| Err(format!("step {}: {why}", n + 1));
        match step {
            Deduction::Kill { generator, fact } => match facts.facts.get(*fact) {
                Some(Fact::Kill { sphere, .. }) if p.leaves.get(sphere) == Some(generator) => {}
                _ => return fail("no matching kill fact"),
            },
            Deduction::Identify {
                generator,
                target,
                fact,
            } => match facts.facts.get(*fact) {
                Some(Fact::Identify { a, b, .. })
                    if p.leaves.get(a) == Some(generator) && p.leaves.get(b) == Some(target) => {}
                _ => return fail("no matching identify fact"),
            },
            Deduction::Power {
                generator,
                exponents,
            } => {
                let have = state.powers(*generator);
                if exponents.iter().any(|e| !have.contains(e)) {
                    return fail("a cited power is not a relator");
                }
                if exponents.iter().fold(0, |a, b| a.gcd(b)) != 1 {
                    return fail("exponents are not coprime");
                }
            }
            Deduction::Pierce {
                fact,
                terms,
                relator,
            } => {
                let Some(pierce) = state.pierces.iter().find(|q| q.fact == *fact && !q.consumed)
                else {
                    return fail("no open pierce fact");
                };
                if &pierce.terms != terms {
                    return fail("pierce terms differ from the replayed state");
                }
                let ok = match terms.as_slice() {
                    [only] => only == relator,
                    [x, y] => {
                        state.two_term_relator(x, y).as_ref() == Some(relator)
                            || state.two_term_relator(y, x).as_ref() == Some(relator)
                    }
                    _ => false,
                };
                if !ok {
                    return fail("relator does not follow from the pierce fact");
                }
            }
            Deduction::Eliminate {
                generator,
                relator,
                value,
            } => {
                if !state.relators.contains(relator) {
                    return fail("cited relator is not current");
                }
                let once = relator.occurrences(*generator) == 1
                    && relator.exponent_sum(*generator).abs() == 1;
                if !once || value.occurrences(*generator) != 0 {
                    return fail("generator does not occur exactly once with exponent ±1");
                }
                let check = relator.substitute(&BTreeMap::from([(*generator, value.clone())]));
                if !check.cyclically_reduced().is_identity() {
                    return fail("value does not solve the relator");
                }
            }
        }
        apply(&mut state, step);
    }
    if state.all_trivial() {
        Ok(())
    } else {
        Err("certificate ends with nontrivial generators".into())
    }
}
