use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::report::*;
use super::{ScenarioError, ScenarioFile};
use crate::blowup::{BlowupStep, Configuration};
use crate::field::{bezout_audit, certify_contact, Contact, HomogeneousPoly, ProjectivePoint};
use crate::homology::HomologyClass;
use crate::kernel::{invert, is_negative_definite, Rational, RationalRepr};
use crate::plumbing::{
    abelianization, check_certificate, fundamental_group, quotient_triviality, GeometricFacts,
    PlumbingError, PlumbingGraph, SeifertInvariant, TrivialityOutcome,
};
use crate::surgery::{
    sign_lemma_property, surgery_report, Ambient, HomeoType, Verdict,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the scenario's sampler seed.
    pub seed: Option<u64>,
    /// Overrides the scenario's expected homeomorphism type.
    pub expect: Option<String>,
    /// Overrides the scenario's sign-lemma sample count.
    pub samples: Option<usize>,
}

const DEFAULT_SAMPLES: usize = 10_000;
const DEFAULT_SEED: u64 = 0;

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Parse(format!("{}: {e}", path.display())))
}

pub fn run(path: &Path, opts: &RunOptions) -> Result<Report, ScenarioError> {
    run_source(&read(path)?, opts)
}

pub fn verify_config(path: &Path) -> Result<VerifyReport, ScenarioError> {
    verify_source(&read(path)?)
}

pub fn verify_source(source: &str) -> Result<VerifyReport, ScenarioError> {
    certify(&ScenarioFile::parse(source)?)
}

fn certify(file: &ScenarioFile) -> Result<VerifyReport, ScenarioError> {
    const STAGE: &str = "certification";
    let mut report = VerifyReport::default();
    let mut polys: Vec<(&str, HomogeneousPoly)> = Vec::new();
    for c in &file.curves {
        if let Some(terms) = &c.polynomial {
            let poly = HomogeneousPoly::parse(
                c.degree,
                terms.iter().map(|(m, k)| (m.as_str(), k.as_str())),
            )
            .map_err(|e| ScenarioError::validation(STAGE, format!("curve {}: {e}", c.name)))?;
            polys.push((c.name.as_str(), poly));
        }
    }
    if polys.is_empty() {
        report.warning = Some("no curve carries a polynomial; certification skipped".into());
        return Ok(report);
    }

    let mut located = Vec::new();
    for p in file.points.iter().chain(&file.certify.points) {
        if let Some(coords) = &p.coords {
            let refs = [coords[0].as_str(), coords[1].as_str(), coords[2].as_str()];
            let pt = ProjectivePoint::parse(&refs)
                .map_err(|e| ScenarioError::validation(STAGE, format!("point {}: {e}", p.name)))?;
            located.push((p, pt));
        }
    }

    for (p, pt) in &located {
        for (name, poly) in &polys {
            if p.branches.iter().any(|b| b == name) && !poly.evaluate(pt).is_zero() {
                report
                    .failures
                    .push(format!("{name} does not vanish at {}", p.name));
            }
        }
        for (i, (a, pa)) in polys.iter().enumerate() {
            for (b, pb) in &polys[i + 1..] {
                let Some(expected) = p.multiplicity(a, b) else {
                    continue;
                };
                let certified = certify_contact(pa, pb, pt);
                let ok = certified.multiplicity() == expected;
                if !ok {
                    let want = match expected {
                        1 => "transverse".to_string(),
                        2 => "tangent".to_string(),
                        m => format!("multiplicity {m}"),
                    };
                    report.failures.push(format!(
                        "contact of {a} and {b} at {}: expected {want}, certified {}",
                        p.name,
                        match certified {
                            Contact::Tangent => "tangent",
                            Contact::Transverse => "transverse",
                            Contact::NotOnBoth => "not on both curves",
                        }
                    ));
                }
                report.contacts.push(ContactCheck {
                    a: a.to_string(),
                    b: b.to_string(),
                    point: p.name.clone(),
                    expected: Some(expected),
                    certified,
                    ok,
                });
            }
        }
    }

    for (i, (a, pa)) in polys.iter().enumerate() {
        for (b, pb) in &polys[i + 1..] {
            let points: Vec<(String, &ProjectivePoint)> =
                located.iter().map(|(p, pt)| (p.name.clone(), pt)).collect();
            let audit = bezout_audit(pa, pb, &points);
            if audit.overflow {
                report.failures.push(format!(
                    "Bezout audit of {a} and {b}: {} exceeds {}",
                    audit.total, audit.bound
                ));
            }
            report.audits.push(AuditEntry {
                a: a.to_string(),
                b: b.to_string(),
                contacts: audit
                    .contacts
                    .into_iter()
                    .filter(|(_, c)| *c != Contact::NotOnBoth)
                    .collect(),
                total: audit.total,
                bound: audit.bound,
                complete: audit.complete,
            });
        }
    }
    Ok(report)
}

fn summary(name: &str, class: &HomologyClass) -> CurveSummary {
    CurveSummary {
        name: name.to_string(),
        class: class.to_string(),
        self_intersection: class.square(),
    }
}

fn big(n: &BigInt) -> String {
    n.to_string()
}

/// `(p, N)` with `m = p·N`, `N` integral and `p = ±1/L`.
pub(crate) fn scaled_inverse(inv: &[Vec<Rational>]) -> (Rational, Vec<Vec<BigInt>>) {
    let l = inv
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let negative = inv
        .iter()
        .flatten()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    let prefactor = Rational::new(if negative { -BigInt::one() } else { BigInt::one() }, l);
    let scaled = inv
        .iter()
        .map(|row| row.iter().map(|x| (x / &prefactor).to_integer()).collect())
        .collect();
    (prefactor, scaled)
}

fn plumbing_err(stage: &str, e: PlumbingError) -> ScenarioError {
    match e {
        PlumbingError::Kernel(k) => ScenarioError::internal(stage, k),
        PlumbingError::Overflow => ScenarioError::internal(stage, e),
        other => ScenarioError::validation(stage, other),
    }
}

pub fn run_source(source: &str, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let file = ScenarioFile::parse(source)?;
    let mut failures = Vec::new();
    let mut checks = Vec::new();

    let config = Configuration::define(&file.curve_decls(), &file.point_decls())
        .map_err(|e| ScenarioError::validation("configuration", e))?;
    let mut residuals = Vec::new();
    for (i, a) in file.curves.iter().enumerate() {
        for b in &file.curves[i + 1..] {
            let r = config.residual(&a.name, &b.name).unwrap_or(0);
            if r != 0 {
                residuals.push((a.name.clone(), b.name.clone(), r));
            }
        }
    }
    let configuration = ConfigurationStage {
        curves: file.curves.iter().map(|c| (c.name.clone(), c.degree)).collect(),
        points: file.points.iter().map(|p| p.name.clone()).collect(),
        residuals,
    };

    let certification = certify(&file)?;
    if certification.warning.is_none() {
        checks.push(Check {
            name: "coordinates certify every declared contact".into(),
            ok: certification.ok(),
        });
    }
    failures.extend(certification.failures.iter().map(|f| format!("certification: {f}")));

    let steps = file.steps()?;
    let states = config
        .run_script_traced(&steps)
        .map_err(|e| ScenarioError::validation("script", e))?;
    let mut conservation = config.invariant_violations().is_empty();
    let mut adjunction = true;
    for state in std::iter::once(&config).chain(&states) {
        conservation &= state.invariant_violations().is_empty();
        let k = HomologyClass::canonical(state.blowups());
        adjunction &= state
            .curves()
            .iter()
            .all(|c| k.pair(&c.class) + c.class.square() == -2);
    }
    checks.push(Check {
        name: "intersection conservation after every blow-up".into(),
        ok: conservation,
    });
    checks.push(Check {
        name: "sphere adjunction K.C + C.C = -2 in every state".into(),
        ok: adjunction,
    });
    if !conservation || !adjunction {
        failures.push("blowups: invariant violated".into());
    }
    let last = states.last().unwrap_or(&config);
    let graph = last
        .incidence_graph()
        .map_err(|e| ScenarioError::internal("blowups", e))?;
    let blowups = BlowupStage {
        k: last.blowups(),
        steps: steps
            .iter()
            .map(|s| match s {
                BlowupStep::AtPoint(p) => format!("at {p}"),
                BlowupStep::GenericOnCurve(c) => format!("on {c}"),
            })
            .collect(),
        curves: last.curves().iter().map(|c| summary(&c.name, &c.class)).collect(),
        incidence: graph.edges,
    };

    let mut report = Report {
        scenario: file.name.clone().unwrap_or_else(|| "unnamed".into()),
        stages: Stages {
            configuration,
            certification,
            blowups,
            plumbing: None,
            seifert: None,
            pi1: None,
            surgery: None,
        },
        checks,
        failures,
    };
    let Some(section) = &file.plumbing else {
        return Ok(report);
    };

    let labeled: Vec<(&str, &str)> = section
        .spheres
        .iter()
        .map(|s| (s.label.as_str(), s.curve.as_str()))
        .collect();
    let plumbing = PlumbingGraph::extract_labeled(last, &labeled)
        .map_err(|e| plumbing_err("plumbing", e))?;
    let m = plumbing.intersection_matrix();
    let det = plumbing.determinant();
    let negative_definite =
        is_negative_definite(&m).map_err(|e| ScenarioError::internal("plumbing", e))?;
    if !negative_definite {
        report.failures.push("plumbing: not negative definite".into());
    }
    let inv = invert(&m).map_err(|e| ScenarioError::mismatch("plumbing", e))?;
    let (prefactor, scaled) = scaled_inverse(&inv.to_rows());
    let vertex_names: Vec<&str> = plumbing.vertices().iter().map(|v| v.name.as_str()).collect();
    report.stages.plumbing = Some(PlumbingStage {
        spheres: plumbing
            .vertices()
            .iter()
            .map(|v| summary(&v.name, v.class.as_ref().expect("extracted")))
            .collect(),
        edges: plumbing
            .edges()
            .iter()
            .map(|&(a, b)| (vertex_names[a].to_string(), vertex_names[b].to_string()))
            .collect(),
        matrix: plumbing
            .integer_matrix()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect())
            .collect(),
        determinant: RationalRepr::from(&det),
        negative_definite,
        inverse_prefactor: RationalRepr::from(&prefactor),
        inverse_scaled: scaled
            .iter()
            .map(|r| r.iter().map(big).collect())
            .collect(),
    });

    let legs: Option<Vec<&str>> = section
        .legs
        .as_ref()
        .map(|l| l.iter().map(String::as_str).collect());
    let seifert =
        SeifertInvariant::from_plumbing_ordered(&plumbing, section.center.as_deref(), legs.as_deref())
            .map_err(|e| plumbing_err("seifert", e))?;
    let h1 = plumbing.first_homology();
    let h1_matches = h1.order().map(Rational::from_integer) == Some(det.abs())
        && seifert.h1_order() == det.abs();
    report.checks.push(Check {
        name: "|H1| = |det| = |e| * product of alphas".into(),
        ok: h1_matches,
    });
    if !h1_matches {
        report.failures.push("seifert: H1 order disagrees with the determinant".into());
    }
    report.stages.seifert = Some(SeifertStage {
        center: seifert.center.clone().unwrap_or_default(),
        b0: big(&seifert.b0),
        pairs: seifert.pairs().iter().map(|(a, b)| (big(a), big(b))).collect(),
        legs: seifert.legs.iter().map(|l| l.vertices.clone()).collect(),
        notation: seifert.notation(),
        oriented_notation: seifert.oriented_notation(),
        displayed_sum: seifert.displayed_terms(),
        displayed_value: RationalRepr::from(&seifert.displayed_sum()),
        e_invariant: RationalRepr::from(&seifert.e_invariant()),
        rational_homology_sphere: seifert.is_rational_homology_sphere(),
        h1: h1.to_string(),
        h1_order: h1.order().as_ref().map(big),
        e_times_alphas: RationalRepr::from(&seifert.h1_order()),
    });

    let group = fundamental_group(&seifert).map_err(|e| plumbing_err("pi1", e))?;
    let ab = abelianization(&group);
    let ab_matches = ab.order().map(Rational::from_integer) == Some(det.abs());
    report.checks.push(Check {
        name: "abelianized presentation has order |det|".into(),
        ok: ab_matches,
    });
    if !ab_matches {
        report.failures.push("pi1: abelianization order disagrees with the determinant".into());
    }
    let facts = GeometricFacts::new(file.pi1_facts.clone());
    let outcome = quotient_triviality(&group, &facts, last, &plumbing)
        .map_err(|e| plumbing_err("pi1", e))?;
    let mut pi1 = Pi1Stage {
        generators: group.generators.clone(),
        relators: group.relators.iter().map(|r| group.render(r)).collect(),
        printed_central_relator: group.render(&group.printed_central_relator),
        abelianization: ab.to_string(),
        abelianization_order: ab.order().as_ref().map(big),
        facts: facts.facts.iter().map(ToString::to_string).collect(),
        trivial: false,
        log: Vec::new(),
        certificate_replayed: false,
        residual_generators: Vec::new(),
        residual_relators: Vec::new(),
    };
    match &outcome {
        TrivialityOutcome::Trivial(cert) => {
            pi1.trivial = true;
            pi1.log = cert.log(&group);
            if let Err(e) = check_certificate(&group, cert) {
                return Err(ScenarioError::internal("pi1", format!("certificate replay: {e}")));
            }
            pi1.certificate_replayed = true;
        }
        TrivialityOutcome::Stalled(stall) => {
            pi1.log = stall
                .steps
                .iter()
                .map(|s| s.render(&group, &facts))
                .collect();
            pi1.residual_generators = stall
                .surviving
                .iter()
                .map(|&g| group.generators[g].clone())
                .collect();
            pi1.residual_relators = stall.relators.iter().map(|r| group.render(r)).collect();
            report
                .failures
                .push("pi1: simplification stalled; simple connectivity not certified".into());
        }
    }
    report.checks.push(Check {
        name: "pi1 certificate replayed by the independent checker".into(),
        ok: pi1.certificate_replayed,
    });
    report.stages.pi1 = Some(pi1);

    let ambient = Ambient { k: last.blowups() };
    let sr = surgery_report(ambient, &plumbing, outcome.is_trivial())
        .map_err(|e| ScenarioError::mismatch("surgery", e))?;
    let expected = opts.expect.clone().or_else(|| file.surgery.expect.clone());
    if let Some(exp) = &expected {
        let want = HomeoType::parse(exp).ok_or_else(|| {
            ScenarioError::validation("surgery", format!("cannot read expected type `{exp}`"))
        })?;
        if want != sr.types.homeo_type {
            report.failures.push(format!(
                "surgery: expected {want}, computed {}",
                sr.types.homeo_type
            ));
        }
    }
    let samples = opts
        .samples
        .or(file.surgery.samples)
        .unwrap_or(DEFAULT_SAMPLES);
    let seed = opts.seed.or(file.surgery.seed).unwrap_or(DEFAULT_SEED);
    let sign_lemma = match sr.types.homeo_type {
        HomeoType::Standard { m } | HomeoType::Candidate { m } if samples > 0 && (2..=9).contains(&m) => {
            let l = sign_lemma_property(m as usize, samples, seed);
            if !l.holds() {
                report.failures.push(format!("surgery: sign lemma sampler found counterexamples for m = {m}"));
            }
            Some(SignLemmaStage {
                m: l.m,
                seed: l.seed,
                accepted: l.accepted,
                rejected: l.rejected,
                counterexamples: l.counterexamples.len(),
            })
        }
        _ => None,
    };
    let (verdict, a_coefficient, witness_value) = match &sr.verdict {
        Some(v @ Verdict::Exotic { .. }) => (
            "exotic".to_string(),
            Some(v.a_coefficient().into()),
            Some(v.witness().into()),
        ),
        Some(v @ Verdict::Inconclusive { .. }) => (
            "inconclusive".to_string(),
            Some(v.a_coefficient().into()),
            Some(v.witness().into()),
        ),
        None => ("homeomorphism candidate only".to_string(), None, None),
    };
    report.stages.surgery = Some(SurgeryStage {
        ambient_k: ambient.k,
        chi: sr.types.chi,
        sigma: sr.types.sigma,
        b2: sr.types.b2,
        b_plus: sr.types.b_plus,
        b_minus: sr.types.b_minus,
        parity: sr.types.parity,
        homeo_type: sr.types.homeo_type,
        homeo_type_text: sr.types.homeo_type.to_string(),
        expected,
        canonical_restriction: sr.canonical_restriction.clone(),
        symplectic_restriction: sr.symplectic_restriction.iter().map(Into::into).collect(),
        product: (&sr.product).into(),
        verdict,
        a_coefficient,
        witness_assignment: format!("a = 1, b_i = 1/{}", 100 * ambient.k.max(1)),
        witness_value,
        sign_lemma,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn inverse_scaling() {
        let inv = vec![vec![rat(-2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(-2, 3)]];
        let (p, n) = scaled_inverse(&inv);
        assert_eq!(p, rat(-1, 3));
        assert_eq!(n, vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(2)]]);
    }
}
