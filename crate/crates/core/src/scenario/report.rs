use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::blowup::IncidenceEdge;
use crate::field::Contact;
use crate::kernel::{LinearForm, RationalRepr};
use crate::surgery::{HomeoType, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFormRepr {
    pub text: String,
    pub terms: Vec<(String, RationalRepr)>,
}

impl From<&LinearForm> for LinearFormRepr {
    fn from(f: &LinearForm) -> Self {
        let mut terms = Vec::new();
        if !f.constant_term().is_zero() {
            terms.push(("1".to_string(), RationalRepr::from(f.constant_term())));
        }
        terms.extend(f.terms().map(|(s, c)| (s.to_string(), RationalRepr::from(c))));
        LinearFormRepr {
            text: f.to_string(),
            terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContactCheck {
    pub a: String,
    pub b: String,
    pub point: String,
    pub expected: Option<u32>,
    pub certified: Contact,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub a: String,
    pub b: String,
    pub contacts: Vec<(String, Contact)>,
    pub total: u32,
    pub bound: u32,
    pub complete: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub warning: Option<String>,
    pub contacts: Vec<ContactCheck>,
    pub audits: Vec<AuditEntry>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSummary {
    pub name: String,
    pub class: String,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationStage {
    pub curves: Vec<(String, u32)>,
    pub points: Vec<String>,
    /// Undeclared intersections per pair, nonzero entries only.
    pub residuals: Vec<(String, String, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupStage {
    pub k: usize,
    pub steps: Vec<String>,
    pub curves: Vec<CurveSummary>,
    pub incidence: Vec<IncidenceEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingStage {
    pub spheres: Vec<CurveSummary>,
    pub edges: Vec<(String, String)>,
    pub matrix: Vec<Vec<i64>>,
    pub determinant: RationalRepr,
    pub negative_definite: bool,
    /// Inverse as `prefactor · inverse_scaled` with an integer matrix.
    pub inverse_prefactor: RationalRepr,
    pub inverse_scaled: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeifertStage {
    pub center: String,
    pub b0: String,
    pub pairs: Vec<(String, String)>,
    pub legs: Vec<Vec<String>>,
    pub notation: String,
    pub oriented_notation: String,
    pub displayed_sum: String,
    pub displayed_value: RationalRepr,
    pub e_invariant: RationalRepr,
    pub rational_homology_sphere: bool,
    pub h1: String,
    pub h1_order: Option<String>,
    pub e_times_alphas: RationalRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Stage {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub printed_central_relator: String,
    pub abelianization: String,
    pub abelianization_order: Option<String>,
    pub facts: Vec<String>,
    pub trivial: bool,
    pub log: Vec<String>,
    pub certificate_replayed: bool,
    pub residual_generators: Vec<String>,
    pub residual_relators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignLemmaStage {
    pub m: usize,
    pub seed: u64,
    pub accepted: usize,
    pub rejected: usize,
    pub counterexamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryStage {
    pub ambient_k: usize,
    pub chi: i64,
    pub sigma: i64,
    pub b2: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub parity: Parity,
    pub homeo_type: HomeoType,
    pub homeo_type_text: String,
    pub expected: Option<String>,
    pub canonical_restriction: Vec<i64>,
    pub symplectic_restriction: Vec<LinearFormRepr>,
    pub product: LinearFormRepr,
    pub verdict: String,
    pub a_coefficient: Option<RationalRepr>,
    pub witness_assignment: String,
    pub witness_value: Option<RationalRepr>,
    pub sign_lemma: Option<SignLemmaStage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stages {
    pub configuration: ConfigurationStage,
    pub certification: VerifyReport,
    pub blowups: BlowupStage,
    pub plumbing: Option<PlumbingStage>,
    pub seifert: Option<SeifertStage>,
    pub pi1: Option<Pi1Stage>,
    pub surgery: Option<SurgeryStage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub stages: Stages,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// 0 when every stage succeeded, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.ok() {
            0
        } else {
            2
        }
    }
}

pub fn render_machine(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

pub fn render_verify_machine(report: &VerifyReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

fn contact_name(c: Contact) -> &'static str {
    match c {
        Contact::Tangent => "tangent",
        Contact::Transverse => "transverse",
        Contact::NotOnBoth => "not on both",
    }
}

pub fn render_verify_text(v: &VerifyReport) -> String {
    let mut out = String::new();
    if let Some(w) = &v.warning {
        writeln!(out, "  warning: {w}").unwrap();
    }
    for c in &v.contacts {
        writeln!(
            out,
            "  {} / {} at {}: {}{}",
            c.a,
            c.b,
            c.point,
            contact_name(c.certified),
            if c.ok { "" } else { "  MISMATCH" }
        )
        .unwrap();
    }
    for a in &v.audits {
        let parts: Vec<String> = a
            .contacts
            .iter()
            .filter(|(_, c)| *c != Contact::NotOnBoth)
            .map(|(_, c)| c.multiplicity().to_string())
            .collect();
        writeln!(
            out,
            "  Bezout {} / {}: {} = {} of {}{}",
            a.a,
            a.b,
            parts.join(" + "),
            a.total,
            a.bound,
            if a.complete { "" } else { " (incomplete)" }
        )
        .unwrap();
    }
    for f in &v.failures {
        writeln!(out, "  FAIL {f}").unwrap();
    }
    out
}

fn table(rows: &[Vec<String>]) -> String {
    let width = rows
        .iter()
        .flat_map(|r| r.iter().map(String::len))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "    [{}]", cells.join(" ")).unwrap();
    }
    out
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let s = &r.stages;
    writeln!(out, "scenario {}", r.scenario).unwrap();

    writeln!(out, "\n[configuration]").unwrap();
    let curves: Vec<String> = s
        .configuration
        .curves
        .iter()
        .map(|(n, d)| format!("{n} (degree {d})"))
        .collect();
    writeln!(out, "  curves: {}", curves.join(", ")).unwrap();
    writeln!(out, "  points: {}", s.configuration.points.join(", ")).unwrap();

    writeln!(out, "\n[certification]").unwrap();
    out.push_str(&render_verify_text(&s.certification));

    writeln!(out, "\n[blowups]").unwrap();
    writeln!(out, "  {} blow-ups", s.blowups.k).unwrap();
    for c in &s.blowups.curves {
        writeln!(out, "  {:<5} = {:<40} square {}", c.name, c.class, c.self_intersection).unwrap();
    }

    if let Some(p) = &s.plumbing {
        writeln!(out, "\n[plumbing]").unwrap();
        for v in &p.spheres {
            writeln!(out, "  {:<4} = {:<40} weight {}", v.name, v.class, v.self_intersection)
                .unwrap();
        }
        let edges: Vec<String> = p.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        writeln!(out, "  edges: {}", edges.join(", ")).unwrap();
        writeln!(out, "  intersection matrix:").unwrap();
        let rows: Vec<Vec<String>> = p
            .matrix
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect())
            .collect();
        out.push_str(&table(&rows));
        writeln!(out, "  determinant {}", p.determinant.num).unwrap();
        writeln!(out, "  negative definite: {}", p.negative_definite).unwrap();
        writeln!(
            out,
            "  inverse = {}/{} times",
            p.inverse_prefactor.num, p.inverse_prefactor.den
        )
        .unwrap();
        out.push_str(&table(&p.inverse_scaled));
    }

    if let Some(sf) = &s.seifert {
        writeln!(out, "\n[seifert]").unwrap();
        writeln!(out, "  invariant {}", sf.notation).unwrap();
        writeln!(out, "  oriented  {}", sf.oriented_notation).unwrap();
        writeln!(
            out,
            "  {} = {}/{}",
            sf.displayed_sum, sf.displayed_value.num, sf.displayed_value.den
        )
        .unwrap();
        writeln!(
            out,
            "  e = {}/{}  rational homology sphere: {}",
            sf.e_invariant.num, sf.e_invariant.den, sf.rational_homology_sphere
        )
        .unwrap();
        writeln!(out, "  H1 = {}", sf.h1).unwrap();
    }

    if let Some(p) = &s.pi1 {
        writeln!(out, "\n[pi1]").unwrap();
        writeln!(out, "  generators: {}", p.generators.join(", ")).unwrap();
        for rel in &p.relators {
            writeln!(out, "  {rel} = 1").unwrap();
        }
        writeln!(out, "  printed central relation: {} = 1", p.printed_central_relator).unwrap();
        writeln!(out, "  abelianization: {}", p.abelianization).unwrap();
        writeln!(out, "  facts: {}", p.facts.join(", ")).unwrap();
        for (i, line) in p.log.iter().enumerate() {
            writeln!(out, "  {:>2}. {line}", i + 1).unwrap();
        }
        if p.trivial {
            writeln!(
                out,
                "  image of pi1 is trivial (certificate replayed: {})",
                p.certificate_replayed
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "  stalled with generators {} and relators {}",
                p.residual_generators.join(", "),
                p.residual_relators.join(", ")
            )
            .unwrap();
        }
    }

    if let Some(sg) = &s.surgery {
        writeln!(out, "\n[surgery]").unwrap();
        writeln!(
            out,
            "  chi = {}, sigma = {}, b2 = {}, b+ = {}, b- = {}",
            sg.chi, sg.sigma, sg.b2, sg.b_plus, sg.b_minus
        )
        .unwrap();
        writeln!(out, "  parity: {:?}", sg.parity).unwrap();
        writeln!(out, "  homeomorphism type: {}", sg.homeo_type_text).unwrap();
        let k: Vec<String> = sg.canonical_restriction.iter().map(i64::to_string).collect();
        writeln!(out, "  K|P = ({})", k.join(", ")).unwrap();
        for (i, w) in sg.symplectic_restriction.iter().enumerate() {
            writeln!(out, "  w|P[{}] = {}", i + 1, w.text).unwrap();
        }
        writeln!(out, "  K_X.w_X = {}", sg.product.text).unwrap();
        let decimals: Vec<String> = sg
            .product
            .terms
            .iter()
            .map(|(s, v)| format!("{} {s}", v.decimal))
            .collect();
        writeln!(out, "          ~ {}", decimals.join(", ")).unwrap();
        writeln!(out, "  verdict: {}", sg.verdict).unwrap();
        if let Some(w) = &sg.witness_value {
            writeln!(out, "  witness {}: {}/{}", sg.witness_assignment, w.num, w.den).unwrap();
        }
        if let Some(l) = &sg.sign_lemma {
            writeln!(
                out,
                "  sign lemma, m = {}: {} samples, {} rejected, {} counterexamples (seed {})",
                l.m, l.accepted, l.rejected, l.counterexamples, l.seed
            )
            .unwrap();
        }
    }

    writeln!(out, "\n[checks]").unwrap();
    for c in &r.checks {
        writeln!(out, "  {} {}", if c.ok { "ok  " } else { "FAIL" }, c.name).unwrap();
    }
    if r.failures.is_empty() {
        writeln!(out, "\nall stages succeeded").unwrap();
    } else {
        for f in &r.failures {
            writeln!(out, "\nFAIL {f}").unwrap();
        }
    }
    out
}
