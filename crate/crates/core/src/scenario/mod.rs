//! Scenario files and the end-to-end pipeline.
//!
//! A scenario is a TOML document with the sections `curves`, `points`,
//! `certify`, `script`, `plumbing`, `pi1_facts` and `surgery`; see
//! `docs/scenario-format.md` for the schema. The two built-in scenarios are
//! ordinary files in that format.

mod pipeline;
mod report;

pub use pipeline::{run, run_source, verify_config, verify_source, RunOptions};
pub use report::{
    render_machine, render_text, render_verify_machine, render_verify_text, Report, VerifyReport,
};

use serde::Deserialize;
use thiserror::Error;

use crate::blowup::{BlowupStep, CurveDecl, PointDecl};
use crate::plumbing::Fact;

pub const BUILTIN_B4: &str = include_str!("../../scenarios/example-b4.toml");
pub const BUILTIN_C4: &str = include_str!("../../scenarios/example-c4.toml");

/// Source text of a built-in scenario by name (`example-B4`, `example-C4`).
pub fn builtin(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "example-b4" => Some(BUILTIN_B4),
        "example-c4" => Some(BUILTIN_C4),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{stage}: {message}")]
    Validation { stage: String, message: String },
    #[error("{stage}: {message}")]
    Mismatch { stage: String, message: String },
    #[error("internal error in {stage}: {message}")]
    Internal { stage: String, message: String },
}

impl ScenarioError {
    pub fn validation(stage: &str, message: impl ToString) -> Self {
        ScenarioError::Validation {
            stage: stage.into(),
            message: message.to_string(),
        }
    }

    pub fn mismatch(stage: &str, message: impl ToString) -> Self {
        ScenarioError::Mismatch {
            stage: stage.into(),
            message: message.to_string(),
        }
    }

    pub fn internal(stage: &str, message: impl ToString) -> Self {
        ScenarioError::Internal {
            stage: stage.into(),
            message: message.to_string(),
        }
    }

    /// 1 for parse and validation errors, 2 for mathematical mismatches,
    /// 3 for internal errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse(_) | ScenarioError::Validation { .. } => 1,
            ScenarioError::Mismatch { .. } => 2,
            ScenarioError::Internal { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    pub curves: Vec<CurveEntry>,
    #[serde(default)]
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub certify: CertifySection,
    #[serde(default)]
    pub script: ScriptSection,
    #[serde(default)]
    pub plumbing: Option<PlumbingSection>,
    #[serde(default)]
    pub pi1_facts: Vec<Fact>,
    #[serde(default)]
    pub surgery: SurgerySection,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub name: String,
    pub degree: u32,
    /// `[monomial, coefficient]` pairs, e.g. `["z2*z3", "2*sqrt2*i"]`.
    #[serde(default)]
    pub polynomial: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityEntry {
    pub a: String,
    pub b: String,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub name: String,
    pub branches: Vec<String>,
    #[serde(default)]
    pub multiplicities: Vec<MultiplicityEntry>,
    #[serde(default)]
    pub coords: Option<[String; 3]>,
}

impl PointEntry {
    fn to_decl(&self) -> PointDecl {
        PointDecl {
            name: self.name.clone(),
            branches: self.branches.clone(),
            multiplicities: self
                .multiplicities
                .iter()
                .map(|m| (m.a.clone(), m.b.clone(), m.m))
                .collect(),
        }
    }

    /// Declared local multiplicity of two branches, if both pass here.
    pub fn multiplicity(&self, a: &str, b: &str) -> Option<u32> {
        if !self.branches.iter().any(|x| x == a) || !self.branches.iter().any(|x| x == b) {
            return None;
        }
        Some(
            self.multiplicities
                .iter()
                .find(|m| (m.a == a && m.b == b) || (m.a == b && m.b == a))
                .map_or(1, |m| m.m),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    /// Coordinate-only points: certified, never blown up.
    #[serde(default)]
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepEntry {
    #[serde(default)]
    pub at: Option<String>,
    #[serde(default)]
    pub on: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptSection {
    #[serde(default)]
    pub steps: Vec<StepEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereEntry {
    pub label: String,
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlumbingSection {
    pub spheres: Vec<SphereEntry>,
    #[serde(default)]
    pub center: Option<String>,
    #[serde(default)]
    pub legs: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgerySection {
    /// Expected homeomorphism type, e.g. `CP2#8-CP2`.
    #[serde(default)]
    pub expect: Option<String>,
    /// Sign-lemma samples per run (0 disables the sampler).
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn parse(source: &str) -> Result<Self, ScenarioError> {
        toml::from_str(source).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn curve_decls(&self) -> Vec<CurveDecl> {
        self.curves
            .iter()
            .map(|c| CurveDecl::new(&c.name, c.degree))
            .collect()
    }

    pub fn point_decls(&self) -> Vec<PointDecl> {
        self.points.iter().map(PointEntry::to_decl).collect()
    }

    pub fn steps(&self) -> Result<Vec<BlowupStep>, ScenarioError> {
        self.script
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| match (&s.at, &s.on) {
                (Some(p), None) => Ok(BlowupStep::AtPoint(p.clone())),
                (None, Some(c)) => Ok(BlowupStep::GenericOnCurve(c.clone())),
                _ => Err(ScenarioError::validation(
                    "script",
                    format!("step {} needs exactly one of `at` or `on`", i + 1),
                )),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for name in ["example-B4", "example-C4"] {
            let f = ScenarioFile::parse(builtin(name).unwrap()).unwrap();
            assert_eq!(f.name.as_deref(), Some(name));
            assert_eq!(f.curves.len(), 6);
            assert_eq!(f.points.len(), 9);
        }
        assert_eq!(ScenarioFile::parse(BUILTIN_B4).unwrap().steps().unwrap().len(), 16);
        assert_eq!(ScenarioFile::parse(BUILTIN_C4).unwrap().steps().unwrap().len(), 17);
        assert!(builtin("example-A1").is_none());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = ScenarioFile::parse("[[curves]]\nname = \"A\"\ndegree = 1\ncolour = 3\n");
        assert!(matches!(err, Err(ScenarioError::Parse(_))));
    }

    #[test]
    fn step_needs_one_target() {
        let f = ScenarioFile::parse(
            "[[curves]]\nname = \"A\"\ndegree = 1\n[script]\nsteps = [{ at = \"X\", on = \"A\" }]\n",
        )
        .unwrap();
        assert_eq!(f.steps().unwrap_err().exit_code(), 1);
    }
}
