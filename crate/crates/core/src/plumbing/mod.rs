//! Plumbing trees of embedded spheres: intersection matrix, boundary Seifert
//! invariants, first homology, the Seifert π₁ presentation and the
//! fact-driven triviality deduction for the inclusion-induced map on π₁.

mod graph;
mod group;
mod seifert;
mod triviality;

pub use graph::{FirstHomology, PlumbingGraph, PlumbingVertex};
pub use group::{abelianization, fundamental_group, GroupPresentation, Word};
pub use seifert::{
    expand_negative_continued_fraction, negative_continued_fraction, Leg, SeifertInvariant,
};
pub use triviality::{
    check_certificate, quotient_triviality, validate_facts, Deduction, Fact, GeometricFacts,
    Stall, TrivialityCertificate, TrivialityOutcome,
};


use thiserror::Error;

use crate::kernel::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("vertex `{0}` is listed twice")]
    DuplicateVertex(String),
    #[error("not a simple plumbing: {a}·{b} = {product} (must be 0 or 1)")]
    NotSimplePlumbing { a: String, b: String, product: i64 },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex `{vertex}` has weight {weight} but its class squares to {square}")]
    WeightMismatch {
        vertex: String,
        weight: i64,
        square: i64,
    },
    #[error("not star-shaped: {0}")]
    NotStarShaped(String),
    #[error("leg vertex `{vertex}` has weight {weight}; legs need weights <= -2")]
    UnreducedLeg { vertex: String, weight: i64 },
    #[error("invalid fact `{fact}`: {reason}")]
    FactValidation { fact: String, reason: String },
    #[error("`{0}` is not the only sphere of its leg; facts may only target single-sphere legs")]
    MultiVertexLeg(String),
    #[error("exponent does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
