//! Exact bookkeeping for rational blowdowns of curve configurations in
//! blown-up CP².
//!
//! The pipeline runs bottom-up through the modules below: exact arithmetic
//! ([`kernel`]), coordinate certification of the starting conics
//! ([`field`]), blow-up homology tracking ([`blowup`]), plumbing analysis
//! ([`plumbing`]), the blowdown accounting and sign test ([`surgery`]), and
//! the file-driven front end ([`scenario`]).

pub mod acceptance;
pub mod blowup;
pub mod field;
pub mod homology;
pub mod kernel;
pub mod plumbing;
pub mod scenario;
pub mod surgery;

pub use homology::HomologyClass;
pub use kernel::{LinearForm, Rational, RationalMatrix, IntegerMatrix, Symbol};
