//! Exact rational arithmetic, dense linear algebra and symbolic linear forms.

mod linear_form;
mod matrix;
mod rational;
mod smith;

pub use linear_form::{LinearForm, Symbol};
pub use matrix::{
    determinant, invert, is_negative_definite, leading_principal_minors, IntegerMatrix, Matrix,
    RationalMatrix,
};
pub use rational::{
    int, parse_rational, parse_repeating_decimal, rat, to_repeating_decimal, Rational,
    RationalRepr,
};
pub use smith::{smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix: no nonzero pivot in column {column}")]
    Singular { column: usize },
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}
