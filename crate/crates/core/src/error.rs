//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact polynomial arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable `{0}` is not declared")]
    UnknownVariable(String),
    #[error("operation requires constant coefficients, found symbol `{0}`")]
    SymbolicCoefficients(String),
}

/// Errors from map parsing and evaluation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("component {0} has an identically zero denominator")]
    ZeroDenominator(usize),
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator of component {component} vanishes at the point")]
    PoleAtPoint { component: usize },
    #[error("map still has free parameters: {0}")]
    FreeParameters(String),
    #[error("elimination degenerated: {0}")]
    DegenerateElimination(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
