//! Polynomial and rational-map arithmetic.

mod parameter;
mod polynomial;
mod pushforward;
mod rational;
mod roots;

pub use parameter::{
    solve_parameter, AffineFamily, Condition, ParameterProblem, ParameterSolution,
};
pub use polynomial::{parse_complex, Polynomial};
pub use pushforward::{pushforward_qd, Pushforward, RationalFunction};
pub use rational::RationalMap;
pub use roots::{cluster_roots, poly_roots, MAX_ROOT_ITERATIONS};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("denominator vanishes at {0}")]
    PoleAt(Complex64),
    #[error("simultaneous root iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("polynomial of degree {0} has no roots to find")]
    DegreeTooLow(usize),
    #[error("numerator and denominator share a root (relative resultant {0:e})")]
    NotCoprime(f64),
    #[error("rational map must have degree at least 1")]
    ConstantMap,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parameter Newton left the search disk at {0}")]
    Diverged(Complex64),
    #[error("condition is identically satisfied: {0}")]
    DegenerateCondition(String),
    #[error("invalid parameter problem: {0}")]
    InvalidProblem(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("cannot parse polynomial text at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Relative machine epsilon used by residual bounds.
pub(crate) const EPS: f64 = f64::EPSILON;
