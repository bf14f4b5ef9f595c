//! Pullback iteration for piecewise-monotone interval maps: each map is
//! replaced by the polynomial with the same boundary and critical values,
//! pulled back through the lap-wise conjugacy.

mod map;
mod pchip;
mod polynomial;
mod pullback;

pub use map::{PiecewiseMonotoneMap, DEFAULT_LAP_SAMPLES};
pub use pchip::Pchip;
pub use polynomial::{solve_critical_values, IntervalPolynomial};
pub use pullback::{
    thurston_run, thurston_step, IntervalHomeo, ThurstonRun, ThurstonStep, DEFAULT_GRID,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThurstonError {
    #[error("infeasible critical-value targets: {0}")]
    InfeasibleTargets(String),
    #[error("critical-value Newton failed from every seed")]
    NoConvergence,
    #[error("lap {lap} ranges differ by {gap:e}")]
    RangeMismatch { lap: usize, gap: f64 },
    #[error("invalid interval map: {0}")]
    InvalidMap(String),
    #[error("line {line}: cannot read `{content}`")]
    Parse { line: usize, content: String },
}
