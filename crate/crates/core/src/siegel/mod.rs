//! Siegel-disk series: linearization of the family `P' = lambda (1 - z)^rho`,
//! the coefficient recursion for `f = h'/(1 - h)`, continued fractions of
//! rotation numbers and the boundary-angle probe.

mod angle;
mod family;
mod recursion;
mod rotation;
mod series;

pub use angle::{boundary_angle_probe, AngleEstimate, MIN_PROBE_ORDER};
pub use family::{
    conjugacy_residual, linearize, normalize_at_critical_point, series_p_rho,
    CriticalNormalization, SiegelFamily, DEFAULT_ORDER, SMALL_DIVISOR_FLOOR,
};
pub use recursion::{
    carleson_recursion, carleson_recursion_with, default_a0, f_from_h, max_deviation,
    RecursionOptions, COT_POLE_GUARD,
};
pub use rotation::{continued_fraction, golden_mean, RotationNumber};
pub use series::PowerSeries;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SiegelError {
    #[error("rotation number is rational to working precision ({p}/{q})")]
    RationalInput { p: u64, q: u64 },
    #[error("small divisor |lambda^{order} - lambda| = {gap:e} is below working precision")]
    SmallDivisorOverflow { order: usize, gap: f64 },
    #[error("cotangent pole at nu = {0}")]
    CotPole(usize),
    #[error("insufficient order: {0}")]
    InsufficientOrder(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
