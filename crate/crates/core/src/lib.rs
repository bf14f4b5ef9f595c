//! Numerical holomorphic dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: polynomials, rational maps, simultaneous root finding,
//!   critical points, parameter solving and the quadratic-differential
//!   pushforward under squaring.
//! * [`dynamics`]: orbits, cycles and multipliers, critical-orbit
//!   classification, geometric coding trees and rotation numbers.
//! * [`planes`]: windows, classified grids, escape-time and parameter-plane
//!   renders, external rays, Yoccoz disks and limb estimates.
//! * [`thurston_interval`]: the pullback iteration for piecewise-monotone
//!   interval maps.
//! * [`siegel`]: power series, linearization of the `P_rho` family and the
//!   `f = h'/(1-h)` coefficient recursion.
//! * [`newton_lab`]: relaxed Newton maps, Newton flows, bad cycles and the
//!   common-basin arc experiment.
//! * [`entire_maps`]: exponential and trigonometric families with
//!   overflow-safe evaluation.
//!
//! Every operation is a pure function of its inputs; grids are computed in
//! parallel but never depend on the schedule.

// Negated comparisons reject NaN on purpose; elimination loops index two rows.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod dynamics;
pub mod entire_maps;
pub mod newton_lab;
pub mod planes;
pub mod point;
pub mod siegel;
pub mod thurston_interval;

pub use num_complex::Complex64;
pub use point::{Chart, Point};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
