//! Relaxed Newton maps `z - h f/f'`, the Newton flow and its
//! desingularization, degenerate-flow detection, bad-cycle search, basin
//! grids and the common-basin arc experiment.

mod arcs;
mod basins;
mod cycles;
mod degenerate;
mod flow;
mod map;

pub use arcs::{
    common_basin_arcs, default_h_samples, AngularInterval, ArcReport, DEFAULT_H_COUNT,
    RADIAL_FRACTION,
};
pub use basins::{basin_grid, immediate_basin_mask, BAD_CAPTURE, BAD_PERIOD, ROOT_CAPTURE};
pub use cycles::{find_bad_cycles, CRITICAL_ORBIT_ITERATIONS};
pub use degenerate::{detect_degenerate, DegeneracyReport, ZERO_CRITICAL_VALUE};
pub use flow::{
    euler_discrepancy, newton_flow, EulerCheck, FlowField, FlowSample, FlowTerminal,
    FlowTrajectory, ARG_DRIFT, FLOW_ATOL, FLOW_RTOL, ROOT_ARRIVAL, SINGULAR_EVENT,
};
pub use map::{NewtonMap, Root, ROOT_CLUSTER, SINGULAR_TOLERANCE};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("f' vanishes at {0} away from a root")]
    NearSingularity(Complex64),
    #[error("step size underflow at t = {t}, z = {z}")]
    StepFailure { t: f64, z: Complex64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
