//! Exponential and trigonometric families `lambda e^z`, `lambda sin z`,
//! `lambda cos z`, `lambda e^z sin z`, `lambda e^z cos z`: overflow-safe
//! evaluation, singular-orbit fate, dynamic and parameter planes, and the
//! invariant strip set.

mod family;
mod orbit;
mod render;

pub use family::{EntireFamily, EntireKind, Step, LN_CAP};
pub use orbit::{
    classify_orbit, escape_rule, real_slice_transition, singular_orbit_classify, OrbitOutcome,
    SingularOrbit, Transition, CYCLE_TOLERANCE, MAX_PERIOD, NEUTRAL_BAND,
};
pub use render::{
    param_cell, render_exp_dynamic, render_exp_param, strip_cell, strip_class, strip_invariant_set,
    BOUNDARY_SNAP, CAPTURE,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntireError {
    #[error("unknown family kind {0:?} (expected exp, sin, cos, expsin or expcos)")]
    UnknownKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
