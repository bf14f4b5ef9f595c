//! Dynamic- and parameter-plane rendering, external rays, Yoccoz disks,
//! limb sizes and area bounds.

mod area;
mod escape;
mod families;
mod grid;
mod inverse;
mod palette;
mod rays;
mod window;
mod yoccoz;

pub use area::{cycle_trap, filled_set_radius, julia_area_bound, AreaBound, Trap};
pub use escape::{
    render_escape, smooth_count, BasinClassifier, PolynomialEscape, CAPTURE_RADIUS, SMOOTH_BAILOUT,
};
pub use families::{
    cubic_contraction_radius, cubic_u_cell, quadratic_parameter_cell, render_cubic_u,
    render_mandelbrot, render_tricorn,
};
pub use grid::{class, Cell, ClassifiedGrid};
pub use inverse::{boundary_band_fraction, render_inverse};
pub use palette::{ppm_bytes, Palette, DEFAULT_PALETTE};
pub use rays::{green_potential, trace_external_ray, RayOptions, RayPath, REFERENCE_RADIUS};
pub use window::Window;
pub use yoccoz::{
    limb_diameter, limb_root, yoccoz_disks, yoccoz_disks_figure, LimbEstimate, YoccozDisk,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::dynamics::DynamicsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanesError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsuitable map: {0}")]
    InvalidMap(String),
    #[error("ray continuation failed at level {level}")]
    RayBlocked { level: usize },
    #[error("a critical orbit escapes; the Julia set is not connected")]
    NotConnected,
    #[error("palette: {0}")]
    Palette(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<AlgebraError> for PlanesError {
    fn from(e: AlgebraError) -> Self {
        PlanesError::Dynamics(e.into())
    }
}
