//! Orbits, cycles, critical-orbit classification and coding trees.

mod coding_tree;
mod critical;
mod cycle;
mod map;
mod orbit;
mod rotation;

pub use coding_tree::{branch_limit, BranchLimit, CodingTree, DEFAULT_TREE_BUDGET};
pub use critical::{
    attracting_cycles, classify_critical_orbits, repelling_fixed_point_approach, CriticalOutcome,
    CriticalReport, FixedPointApproach,
};
pub use cycle::{cycle_multiplier, find_cycle, CycleKind, CycleRecord};
pub use map::{chart_derivative_from_finite, AnyMap, ComplexMap};
pub use orbit::{orbit, OrbitRecord};
pub use rotation::{best_rational, rotation_number_at, ExternalAngle, RotationNumberEstimate};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("cycle Newton iteration diverged")]
    Diverged,
    #[error("seed converged to a cycle of exact period {0}")]
    CollapsedToLowerPeriod(usize),
    #[error("preimage labeling is ambiguous near a critical value at {0}")]
    CriticalValueHit(Complex64),
    #[error("coding tree needs {needed} vertex evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("repelling point needs landing ray data for a combinatorial rotation number")]
    NeedsRays,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
