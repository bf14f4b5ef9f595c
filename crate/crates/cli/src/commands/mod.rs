mod analysis;
mod entire;
mod newton;
mod planes;

use std::collections::BTreeMap;

use holodyn::algebra::Polynomial;
use holodyn::dynamics::AnyMap;
use holodyn::planes::ClassifiedGrid;
use holodyn::Complex64;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Outcome;

/// Runs a computing subcommand. The figure commands are handled by
/// [`crate::figures`].
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.subcommand.as_str() {
        "julia" => planes::julia(cfg),
        "mandel" => planes::mandel(cfg),
        "tricorn" => planes::tricorn(cfg),
        "cubic-u" => planes::cubic_u(cfg),
        "ray" => planes::ray(cfg),
        "coding-tree" => planes::coding_tree(cfg),
        "yoccoz-limbs" => planes::yoccoz_limbs(cfg),
        "limb-diameter" => planes::limb_diameter(cfg),
        "thurston-interval" => analysis::thurston_interval(cfg),
        "siegel" => analysis::siegel(cfg),
        "solve-param" => analysis::solve_param(cfg),
        "newton-basins" => newton::basins(cfg),
        "newton-flow" => newton::flow(cfg),
        "newton-arcs" => newton::arcs(cfg),
        "exp-family" => entire::exp_family(cfg),
        other => Err(CliError::config(format!("unknown subcommand {other:?}"))),
    }
}

pub(crate) fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub(crate) fn describe_polynomial(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(|&z| cx(z)).collect())
}

pub(crate) fn describe_map(map: &AnyMap) -> Value {
    match map {
        AnyMap::Polynomial(p) => json!({ "numerator": describe_polynomial(p) }),
        AnyMap::Rational(r) => json!({
            "numerator": describe_polynomial(r.numerator()),
            "denominator": describe_polynomial(r.denominator()),
        }),
    }
}

/// Pixel count per class code present in the grid.
pub(crate) fn class_counts(grid: &ClassifiedGrid) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for c in grid.classes() {
        *counts.entry(c.to_string()).or_insert(0) += 1;
    }
    counts
}

pub(crate) fn grid_outcome(grid: ClassifiedGrid, mut result: Value) -> Outcome {
    result["window"] = json!(grid.window);
    result["class_counts"] = json!(class_counts(&grid));
    let mut out = Outcome::new(result);
    out.grid = Some(grid);
    out
}

/// Rejects a zero iteration cap up front so it reports as a config error.
pub(crate) fn max_iter(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    let n: usize = cfg.parse("max-iter")?;
    if n == 0 {
        return Err(CliError::config("--max-iter must be positive"));
    }
    Ok(n)
}
