use holodyn::entire_maps::{
    escape_rule, render_exp_dynamic, render_exp_param, singular_orbit_classify,
    strip_invariant_set, EntireFamily, EntireKind, CAPTURE, CYCLE_TOLERANCE, LN_CAP, NEUTRAL_BAND,
};
use serde_json::json;

use super::{cx, grid_outcome, max_iter};
use crate::config::ExperimentConfig;
use crate::error::{numeric, CliError};
use crate::output::Outcome;

/// Iterations spent on the singular orbits listed in the report.
const SINGULAR_ITER: usize = 2000;

pub fn exp_family(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let kind: EntireKind = cfg.parse("kind")?;
    let lambda = cfg.complex("lambda")?;
    let family = EntireFamily::new(kind, lambda).map_err(|e| CliError::config(e.to_string()))?;
    let window = cfg.window()?;
    let n = max_iter(cfg)?;
    let plane = cfg.require("plane")?;
    let grid = match plane {
        "dynamic" => render_exp_dynamic(&family, window, n).map_err(numeric)?,
        "param" => {
            if kind != EntireKind::Exp {
                return Err(CliError::config(
                    "the parameter plane is drawn for --kind exp only",
                ));
            }
            render_exp_param(window, n).map_err(numeric)?
        }
        "strip" => {
            if kind != EntireKind::Exp || lambda.im != 0.0 {
                return Err(CliError::config(
                    "the strip plane needs --kind exp and a real --lambda",
                ));
            }
            strip_invariant_set(lambda.re, window, n)
                .map_err(|e| CliError::config(e.to_string()))?
        }
        other => {
            return Err(CliError::config(format!(
                "--plane must be dynamic, param or strip, got {other:?}"
            )))
        }
    };
    let singular = singular_orbit_classify(&family, SINGULAR_ITER.max(n)).map_err(numeric)?;
    let result = json!({
        "kind": kind,
        "lambda": cx(lambda),
        "plane": plane,
        "escape_rule": escape_rule(kind),
        "singular_orbits": singular,
    });
    Ok(grid_outcome(grid, result)
        .tolerance("max_iter", n as f64)
        .tolerance("ln_cap", LN_CAP)
        .tolerance("capture", CAPTURE)
        .tolerance("cycle_tolerance", CYCLE_TOLERANCE)
        .tolerance("neutral_band", NEUTRAL_BAND))
}
