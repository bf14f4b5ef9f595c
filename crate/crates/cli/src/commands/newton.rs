use holodyn::newton_lab::{
    basin_grid, common_basin_arcs, default_h_samples, detect_degenerate, find_bad_cycles,
    newton_flow, FlowField, NewtonMap, BAD_CAPTURE, BAD_PERIOD, FLOW_ATOL, FLOW_RTOL, ROOT_ARRIVAL,
    ROOT_CAPTURE, ROOT_CLUSTER,
};
use serde_json::json;

use super::{cx, describe_polynomial, grid_outcome, max_iter};
use crate::config::ExperimentConfig;
use crate::error::{numeric, CliError};
use crate::output::Outcome;
use crate::presets::load_polynomial;

/// Tolerance on equal critical-value arguments in the degeneracy check.
const DEGENERACY_TOL: f64 = 1e-9;

fn roots_json(map: &NewtonMap) -> serde_json::Value {
    json!(map
        .roots()
        .iter()
        .map(|r| json!({ "value": cx(r.value), "multiplicity": r.multiplicity }))
        .collect::<Vec<_>>())
}

pub fn basins(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = load_polynomial(cfg.require("poly")?)?;
    let h: f64 = cfg.parse("h")?;
    let n = max_iter(cfg)?;
    let map = NewtonMap::new(f.clone(), h).map_err(numeric)?;
    let bad = find_bad_cycles(&f, h, BAD_PERIOD).map_err(numeric)?;
    let grid = basin_grid(&f, h, &cfg.window()?, n).map_err(numeric)?;
    let result = json!({
        "polynomial": describe_polynomial(&f),
        "h": h,
        "roots": roots_json(&map),
        "bad_cycles": bad,
    });
    Ok(grid_outcome(grid, result)
        .tolerance("max_iter", n as f64)
        .tolerance("root_capture", ROOT_CAPTURE)
        .tolerance("bad_capture", BAD_CAPTURE)
        .tolerance("root_cluster", ROOT_CLUSTER))
}

pub fn flow(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = load_polynomial(cfg.require("poly")?)?;
    let z0 = cfg.complex("z0")?;
    let t_max: f64 = cfg.parse("tmax")?;
    let field = match cfg.require("field")? {
        "raw" => FlowField::Raw,
        "desing" | "desingularized" => FlowField::Desingularized,
        other => {
            return Err(CliError::config(format!(
                "--field must be raw or desing, got {other:?}"
            )))
        }
    };
    let trajectory = newton_flow(&f, z0, t_max, field).map_err(numeric)?;
    let degeneracy = detect_degenerate(&f, DEGENERACY_TOL).ok();
    let last = trajectory.last();
    let result = json!({
        "polynomial": describe_polynomial(&f),
        "field": field,
        "z0": cx(z0),
        "terminal": trajectory.terminal,
        "samples": trajectory.samples.len(),
        "end": { "t": last.t, "z": cx(last.z) },
        "degeneracy": degeneracy,
    });
    let mut out = Outcome::new(result)
        .tolerance("rtol", FLOW_RTOL)
        .tolerance("atol", FLOW_ATOL)
        .tolerance("root_arrival", ROOT_ARRIVAL)
        .tolerance("degeneracy_tol", DEGENERACY_TOL);
    out.csv = Some(trajectory.to_csv(&f));
    Ok(out)
}

pub fn arcs(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = load_polynomial(cfg.require("poly")?)?;
    let alpha: usize = cfg.parse("root")?;
    let radius: f64 = cfg.parse("radius")?;
    let count: usize = cfg.parse("h-samples")?;
    let resolution: usize = cfg.parse("resolution")?;
    let map = NewtonMap::new(f.clone(), 1.0).map_err(numeric)?;
    let Some(root) = map.roots().get(alpha) else {
        return Err(CliError::config(format!(
            "--root {alpha} but the polynomial has {} distinct roots",
            map.roots().len()
        )));
    };
    if count == 0 {
        return Err(CliError::config("--h-samples must be positive"));
    }
    let hs = default_h_samples(root.multiplicity, count);
    let report = common_basin_arcs(&f, alpha, &hs, radius, resolution).map_err(numeric)?;
    let result = json!({
        "polynomial": describe_polynomial(&f),
        "roots": roots_json(&map),
        "arcs": report,
    });
    Ok(Outcome::new(result)
        .tolerance("root_capture", ROOT_CAPTURE)
        .tolerance("bad_capture", BAD_CAPTURE))
}
