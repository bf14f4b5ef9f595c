use std::fmt::Write as _;

use holodyn::dynamics::{branch_limit, CodingTree, ExternalAngle};
use holodyn::planes::{
    julia_area_bound, limb_diameter as estimate_limb, render_cubic_u, render_escape,
    render_inverse, render_mandelbrot, render_tricorn, trace_external_ray, yoccoz_disks,
    yoccoz_disks_figure, LimbEstimate, RayOptions,
};
use holodyn::Complex64;
use serde_json::json;

use super::{describe_map, grid_outcome, max_iter};
use crate::config::ExperimentConfig;
use crate::error::{numeric, CliError};
use crate::output::{load_palette, Outcome, Raster};
use crate::presets::{load_map, load_polynomial};

/// Base point of the preimage tree used by the inverse method.
const INVERSE_ROOT: Complex64 = Complex64::new(0.0, 3.0);

pub fn julia(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let map = load_map(cfg.require("poly")?, cfg.get("den"))?;
    let window = cfg.window()?;
    match cfg.require("method")? {
        "escape" => {
            let n = max_iter(cfg)?;
            let grid = render_escape(&map, window, n).map_err(numeric)?;
            let mut result = json!({ "map": describe_map(&map), "method": "escape" });
            if let Some(p) = map.as_polynomial() {
                // area of the undecided band on the same window, when it covers the filled set
                if let Ok(bound) = julia_area_bound(p, window, n, window.columns.min(256)) {
                    result["area_bound"] = json!(bound.area);
                }
            }
            Ok(grid_outcome(grid, result).tolerance("max_iter", n as f64))
        }
        "inverse" => {
            let depth: usize = cfg.parse("depth")?;
            let budget: usize = cfg.parse("budget")?;
            let points =
                render_inverse(&map, INVERSE_ROOT, depth, budget, cfg.seed).map_err(numeric)?;
            let palette = load_palette(cfg)?;
            let mut img = Raster::filled(window.columns, window.rows, palette.color(1));
            let mut inside = 0usize;
            let mut csv = String::from("re,im\n");
            for z in &points {
                let _ = writeln!(csv, "{},{}", z.re, z.im);
                if let Some((i, j)) = window.pixel(*z) {
                    img.set(i, j, palette.color(0));
                    inside += 1;
                }
            }
            let result = json!({
                "map": describe_map(&map),
                "method": "inverse",
                "window": window,
                "points": points.len(),
                "points_in_window": inside,
            });
            let mut out = Outcome::new(result).tolerance("depth", depth as f64);
            out.image = Some(img);
            out.csv = Some(csv);
            Ok(out)
        }
        other => Err(CliError::config(format!(
            "--method must be escape or inverse, got {other:?}"
        ))),
    }
}

pub fn mandel(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = max_iter(cfg)?;
    let grid = render_mandelbrot(cfg.window()?, n).map_err(numeric)?;
    Ok(grid_outcome(grid, json!({ "family": "z^2 + c" })).tolerance("max_iter", n as f64))
}

pub fn tricorn(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = max_iter(cfg)?;
    let grid = render_tricorn(cfg.window()?, n).map_err(numeric)?;
    Ok(grid_outcome(grid, json!({ "family": "conj(z)^2 + c" })).tolerance("max_iter", n as f64))
}

pub fn cubic_u(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n = max_iter(cfg)?;
    let grid = render_cubic_u(cfg.window()?, n).map_err(numeric)?;
    Ok(grid_outcome(
        grid,
        json!({ "family": "cubic, fixed point of multiplier lambda at 0" }),
    )
    .tolerance("max_iter", n as f64))
}

pub fn ray(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = load_polynomial(cfg.require("poly")?)?;
    let angle: ExternalAngle = cfg.parse("angle")?;
    let options = RayOptions {
        levels_per_halving: cfg.parse("levels")?,
        halvings: cfg.parse("halvings")?,
        ..RayOptions::default()
    };
    let path = trace_external_ray(&f, angle, &options).map_err(numeric)?;
    let mut csv = String::from("potential,re,im\n");
    for (z, t) in path.points.iter().zip(&path.potentials) {
        let _ = writeln!(csv, "{t},{},{}", z.re, z.im);
    }
    let mut out =
        Outcome::new(json!({ "polynomial": super::describe_polynomial(&f), "ray": path }))
            .tolerance("landing_tolerance", options.landing_tolerance)
            .tolerance("reference_radius", holodyn::planes::REFERENCE_RADIUS);
    out.csv = Some(csv);
    Ok(out)
}

/// `"0120"` as symbols `0, 1, 2, 0`.
fn parse_word(word: &str, degree: usize) -> Result<Vec<usize>, CliError> {
    let symbols: Option<Vec<usize>> = word
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect();
    match symbols {
        Some(s) if !s.is_empty() && s.iter().all(|&a| a < degree) => Ok(s),
        _ => Err(CliError::config(format!(
            "--word {word:?} must be digits below the degree {degree}"
        ))),
    }
}

pub fn coding_tree(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let map = load_map(cfg.require("poly")?, cfg.get("den"))?;
    let root = cfg.complex("root")?;
    let depth: usize = cfg.parse("depth")?;
    let branch_depth: usize = cfg.parse("branch-depth")?;
    let tolerance: f64 = cfg.parse("tolerance")?;
    let tree = CodingTree::build(map.clone(), root, depth).map_err(numeric)?;
    let word = parse_word(cfg.require("word")?, tree.degree())?;
    let branch =
        branch_limit(&tree, |j| word[j % word.len()], branch_depth, tolerance).map_err(numeric)?;
    let mut csv = String::from("index,re,im\n");
    for (k, z) in tree.level(depth).iter().enumerate() {
        let _ = writeln!(csv, "{k},{},{}", z.re, z.im);
    }
    let result = json!({
        "map": describe_map(&map),
        "root": super::cx(root),
        "degree": tree.degree(),
        "depth": depth,
        "level_sizes": (0..=depth).map(|n| tree.level(n).len()).collect::<Vec<_>>(),
        "shift_residual": tree.shift_residual(),
        "postcritical": tree.postcritical().iter().map(|&z| super::cx(z)).collect::<Vec<_>>(),
        "word": cfg.require("word")?,
        "branch": branch,
    });
    let mut out = Outcome::new(result).tolerance("branch_tolerance", tolerance);
    out.csv = Some(csv);
    Ok(out)
}

pub fn yoccoz_limbs(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let q_max: u64 = cfg.parse("q-max")?;
    let grid =
        yoccoz_disks_figure(q_max, cfg.window()?).map_err(|e| CliError::config(e.to_string()))?;
    let disks = yoccoz_disks(q_max);
    Ok(grid_outcome(
        grid,
        json!({ "plane": "log lambda", "disks": disks }),
    ))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn limb_diameter(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let sampling: usize = cfg.parse("sampling")?;
    let fractions: Vec<(u64, u64)> = match (cfg.parse_opt::<u64>("p")?, cfg.parse_opt::<u64>("q")?)
    {
        (Some(p), Some(q)) => vec![(p, q)],
        (None, None) => {
            let q_max: u64 = cfg.parse("q-max")?;
            (2..=q_max)
                .flat_map(|q| (1..q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
                .collect()
        }
        _ => return Err(CliError::config("--p and --q go together")),
    };
    let estimates: Vec<(u64, u64, LimbEstimate)> = fractions
        .iter()
        .map(|&(p, q)| {
            estimate_limb(p, q, sampling)
                .map(|e| (p, q, e))
                .map_err(|e| CliError::config(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("p,q,root_re,root_im,diameter,k\n");
    let mut rows = Vec::new();
    for (p, q, e) in &estimates {
        let _ = writeln!(
            csv,
            "{p},{q},{},{},{},{}",
            e.root.re, e.root.im, e.diameter_estimate, e.k_estimate
        );
        rows.push(json!({ "p": p, "q": q, "estimate": e }));
    }
    let k_max = estimates
        .iter()
        .map(|(_, _, e)| e.k_estimate)
        .fold(0.0, f64::max);
    let mut out = Outcome::new(json!({ "limbs": rows, "k_max": k_max }));
    out.csv = Some(csv);
    Ok(out)
}
