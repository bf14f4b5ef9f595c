use std::fmt::Write as _;
use std::path::PathBuf;

use holodyn::algebra::{parse_complex, solve_parameter, AffineFamily, Condition, ParameterProblem};
use holodyn::dynamics::classify_critical_orbits;
use holodyn::siegel::{
    carleson_recursion_with, continued_fraction, default_a0, f_from_h, golden_mean, linearize,
    max_deviation, normalize_at_critical_point, RecursionOptions, SiegelFamily, COT_POLE_GUARD,
};
use holodyn::thurston_interval::{thurston_run, PiecewiseMonotoneMap, DEFAULT_GRID};
use holodyn::Complex64;
use serde_json::{json, Value};

use super::cx;
use crate::config::ExperimentConfig;
use crate::error::{numeric, CliError};
use crate::output::{plot_graphs, Outcome};

pub const TENT_MAP: &str = include_str!("../../../core/assets/maps/tent.txt");
pub const THREE_LAP_MAP: &str = include_str!("../../../core/assets/maps/three_lap.txt");

/// Order through which the two constructions of `f` are compared.
const DUAL_ORDER: usize = 40;

fn load_interval_map(spec: &str) -> Result<PiecewiseMonotoneMap, CliError> {
    let text = match spec {
        "tent" => TENT_MAP.to_string(),
        "three-lap" => THREE_LAP_MAP.to_string(),
        path => std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
    };
    PiecewiseMonotoneMap::parse(&text).map_err(|e| CliError::config(format!("{spec}: {e}")))
}

pub fn thurston_interval(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f0 = load_interval_map(cfg.require("map")?)?;
    let steps: usize = cfg.parse("steps")?;
    let tol: f64 = cfg.parse("tol")?;
    if steps == 0 {
        return Err(CliError::config("--steps must be positive"));
    }
    let run = thurston_run(&f0, steps, tol).map_err(numeric)?;
    let n = run.maps.len() - 1;
    let last = &run.maps[n];
    let result = json!({
        "degree": f0.degree(),
        "converged": run.converged,
        "steps": n,
        "h_norms": run.h_norms,
        "p_changes": run.p_changes,
        "conjugacy_residuals": run.conjugacy_residuals,
        "critical_values": run.maps.iter().map(|f| f.critical_values().to_vec()).collect::<Vec<_>>(),
        "kneading": f0.kneading(12),
        "final_polynomial": run.polys.last(),
        "final_change": last.sup_distance(&run.maps[n - 1], 2000),
    });
    let mut out = Outcome::new(result)
        .tolerance("tol", tol)
        .tolerance("grid", DEFAULT_GRID as f64);
    if let Some(plot) = cfg.get("plot") {
        let pick = |k: usize| &run.maps[k.min(n)];
        let (a, b, c) = (pick(0), pick(1), pick(9));
        let fa = |x: f64| a.eval(x);
        let fb = |x: f64| b.eval(x);
        let fc = |x: f64| c.eval(x);
        let img = plot_graphs(
            &[
                (&fa, [220, 30, 30]),
                (&fb, [30, 150, 30]),
                (&fc, [30, 30, 220]),
            ],
            512,
        );
        out.extra.push((PathBuf::from(plot), img.ppm()));
    }
    Ok(out)
}

fn parse_theta(raw: &str) -> Result<f64, CliError> {
    let theta = if raw == "golden" {
        golden_mean()
    } else {
        raw.parse::<f64>()
            .map_err(|e| CliError::config(format!("--theta {raw:?}: {e}")))?
    };
    if !(theta > 0.0 && theta < 1.0) {
        return Err(CliError::config(format!(
            "--theta must lie in (0, 1), got {theta}"
        )));
    }
    Ok(theta)
}

pub fn siegel(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let theta = parse_theta(cfg.require("theta")?)?;
    let rho = cfg.complex("rho")?;
    let order: usize = cfg.parse("order")?;
    let lin_order: usize = cfg.parse("linearizer-order")?;
    let imaginary_cot = cfg.flag("imaginary-cot")?;
    let family =
        SiegelFamily::with_rotation(rho, theta).map_err(|e| CliError::config(e.to_string()))?;
    // the linearizer may legitimately fail on small divisors
    let h = linearize(&family, lin_order.max(DUAL_ORDER + 1));
    let a0 = match cfg.require("a0")? {
        "default" => default_a0(rho),
        "normalized" => {
            let h = h.as_ref().map_err(numeric)?;
            normalize_at_critical_point(h).map_err(numeric)?.scale
        }
        raw => parse_complex(raw).map_err(|e| CliError::config(format!("--a0: {e}")))?,
    };
    let options = RecursionOptions {
        a0: Some(a0),
        imaginary_cot,
    };
    let f = carleson_recursion_with(theta, rho, order, options).map_err(numeric)?;
    let model = default_a0(rho);
    let dual: Value = match (&h, imaginary_cot) {
        (Ok(h), true) => {
            let g = f_from_h(&h.rescale(a0));
            let top = DUAL_ORDER.min(order).min(g.order());
            json!((0..=top)
                .map(|k| (g.coefficient(k) - f.coefficient(k)).norm())
                .fold(0.0, f64::max))
        }
        _ => Value::Null,
    };
    let mut csv = String::from("nu,re,im,abs_minus_a0\n");
    for (k, a) in f.coefficients().iter().enumerate() {
        let _ = writeln!(csv, "{k},{},{},{}", a.re, a.im, (a - a0).norm());
    }
    let result = json!({
        "theta": theta,
        "rho": cx(rho),
        "order": order,
        "a0": cx(a0),
        "model_value": cx(model),
        "max_deviation_from_model": max_deviation(&f, model),
        "max_deviation_from_a0": max_deviation(&f, a0),
        "dual_agreement": dual,
        "dual_order": DUAL_ORDER.min(order),
        "rotation": continued_fraction(theta, 20).ok(),
    });
    let mut out = Outcome::new(result).tolerance("cot_pole_guard", COT_POLE_GUARD);
    out.csv = Some(csv);
    Ok(out)
}

fn parse_condition(raw: &str) -> Result<Condition, CliError> {
    let bad = || {
        CliError::config(format!(
            "--condition {raw:?}: expected periodN, preperiodic:M,N or multiplier:RE,IM"
        ))
    };
    if let Some(n) = raw.strip_prefix("period") {
        let period = n.parse::<usize>().map_err(|_| bad())?;
        return Ok(Condition::CriticalPeriodic { period });
    }
    if let Some(rest) = raw.strip_prefix("preperiodic:") {
        let (m, n) = rest.split_once(',').ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        return Ok(Condition::CriticalPreperiodic { m, n });
    }
    if let Some(rest) = raw.strip_prefix("multiplier:") {
        let lambda = parse_complex(rest).map_err(|_| bad())?;
        return Ok(Condition::FixedPointMultiplier { lambda });
    }
    Err(bad())
}

pub fn solve_param(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = match cfg.require("family")? {
        "quadratic" => AffineFamily::quadratic(),
        other => {
            return Err(CliError::config(format!(
                "unknown family {other:?}; only quadratic is available"
            )))
        }
    };
    let condition = parse_condition(cfg.require("condition")?)?;
    let start: Complex64 = cfg.complex("start")?;
    let tol: f64 = cfg.parse("tol")?;
    let problem = ParameterProblem {
        family: family.clone(),
        condition,
        seed: start,
    };
    let solution = solve_parameter(&problem, tol).map_err(numeric)?;
    let member = family.member(solution.parameter);
    let critical = classify_critical_orbits(&member, 2000, 1e-9).map_err(numeric)?;
    let result = json!({
        "parameter": cx(solution.parameter),
        "residual": solution.residual,
        "iterations": solution.iterations,
        "critical_orbits": critical,
    });
    Ok(Outcome::new(result)
        .tolerance("tol", tol)
        .tolerance("classify_tolerance", 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conditions_parse() {
        assert_eq!(
            parse_condition("period3").unwrap(),
            Condition::CriticalPeriodic { period: 3 }
        );
        assert_eq!(
            parse_condition("preperiodic:9,6").unwrap(),
            Condition::CriticalPreperiodic { m: 9, n: 6 }
        );
        assert!(matches!(
            parse_condition("multiplier:0.5,0.1").unwrap(),
            Condition::FixedPointMultiplier { .. }
        ));
        assert!(parse_condition("period").is_err());
        assert!(parse_condition("cycle3").is_err());
    }

    #[test]
    fn theta_forms() {
        assert!((parse_theta("golden").unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(parse_theta("0.25").unwrap(), 0.25);
        assert!(parse_theta("1.5").is_err());
    }
}
