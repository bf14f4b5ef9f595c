//! Named maps accepted wherever a polynomial file is.

use std::f64::consts::TAU;
use std::path::Path;

use holodyn::algebra::{
    solve_parameter, AffineFamily, Condition, ParameterProblem, Polynomial, RationalMap,
};
use holodyn::dynamics::AnyMap;
use holodyn::Complex64;

use crate::error::{numeric, CliError};

/// Rotation number of the Siegel quadratic in the figure set.
pub const P_ALPHA_ROTATION: f64 = 0.78705954039469;
/// `a` in `z^3 + a z`, the circle intertwined with the segment.
pub const CIRCLE_SEGMENT_COEFF: f64 = 2.55799;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const PRESET_NAMES: &[&str] = &[
    "basilica",
    "rabbit",
    "airplane",
    "circle",
    "segment",
    "tuned-rabbit",
    "inside-out-basilica",
    "mating",
    "circle-segment",
    "basilica-basilica",
    "p-alpha",
    "cube-roots",
    "bad-cubic",
    "degenerate-cubic",
];

/// Upper period-3 centre.
pub fn rabbit_parameter() -> Result<Complex64, CliError> {
    let problem = ParameterProblem {
        family: AffineFamily::quadratic(),
        condition: Condition::CriticalPeriodic { period: 3 },
        seed: c(-0.1, 0.75),
    };
    Ok(solve_parameter(&problem, 1e-13).map_err(numeric)?.parameter)
}

/// Rabbit tuned with the segment: `f^9(0) = f^6(0)` near `-0.1 + 0.96 i`.
pub fn tuned_rabbit_parameter() -> Result<Complex64, CliError> {
    let problem = ParameterProblem {
        family: AffineFamily::quadratic(),
        condition: Condition::CriticalPreperiodic { m: 9, n: 6 },
        seed: c(-0.1, 0.96),
    };
    Ok(solve_parameter(&problem, 1e-13).map_err(numeric)?.parameter)
}

/// `(1 + i sqrt 3)/2`.
pub fn mating_parameter() -> Complex64 {
    c(0.5, 3f64.sqrt() / 2.0)
}

pub fn preset(name: &str) -> Result<Option<AnyMap>, CliError> {
    let quad = |c: Complex64| -> AnyMap { Polynomial::quadratic(c).into() };
    let map = match name {
        "basilica" => quad(c(-1.0, 0.0)),
        "rabbit" => quad(rabbit_parameter()?),
        "airplane" => quad(c(-1.754_877_666_246_692_7, 0.0)),
        "circle" => quad(c(0.0, 0.0)),
        "segment" => quad(c(-2.0, 0.0)),
        "tuned-rabbit" => quad(tuned_rabbit_parameter()?),
        "inside-out-basilica" => {
            let num = Polynomial::from_real(&[0.0, 0.0, 1.0]);
            let den = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
            RationalMap::new(num, den).map_err(numeric)?.into()
        }
        "mating" => {
            let num = Polynomial::new(vec![mating_parameter(), c(0.0, 0.0), c(1.0, 0.0)]);
            let den = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
            RationalMap::new(num, den).map_err(numeric)?.into()
        }
        "circle-segment" => Polynomial::new(vec![
            c(0.0, 0.0),
            c(0.0, CIRCLE_SEGMENT_COEFF),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .into(),
        "basilica-basilica" => Polynomial::new(vec![
            c(0.0, 7f64.sqrt() / 4.0),
            c(-0.75, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .into(),
        "p-alpha" => {
            let lambda = Complex64::from_polar(1.0, TAU * P_ALPHA_ROTATION);
            Polynomial::new(vec![c(0.0, 0.0), lambda, c(1.0, 0.0)]).into()
        }
        "cube-roots" => Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]).into(),
        "bad-cubic" => Polynomial::from_real(&[2.0, -2.0, 0.0, 1.0]).into(),
        "degenerate-cubic" => Polynomial::from_real(&[3.0, -3.0, 0.0, 1.0]).into(),
        _ => return Ok(None),
    };
    Ok(Some(map))
}

fn read_polynomial(path: &str) -> Result<Polynomial, CliError> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::io(path, e))?;
    Polynomial::parse_text(&text).map_err(|e| CliError::config(format!("{path}: {e}")))
}

/// A preset, or a polynomial file optionally divided by a second file.
pub fn load_map(spec: &str, den: Option<&str>) -> Result<AnyMap, CliError> {
    if let Some(map) = preset(spec)? {
        if den.is_some() {
            return Err(CliError::config(format!(
                "--den cannot be combined with the preset {spec:?}"
            )));
        }
        return Ok(map);
    }
    let num = read_polynomial(spec)?;
    match den {
        None => Ok(num.into()),
        Some(d) => {
            let den = read_polynomial(d)?;
            Ok(RationalMap::new(num, den)
                .map_err(|e| CliError::config(e.to_string()))?
                .into())
        }
    }
}

pub fn load_polynomial(spec: &str) -> Result<Polynomial, CliError> {
    match load_map(spec, None)? {
        AnyMap::Polynomial(p) => Ok(p),
        AnyMap::Rational(_) => Err(CliError::config(format!("{spec:?} is not a polynomial"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_loads() {
        for name in PRESET_NAMES {
            assert!(preset(name).unwrap().is_some(), "{name}");
        }
        assert!(preset("nope").unwrap().is_none());
    }

    #[test]
    fn inside_out_basilica_values() {
        let AnyMap::Rational(r) = preset("inside-out-basilica").unwrap().unwrap() else {
            panic!()
        };
        for z in [c(0.3, 0.2), c(-1.4, 0.7)] {
            let (v, _) = r.eval_with_derivative(z).unwrap();
            assert!((v - z * z / (z * z - 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn polynomial_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        let p = Polynomial::from_real(&[-0.729, 0.0, 0.0, 1.0]);
        std::fs::write(&path, p.to_text()).unwrap();
        assert_eq!(load_polynomial(path.to_str().unwrap()).unwrap(), p);
        assert_eq!(load_polynomial("nowhere.txt").unwrap_err().exit_code(), 2);
    }
}
