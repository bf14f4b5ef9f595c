use num_complex::Complex64;
use serde::Serialize;

use super::NewtonError;
use crate::algebra::Polynomial;
use crate::point::serialize_complex_vec;

/// Critical values below this (relative to the coefficient scale) count as zero.
pub const ZERO_CRITICAL_VALUE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub degenerate: bool,
    /// Index pairs of nonzero critical values with equal argument.
    pub pairs: Vec<(usize, usize)>,
    #[serde(serialize_with = "serialize_complex_vec")]
    pub critical_points: Vec<Complex64>,
    #[serde(serialize_with = "serialize_complex_vec")]
    pub critical_values: Vec<Complex64>,
    /// Indices of critical points that are also roots of `f`.
    pub zero_critical_values: Vec<usize>,
}

/// The flow of `f` is degenerate when two critical values share an argument.
pub fn detect_degenerate(f: &Polynomial, tol: f64) -> Result<DegeneracyReport, NewtonError> {
    if f.degree() < 3 {
        return Err(NewtonError::InvalidInput(
            "degeneracy test needs degree at least 3".into(),
        ));
    }
    let critical_points: Vec<Complex64> = f
        .derivative()
        .distinct_roots(1e-6)?
        .into_iter()
        .map(|(c, _)| c)
        .collect();
    let critical_values: Vec<Complex64> = critical_points.iter().map(|&c| f.eval(c)).collect();
    let floor = ZERO_CRITICAL_VALUE * f.max_coeff_norm();
    let zero_critical_values: Vec<usize> = (0..critical_values.len())
        .filter(|&i| critical_values[i].norm() <= floor)
        .collect();
    let mut pairs = Vec::new();
    for i in 0..critical_values.len() {
        for j in i + 1..critical_values.len() {
            if zero_critical_values.contains(&i) || zero_critical_values.contains(&j) {
                continue;
            }
            // argument difference reduced into (-pi, pi]
            let gap = (critical_values[j] / critical_values[i]).arg().abs();
            if gap < tol {
                pairs.push((i, j));
            }
        }
    }
    Ok(DegeneracyReport {
        degenerate: !pairs.is_empty(),
        pairs,
        critical_points,
        critical_values,
        zero_critical_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_cases() {
        let r = detect_degenerate(&Polynomial::from_real(&[3.0, -3.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!(r.degenerate);
        let mut vals: Vec<f64> = r.critical_values.iter().map(|v| v.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 5.0).abs() < 1e-12);
        assert!(
            !detect_degenerate(&Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0]), 1e-9)
                .unwrap()
                .degenerate
        );
        let cube = detect_degenerate(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!(!cube.degenerate);
        assert_eq!(cube.critical_values.len(), 1);
    }

    #[test]
    fn root_at_critical_point_flagged() {
        let f = Polynomial::from_roots(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
        ]);
        let r = detect_degenerate(&f, 1e-9).unwrap();
        assert_eq!(r.zero_critical_values.len(), 1);
        assert!(!r.degenerate);
    }
}
