use rayon::prelude::*;
use serde::Serialize;

use super::map::PiecewiseMonotoneMap;
use super::pchip::Pchip;
use super::polynomial::{solve_critical_values, IntervalPolynomial};
use super::ThurstonError;

/// Sample points used for sup norms and homeomorphism tables.
pub const DEFAULT_GRID: usize = 4096;

const CONJUGACY_TOLERANCE: f64 = 1e-8;

/// Increasing self-map of `[0, 1]` fixing both ends, kept as a table.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalHomeo {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl IntervalHomeo {
    pub fn from_fn(n: usize, h: impl Fn(f64) -> f64 + Sync) -> Self {
        let xs: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let mut values: Vec<f64> = xs.par_iter().map(|&x| h(x)).collect();
        values[0] = 0.0;
        values[n] = 1.0;
        IntervalHomeo { xs, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        Pchip::new(self.xs.clone(), self.values.clone()).eval(x)
    }

    pub fn distance_to_identity(&self) -> f64 {
        self.xs
            .iter()
            .zip(&self.values)
            .map(|(x, v)| (x - v).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }
}

#[derive(Clone, Debug)]
pub struct ThurstonStep {
    pub homeo: IntervalHomeo,
    pub polynomial: IntervalPolynomial,
    pub next: PiecewiseMonotoneMap,
    /// `sup |p - f o h|` on the grid.
    pub conjugacy_residual: f64,
}

/// One pullback on the default grid.
pub fn thurston_step(f: &PiecewiseMonotoneMap) -> Result<ThurstonStep, ThurstonError> {
    thurston_step_on(f, DEFAULT_GRID)
}

fn thurston_step_on(f: &PiecewiseMonotoneMap, grid: usize) -> Result<ThurstonStep, ThurstonError> {
    let p = solve_critical_values(f.degree(), f.boundary(), f.critical_values())?;
    for j in 0..f.degree() {
        let (a, b) = f.lap_range(j);
        let (lo, hi) = (p.eval(p.breakpoints()[j]), p.eval(p.breakpoints()[j + 1]));
        let gap = (a - lo.min(hi)).abs().max((b - lo.max(hi)).abs());
        if gap > CONJUGACY_TOLERANCE {
            return Err(ThurstonError::RangeMismatch { lap: j, gap });
        }
    }
    let lift = |x: f64| f.lap_inverse(p.lap_of(x), p.eval(x));
    let homeo = IntervalHomeo::from_fn(grid, lift);
    let conjugacy_residual = homeo
        .xs
        .par_iter()
        .zip(&homeo.values)
        .map(|(&x, &h)| (p.eval(x) - f.eval(h)).abs())
        .reduce(|| 0.0, f64::max);
    if conjugacy_residual > CONJUGACY_TOLERANCE {
        return Err(ThurstonError::RangeMismatch {
            lap: f.lap_of(0.5),
            gap: conjugacy_residual,
        });
    }
    let next = f.pulled_back(&p);
    Ok(ThurstonStep {
        homeo,
        polynomial: p,
        next,
        conjugacy_residual,
    })
}

#[derive(Clone, Debug)]
pub struct ThurstonRun {
    /// `f_0, ..., f_n`.
    pub maps: Vec<PiecewiseMonotoneMap>,
    /// `p_0, ..., p_{n-1}`.
    pub polys: Vec<IntervalPolynomial>,
    /// `sup |h_k - id|` per step.
    pub h_norms: Vec<f64>,
    /// `sup |p_k - p_{k-1}|` per step, the first entry against `f_0`.
    pub p_changes: Vec<f64>,
    pub conjugacy_residuals: Vec<f64>,
    /// `(h_0 o ... o h_{n-1})^-1` on the grid.
    pub phi: IntervalHomeo,
    pub converged: bool,
}

/// Iterates [`thurston_step`] until `sup |h_n - id| < tol` or `max_steps`.
pub fn thurston_run(
    f0: &PiecewiseMonotoneMap,
    max_steps: usize,
    tol: f64,
) -> Result<ThurstonRun, ThurstonError> {
    if max_steps == 0 {
        return Err(ThurstonError::InvalidMap("need at least one step".into()));
    }
    let grid = DEFAULT_GRID;
    let mut maps = vec![f0.clone()];
    let mut polys: Vec<IntervalPolynomial> = Vec::new();
    let mut h_norms = Vec::new();
    let mut p_changes = Vec::new();
    let mut conjugacy_residuals = Vec::new();
    let mut converged = false;
    for _ in 0..max_steps {
        let f = maps.last().expect("nonempty");
        let step = thurston_step_on(f, grid)?;
        let change = (0..=grid)
            .map(|k| k as f64 / grid as f64)
            .map(|x| {
                let previous = polys.last().map_or_else(|| f0.eval(x), |q| q.eval(x));
                (step.polynomial.eval(x) - previous).abs()
            })
            .fold(0.0, f64::max);
        let norm = step.homeo.distance_to_identity();
        h_norms.push(norm);
        p_changes.push(change);
        conjugacy_residuals.push(step.conjugacy_residual);
        polys.push(step.polynomial);
        maps.push(step.next);
        if norm < tol {
            converged = true;
            break;
        }
    }
    let last = maps.last().expect("nonempty");
    let phi = IntervalHomeo::from_fn(grid, |x| last.conjugacy_inverse(x));
    Ok(ThurstonRun {
        maps,
        polys,
        h_norms,
        p_changes,
        conjugacy_residuals,
        phi,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> PiecewiseMonotoneMap {
        PiecewiseMonotoneMap::piecewise_linear(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn tent_step_by_hand() {
        let s = thurston_step(&tent()).unwrap();
        for (&x, &h) in s.homeo.xs.iter().zip(&s.homeo.values) {
            let p = 4.0 * x * (1.0 - x);
            assert!((s.polynomial.eval(x) - p).abs() < 1e-12);
            let want = if x <= 0.5 { p / 2.0 } else { 1.0 - p / 2.0 };
            assert!((h - want).abs() < 1e-12);
        }
        assert!(s.homeo.is_increasing());
        assert!(s.conjugacy_residual < 1e-12);
    }

    #[test]
    fn polynomial_is_fixed() {
        let p = solve_critical_values(3, (0.0, 1.0), &[0.8, 0.3]).unwrap();
        let f = PiecewiseMonotoneMap::from_polynomial(p).unwrap();
        let s = thurston_step(&f).unwrap();
        assert!(s.homeo.distance_to_identity() < 1e-10);
        assert!(s.next.sup_distance(&f, 500) < 1e-10);
    }

    #[test]
    fn tent_run_reaches_logistic() {
        let run = thurston_run(&tent(), 20, 0.0).unwrap();
        let f20 = &run.maps[20];
        let err = (0..=2000)
            .map(|k| k as f64 / 2000.0)
            .map(|x| (f20.eval(x) - 4.0 * x * (1.0 - x)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        // limit conjugacy: tent o H = H o logistic with H(x) = (2/pi) asin(sqrt x)
        let limit = |x: f64| 2.0 / std::f64::consts::PI * x.sqrt().asin();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((f20.conjugacy(x) - limit(x)).abs() < 1e-6);
        }
        assert!(run.h_norms.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn arbitrary_laps_converge_to_logistic() {
        let f0 = PiecewiseMonotoneMap::parse("0 0\n0.1 0.6\n0.3 1\n0.5 0.7\n1 0\n").unwrap();
        let run = thurston_run(&f0, 40, 1e-5).unwrap();
        assert!(run.converged);
        let last = run.maps.last().unwrap();
        for k in 0..=50 {
            let x = k as f64 / 50.0;
            assert!((last.eval(x) - 4.0 * x * (1.0 - x)).abs() < 1e-5);
        }
    }

    #[test]
    fn three_lap_settles_by_step_nine() {
        let f0 =
            PiecewiseMonotoneMap::parse(include_str!("../../assets/maps/three_lap.txt")).unwrap();
        let run = thurston_run(&f0, 10, 0.0).unwrap();
        assert_eq!(run.maps.len(), 11);
        assert!(run.h_norms[9] < 1e-3, "{:?}", run.h_norms);
        assert!(run.maps.iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn kneading_is_invariant() {
        let f0 = PiecewiseMonotoneMap::parse("0 0\n0.3 0.85\n0.6 0.1\n1 1\n").unwrap();
        let run = thurston_run(&f0, 6, 0.0).unwrap();
        let k0 = run.maps[0].kneading(20);
        for f in &run.maps[1..] {
            assert_eq!(f.kneading(20), k0);
        }
        assert!(run.conjugacy_residuals.iter().all(|&r| r < 1e-8));
    }
}
