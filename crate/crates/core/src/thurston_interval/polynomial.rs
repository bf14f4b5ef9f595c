use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ThurstonError;

/// Real polynomial with ascending coefficients.
fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn mul_linear(coeffs: &[f64], root: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &a) in coeffs.iter().enumerate() {
        out[k + 1] += a;
        out[k] -= root * a;
    }
    out
}

fn product_of_roots(roots: impl Iterator<Item = f64>) -> Vec<f64> {
    roots.fold(vec![1.0], |acc, r| mul_linear(&acc, r))
}

/// Antiderivative vanishing at 0.
fn integrate(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend(coeffs.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
    out
}

/// Degree-`d` interval polynomial `p(x) = v0 + A * int_0^x prod (t - c_i) dt`
/// with critical points `0 < c_1 < ... < c_{d-1} < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalPolynomial {
    pub coefficients: Vec<f64>,
    pub critical_points: Vec<f64>,
    pub critical_values: Vec<f64>,
    pub scale: f64,
}

impl IntervalPolynomial {
    fn from_parts(v0: f64, scale: f64, critical_points: Vec<f64>) -> Self {
        let q = integrate(&product_of_roots(critical_points.iter().copied()));
        let mut coefficients: Vec<f64> = q.iter().map(|a| a * scale).collect();
        coefficients[0] += v0;
        let critical_values = critical_points
            .iter()
            .map(|&c| eval(&coefficients, c))
            .collect();
        IntervalPolynomial {
            coefficients,
            critical_points,
            critical_values,
            scale,
        }
    }

    pub fn degree(&self) -> usize {
        self.critical_points.len() + 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval(&self.coefficients, x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.scale * self.critical_points.iter().map(|&c| x - c).product::<f64>()
    }

    /// Lap endpoints `0, c_1, ..., c_{d-1}, 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend(&self.critical_points);
        b.push(1.0);
        b
    }

    /// Lap containing `x` (the left one at a critical point).
    pub fn lap_of(&self, x: f64) -> usize {
        self.critical_points.partition_point(|&c| c < x)
    }

    /// Preimage of `y` in lap `j`: bisection to 1e-14, then one Newton polish.
    pub fn lap_inverse(&self, j: usize, y: f64) -> f64 {
        let b = self.breakpoints();
        let (mut lo, mut hi) = (b[j], b[j + 1]);
        let rising = self.eval(hi) > self.eval(lo);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if (self.eval(mid) < y) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        let d = self.derivative(x);
        let polished = if d != 0.0 {
            x - (self.eval(x) - y) / d
        } else {
            x
        };
        if polished >= b[j] && polished <= b[j + 1] {
            polished
        } else {
            x
        }
    }
}

/// Polynomial of degree `d` with prescribed boundary values and critical
/// values, found by Newton's method on `(c_1, ..., c_{d-1}, A)`.
pub fn solve_critical_values(
    d: usize,
    boundary: (f64, f64),
    targets: &[f64],
) -> Result<IntervalPolynomial, ThurstonError> {
    if d < 2 || targets.len() != d - 1 {
        return Err(ThurstonError::InfeasibleTargets(format!(
            "degree {d} needs {} targets",
            d.saturating_sub(1)
        )));
    }
    let mut seq = vec![boundary.0];
    seq.extend_from_slice(targets);
    seq.push(boundary.1);
    if seq.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(ThurstonError::InfeasibleTargets(
            "values must lie in [0, 1]".into(),
        ));
    }
    let first_sign = (seq[1] - seq[0]).signum();
    for (k, w) in seq.windows(2).enumerate() {
        let s = (w[1] - w[0]).signum();
        let expected = if k % 2 == 0 { first_sign } else { -first_sign };
        if s == 0.0 || s != expected {
            return Err(ThurstonError::InfeasibleTargets(format!(
                "values {seq:?} do not alternate"
            )));
        }
    }
    let mut seeds: Vec<Vec<f64>> = vec![(1..d).map(|i| i as f64 / d as f64).collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7475_7273);
    for _ in 0..8 {
        let mut c: Vec<f64> = (1..d)
            .map(|i| (i as f64 + rng.gen_range(-0.3..0.3)) / d as f64)
            .collect();
        c.sort_by(f64::total_cmp);
        seeds.push(c);
    }
    for seed in seeds {
        if let Some(p) = newton(boundary, targets, seed) {
            return Ok(p);
        }
    }
    Err(ThurstonError::NoConvergence)
}

fn residual(boundary: (f64, f64), targets: &[f64], c: &[f64], a: f64) -> Vec<f64> {
    let q = integrate(&product_of_roots(c.iter().copied()));
    let mut r: Vec<f64> = c
        .iter()
        .zip(targets)
        .map(|(&ci, &t)| boundary.0 + a * eval(&q, ci) - t)
        .collect();
    r.push(boundary.0 + a * eval(&q, 1.0) - boundary.1);
    r
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn newton(boundary: (f64, f64), targets: &[f64], mut c: Vec<f64>) -> Option<IntervalPolynomial> {
    let n = c.len();
    let q0 = integrate(&product_of_roots(c.iter().copied()));
    // scale so that the first critical value is met
    let mut a = (targets[0] - boundary.0) / eval(&q0, c[0]);
    let mut r = residual(boundary, targets, &c, a);
    for _ in 0..100 {
        if max_abs(&r) < 1e-14 {
            break;
        }
        // Jacobian columns: d/dc_k and d/dA
        let q = integrate(&product_of_roots(c.iter().copied()));
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for k in 0..n {
            let partial = integrate(&product_of_roots(
                c.iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k)
                    .map(|(_, &v)| v),
            ));
            for (i, row) in jac.iter_mut().enumerate() {
                let x = if i < n { c[i] } else { 1.0 };
                row[k] = -a * eval(&partial, x);
            }
        }
        for (i, row) in jac.iter_mut().enumerate() {
            let x = if i < n { c[i] } else { 1.0 };
            row[n] = eval(&q, x);
        }
        let step = solve_linear(jac, r.iter().map(|v| -v).collect())?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = c.iter().zip(&step).map(|(ci, s)| ci + t * s).collect();
            let ordered =
                trial.windows(2).all(|w| w[0] < w[1]) && trial[0] > 0.0 && trial[n - 1] < 1.0;
            if ordered {
                let ta = a + t * step[n];
                let tr = residual(boundary, targets, &trial, ta);
                if max_abs(&tr) < max_abs(&r) {
                    c = trial;
                    a = ta;
                    r = tr;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if max_abs(&r) >= 1e-12 {
        return None;
    }
    let p = IntervalPolynomial::from_parts(boundary.0, a, c);
    let ends_ok =
        (p.eval(0.0) - boundary.0).abs() < 1e-12 && (p.eval(1.0) - boundary.1).abs() < 1e-12;
    ends_ok.then_some(p)
}

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    Some(x)
}
