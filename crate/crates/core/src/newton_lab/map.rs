use num_complex::Complex64;

use super::NewtonError;
use crate::algebra::Polynomial;

/// `|f'|` below this (relative to the coefficient scale) counts as a zero.
pub const SINGULAR_TOLERANCE: f64 = 1e-13;
/// Roots closer than this (relative) are merged into one multiple root.
pub const ROOT_CLUSTER: f64 = 1e-3;

/// A root of `f` with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Relaxed Newton map `N(z) = z - h f(z)/f'(z)`.
#[derive(Clone, Debug)]
pub struct NewtonMap {
    f: Polynomial,
    df: Polynomial,
    h: f64,
    roots: Vec<Root>,
    scale: f64,
}

impl NewtonMap {
    pub fn new(f: Polynomial, h: f64) -> Result<Self, NewtonError> {
        let d = f.degree();
        if d < 1 {
            return Err(NewtonError::InvalidInput(
                "polynomial must have degree at least 1".into(),
            ));
        }
        if !(h > 0.0 && h <= d as f64) {
            return Err(NewtonError::InvalidInput(format!(
                "relaxation h = {h} must lie in (0, {d}]"
            )));
        }
        let roots = polished_roots(&f)?;
        let df = f.derivative();
        let scale = f.max_coeff_norm();
        Ok(NewtonMap {
            f,
            df,
            h,
            roots,
            scale,
        })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn with_h(&self, h: f64) -> Result<Self, NewtonError> {
        if !(h > 0.0 && h <= self.degree() as f64) {
            return Err(NewtonError::InvalidInput(format!(
                "relaxation h = {h} must lie in (0, {}]",
                self.degree()
            )));
        }
        Ok(NewtonMap { h, ..self.clone() })
    }

    /// `N(z)`, with the removable value at a root.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, NewtonError> {
        let (v, d) = self.f.eval_with_derivative(z);
        let tol = SINGULAR_TOLERANCE * self.scale;
        if d.norm() <= tol {
            if v.norm() <= tol {
                return Ok(z);
            }
            return Err(NewtonError::NearSingularity(z));
        }
        Ok(z - self.h * v / d)
    }

    /// `N'(z) = 1 - h + h f f'' / f'^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64, NewtonError> {
        let (v, d, dd) = self.f.eval_with_two_derivatives(z);
        if d.norm() <= SINGULAR_TOLERANCE * self.scale {
            if let Some(r) = self
                .roots
                .iter()
                .find(|r| (r.value - z).norm() <= ROOT_CLUSTER * z.norm().max(1.0))
            {
                return Ok(Complex64::new(1.0 - self.h / r.multiplicity as f64, 0.0));
            }
            return Err(NewtonError::NearSingularity(z));
        }
        Ok(1.0 - self.h + self.h * v * dd / (d * d))
    }

    /// `1 - h/m` at root `k`.
    pub fn root_multiplier(&self, k: usize) -> f64 {
        1.0 - self.h / self.roots[k].multiplicity as f64
    }

    /// Mean of `(N(z) - r)/(z - r)` over eight points on a small circle about
    /// root `k`; the mean cancels the first seven Taylor terms.
    pub fn measured_root_multiplier(&self, k: usize) -> Result<Complex64, NewtonError> {
        let r = self.roots[k].value;
        let sep = self
            .roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, o)| (o.value - r).norm())
            .fold(1.0f64, f64::min);
        let delta = 1e-2 * sep;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..8 {
            let u = Complex64::from_polar(delta, std::f64::consts::PI * j as f64 / 4.0);
            sum += (self.eval(r + u)? - r) / u;
        }
        Ok(sum / 8.0)
    }

    /// Index of a root within `tol` of `z`.
    pub fn nearest_root(&self, z: Complex64, tol: f64) -> Option<usize> {
        self.roots.iter().position(|r| (r.value - z).norm() < tol)
    }

    /// Zeros of `N'` that are not roots of `f`: zeros of `f''` when `h = 1`,
    /// otherwise of `(1 - h) f'^2 + h f f''`.
    pub fn free_critical_points(&self) -> Result<Vec<Complex64>, NewtonError> {
        let ddf = self.df.derivative();
        let q = if self.h == 1.0 {
            ddf
        } else {
            let a = &(&self.df * &self.df).scale(Complex64::new(1.0 - self.h, 0.0));
            let b = &(&self.f * &ddf).scale(Complex64::new(self.h, 0.0));
            trim(&(a + b))
        };
        if q.degree() == 0 {
            return Ok(Vec::new());
        }
        let candidates = q.distinct_roots(ROOT_CLUSTER)?;
        Ok(candidates
            .into_iter()
            .map(|(c, _)| c)
            .filter(|&c| self.nearest_root(c, 1e-6 * c.norm().max(1.0)).is_none())
            .collect())
    }
}

/// Drops leading coefficients that cancelled to rounding level.
fn trim(p: &Polynomial) -> Polynomial {
    let scale = p.max_coeff_norm();
    let mut c = p.coeffs().to_vec();
    while c.len() > 1 && c.last().expect("nonempty").norm() <= 1e-12 * scale {
        c.pop();
    }
    Polynomial::new(c)
}

/// Distinct roots; a cluster of multiplicity `m` is polished as the simple
/// root of `f^(m-1)` nearest the cluster mean.
fn polished_roots(f: &Polynomial) -> Result<Vec<Root>, NewtonError> {
    let clusters = f.distinct_roots(ROOT_CLUSTER)?;
    let mut out = Vec::with_capacity(clusters.len());
    for (mean, m) in clusters {
        let mut g = f.clone();
        for _ in 1..m {
            g = g.derivative();
        }
        let mut z = mean;
        for _ in 0..20 {
            let (v, d) = g.eval_with_derivative(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            z -= step;
            if step.norm() <= 1e-16 * z.norm().max(1.0) {
                break;
            }
        }
        let value = if (z - mean).norm() < 1e-3 * mean.norm().max(1.0) {
            z
        } else {
            mean
        };
        out.push(Root {
            value,
            multiplicity: m,
        });
    }
    Ok(out)
}
