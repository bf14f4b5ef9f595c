use num_complex::Complex64;
use serde::Serialize;

use super::PlanesError;
use crate::algebra::Polynomial;
use crate::dynamics::{classify_critical_orbits, CriticalOutcome, ExternalAngle};

/// Modulus at which the Böttcher coordinate is taken as the identity
/// (after the centring shift).
pub const REFERENCE_RADIUS: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayOptions {
    /// Potential levels per halving of the potential.
    pub levels_per_halving: usize,
    /// Number of halvings below the starting potential.
    pub halvings: usize,
    pub newton_steps: usize,
    /// Spread allowed among the points of the last five halvings.
    pub landing_tolerance: f64,
    /// Iterations for the connectedness check on critical orbits.
    pub critical_iter: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        RayOptions {
            levels_per_halving: 4,
            halvings: 60,
            newton_steps: 20,
            landing_tolerance: 1e-4,
            critical_iter: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayPath {
    pub angle: ExternalAngle,
    #[serde(serialize_with = "crate::point::serialize_complex_vec")]
    pub points: Vec<Complex64>,
    /// Green's potential of each point, strictly decreasing.
    pub potentials: Vec<f64>,
    #[serde(serialize_with = "serialize_landing")]
    pub landing: Option<Complex64>,
    pub landed: bool,
}

fn serialize_landing<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => s.serialize_some(&[z.re, z.im]),
        None => s.serialize_none(),
    }
}

/// `f^n(z)` and its derivative.
fn iterate(f: &Polynomial, z: Complex64, n: usize) -> (Complex64, Complex64) {
    let mut w = z;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        let (v, dv) = f.eval_with_derivative(w);
        d *= dv;
        w = v;
    }
    (w, d)
}

/// Trace the external ray of `angle` by descending potential levels.
///
/// At potential `t` with `n` chosen so that `d^n t` is at least the
/// reference potential, the ray point solves
/// `f^n(z) = exp(d^n t + 2 pi i d^n angle) - a_{d-1}/d` by Newton from the
/// previous point. Levels are `t_0 2^(-k/S)`. Tracing stops early when
/// double precision can no longer resolve the next level.
pub fn trace_external_ray(
    f: &Polynomial,
    angle: ExternalAngle,
    options: &RayOptions,
) -> Result<RayPath, PlanesError> {
    let d = f.degree();
    if d < 2 {
        return Err(PlanesError::InvalidMap(
            "rays need degree at least 2".into(),
        ));
    }
    if (f.leading() - 1.0).norm() > 1e-14 {
        return Err(PlanesError::InvalidMap(
            "rays need a monic polynomial".into(),
        ));
    }
    if options.levels_per_halving == 0 || options.newton_steps == 0 {
        return Err(PlanesError::InvalidParameter(
            "ray options must be positive".into(),
        ));
    }
    for report in classify_critical_orbits(f, options.critical_iter, 1e-9)? {
        if matches!(report.outcome, CriticalOutcome::Escaping { .. }) {
            return Err(PlanesError::NotConnected);
        }
    }
    let shift = f.coeffs()[d - 1] / d as f64;
    let t0 = REFERENCE_RADIUS.ln();
    let s = options.levels_per_halving;
    let mut points = Vec::new();
    let mut potentials = Vec::new();
    let mut z =
        Complex64::from_polar(REFERENCE_RADIUS, std::f64::consts::TAU * angle.to_f64()) - shift;
    for k in 0..=options.halvings * s {
        let t = t0 * 2f64.powf(-(k as f64) / s as f64);
        let n = ((t0 / t).ln() / (d as f64).ln()).ceil().max(0.0) as usize;
        let scale = (d as f64).powi(n as i32);
        let phase = angle.times_pow(d as u64, n as u32).to_f64();
        let target =
            Complex64::from_polar((scale * t).exp(), std::f64::consts::TAU * phase) - shift;
        let mut ok = false;
        let mut trial = z;
        for _ in 0..options.newton_steps {
            let (v, dv) = iterate(f, trial, n);
            let r = v - target;
            if r.norm() <= 1e-12 * target.norm() {
                ok = true;
                break;
            }
            let step = r / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            trial -= step;
            if step.norm() <= 1e-15 * trial.norm().max(1e-300) {
                ok = (iterate(f, trial, n).0 - target).norm() <= 1e-6 * target.norm();
                break;
            }
        }
        if !ok {
            if k >= 5 * s {
                break;
            }
            return Err(PlanesError::RayBlocked { level: k });
        }
        z = trial;
        points.push(z);
        potentials.push(t);
    }
    let halving_points: Vec<Complex64> = points.iter().step_by(s).copied().collect();
    let tail = &halving_points[halving_points.len().saturating_sub(5)..];
    let spread = tail
        .iter()
        .flat_map(|a| tail.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let landed = tail.len() == 5 && spread < options.landing_tolerance;
    Ok(RayPath {
        angle,
        landing: landed.then(|| *points.last().expect("nonempty")),
        points,
        potentials,
        landed,
    })
}

/// Green's function estimate `ln|f^n(z)| / d^n` at the first `n` with
/// `|f^n(z)|` past the reference radius.
pub fn green_potential(f: &Polynomial, z: Complex64, max_iter: usize) -> Option<f64> {
    let d = f.degree() as f64;
    let mut w = z;
    let mut scale = 1.0;
    for _ in 0..max_iter {
        if w.norm() > REFERENCE_RADIUS {
            return Some(w.norm().ln() / scale);
        }
        w = f.eval(w);
        scale *= d;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(s: &str) -> ExternalAngle {
        s.parse().unwrap()
    }

    #[test]
    fn square_map_ray_zero() {
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let ray = trace_external_ray(&f, angle("0"), &RayOptions::default()).unwrap();
        assert!(ray.landed);
        assert!((ray.landing.unwrap() - 1.0).norm() < 1e-6);
        assert!(ray.points.iter().all(|z| z.im.abs() < 1e-12 && z.re >= 1.0));
    }

    #[test]
    fn chebyshev_ray_zero() {
        let f = Polynomial::from_real(&[-2.0, 0.0, 1.0]);
        let ray = trace_external_ray(&f, angle("0"), &RayOptions::default()).unwrap();
        assert!(ray.landed);
        assert!((ray.landing.unwrap() - 2.0).norm() < 1e-6);
    }

    #[test]
    fn basilica_third_ray() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let ray = trace_external_ray(&f, angle("1/3"), &RayOptions::default()).unwrap();
        assert!(ray.landed);
        let alpha = (1.0 - 5f64.sqrt()) / 2.0;
        assert!(
            (ray.landing.unwrap() - alpha).norm() < 1e-4,
            "{:?}",
            ray.landing
        );
        assert!(ray.potentials.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn potentials_match_green_function() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let ray = trace_external_ray(&f, angle("1/7"), &RayOptions::default()).unwrap();
        for (z, t) in ray.points.iter().zip(&ray.potentials).step_by(13) {
            let g = green_potential(&f, *z, 400).unwrap();
            assert!((g - t).abs() < 1e-6 * t.max(1e-12) + 1e-12, "{g} vs {t}");
        }
    }

    #[test]
    fn disconnected_is_refused() {
        let f = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            trace_external_ray(&f, angle("0"), &RayOptions::default()),
            Err(PlanesError::NotConnected)
        ));
    }
}
