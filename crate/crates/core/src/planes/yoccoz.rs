use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::families::quadratic_parameter_cell;
use super::{class, Cell, ClassifiedGrid, PlanesError, Window};

/// Disk of radius `ln 2 / q` about `2 pi i p/q` in the `log lambda` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YoccozDisk {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub center: Complex64,
    pub radius: f64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl YoccozDisk {
    pub fn new(p: u64, q: u64) -> Self {
        YoccozDisk {
            p,
            q,
            center: Complex64::new(0.0, TAU * p as f64 / q as f64),
            radius: LN_2 / q as f64,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// All disks `p/q` in lowest terms with `1 <= q <= q_max` and `0 <= p < q`.
pub fn yoccoz_disks(q_max: u64) -> Vec<YoccozDisk> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        for p in 0..q {
            if gcd(p, q) == 1 {
                out.push(YoccozDisk::new(p, q));
            }
        }
    }
    out
}

/// Render the disks; the smallest `q` wins where disks overlap.
///
/// Class `2 + (q - 1)` marks disk pixels with `value = q` and `aux = p`;
/// class 0 elsewhere.
pub fn yoccoz_disks_figure(q_max: u64, window: Window) -> Result<ClassifiedGrid, PlanesError> {
    if q_max < 2 {
        return Err(PlanesError::InvalidParameter(
            "q_max must be at least 2".into(),
        ));
    }
    let disks = yoccoz_disks(q_max);
    Ok(ClassifiedGrid::from_fn(window, |z| {
        disks
            .iter()
            .find(|d| d.contains(z))
            .map(|d| Cell::new(class::basin(d.q as usize - 1), d.q as f64, d.p as u32))
            .unwrap_or(Cell::new(class::BOUNDED, 0.0, 0))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimbEstimate {
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub root: Complex64,
    /// Lower estimate: largest sampled distance from the root to the limb.
    pub diameter_estimate: f64,
    pub k_estimate: f64,
    pub rays: usize,
}

/// `e^{2 pi i p/q}` with rounding noise below 1e-15 cleared, so that the
/// real cases stay on the real axis.
fn root_of_unity(p: u64, q: u64) -> Complex64 {
    let z = Complex64::from_polar(1.0, TAU * p as f64 / q as f64);
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(snap(z.re), snap(z.im))
}

/// Main-cardioid point with multiplier `e^{2 pi i p/q}`.
pub fn limb_root(p: u64, q: u64) -> Complex64 {
    let lambda = root_of_unity(p, q);
    lambda / 2.0 - lambda * lambda / 4.0
}

const LIMB_ITER: usize = 2000;
const LIMB_BISECTION: f64 = 1e-4;

/// Estimate the size of the `p/q` limb from its root.
///
/// Rays leave the root along the outward normal of the cardioid and at
/// `sampling` further angles within `pi/2 - 0.1` of it. Each ray is marched
/// until its first escaping sample, then the crossing is bisected.
pub fn limb_diameter(p: u64, q: u64, sampling: usize) -> Result<LimbEstimate, PlanesError> {
    if q < 2 || p == 0 || p >= q || gcd(p, q) != 1 {
        return Err(PlanesError::InvalidParameter(format!(
            "{p}/{q} is not a reduced fraction in (0, 1)"
        )));
    }
    let root = limb_root(p, q);
    let lambda = root_of_unity(p, q);
    // tangent of c(theta) = lambda/2 - lambda^2/4, turned clockwise
    let tangent = (Complex64::new(0.5, 0.0) - lambda / 2.0) * Complex64::new(0.0, 1.0) * lambda;
    let normal = tangent * Complex64::new(0.0, -1.0) / tangent.norm();
    let spread = PI / 2.0 - 0.1;
    let mut angles = vec![0.0];
    for k in 0..sampling {
        angles.push(-spread + 2.0 * spread * k as f64 / (sampling.max(2) - 1) as f64);
    }
    let step = (0.25 / (q * q) as f64).min(0.005);
    let inside =
        |c: Complex64| quadratic_parameter_cell(c, LIMB_ITER, false).class == class::BOUNDED;
    let mut best = 0.0f64;
    for a in angles {
        let dir = normal * Complex64::from_polar(1.0, a);
        let mut s = step;
        let mut last_in = 0.0;
        while s < 3.0 {
            if !inside(root + dir * s) {
                break;
            }
            last_in = s;
            s += step;
        }
        if s >= 3.0 {
            continue;
        }
        let (mut lo, mut hi) = (last_in, s);
        while hi - lo > LIMB_BISECTION {
            let mid = 0.5 * (lo + hi);
            if inside(root + dir * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = best.max(lo);
    }
    Ok(LimbEstimate {
        root,
        diameter_estimate: best,
        k_estimate: best * (q * q) as f64,
        rays: sampling + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_radii() {
        assert!((YoccozDisk::new(1, 2).radius - 0.34657359).abs() < 1e-8);
        assert!((YoccozDisk::new(1, 3).radius - 0.23104906).abs() < 1e-8);
        assert!((YoccozDisk::new(0, 1).radius - LN_2).abs() < 1e-15);
        assert_eq!(YoccozDisk::new(1, 2).center, Complex64::new(0.0, PI));
    }

    #[test]
    fn disks_stay_in_strip() {
        for d in yoccoz_disks(40).into_iter().filter(|d| d.q >= 2) {
            assert!(d.center.im - d.radius >= 0.0 && d.center.im + d.radius <= TAU);
        }
    }

    #[test]
    fn roots() {
        assert!((limb_root(1, 2) - Complex64::new(-0.75, 0.0)).norm() < 1e-15);
        let l = Complex64::from_polar(1.0, TAU / 3.0);
        assert!((limb_root(1, 3) - (l / 2.0 - l * l / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn half_limb_reaches_minus_two() {
        let e = limb_diameter(1, 2, 16).unwrap();
        assert!(
            (e.diameter_estimate - 1.25).abs() < 2e-4,
            "{}",
            e.diameter_estimate
        );
        assert!((e.k_estimate - 5.0).abs() < 1e-3);
    }

    #[test]
    fn figure_marks_disks() {
        let w = Window::new(Complex64::new(0.0, PI), 2.0, 2.0 * PI, 40, 120).unwrap();
        let g = yoccoz_disks_figure(5, w).unwrap();
        assert_eq!(g.at(Complex64::new(0.0, PI)).unwrap().value, 2.0);
        assert_eq!(g.at(Complex64::new(0.9, PI)).unwrap().class, class::BOUNDED);
    }
}
