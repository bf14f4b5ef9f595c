use num_complex::Complex64;
use serde::Serialize;

use super::escape::PolynomialEscape;
use super::{class, PlanesError, Window};
use crate::algebra::Polynomial;
use crate::dynamics::{attracting_cycles, CycleRecord};

/// Disk about one point of an attracting cycle that the cycle's return map
/// sends strictly inside itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trap {
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub center: Complex64,
    pub radius: f64,
}

const TRAP_SAMPLES: usize = 256;

/// Largest radius `0.5 * 2^-k` for which `f^period` maps the circle about the
/// first cycle point into the concentric disk of radius `(1 + |m|)/2` times
/// smaller; by the maximum principle the whole disk is then trapped.
pub fn cycle_trap(f: &Polynomial, cycle: &CycleRecord) -> Option<Trap> {
    let center = cycle.points[0].finite()?;
    let rho = (1.0 + cycle.multiplier.norm()) / 2.0;
    let mut r = 0.5;
    while r > 1e-12 {
        let ok = (0..TRAP_SAMPLES).all(|k| {
            let mut z = center
                + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / TRAP_SAMPLES as f64);
            for _ in 0..cycle.period {
                z = f.eval(z);
            }
            (z - center).norm() < rho * r
        });
        if ok {
            return Some(Trap { center, radius: r });
        }
        r *= 0.5;
    }
    None
}

/// Radius of a disk about 0 containing the filled Julia set: past the
/// largest root of `|a_d| r^d - sum_{i<d} |a_i| r^i - r`, moduli grow by a
/// fixed positive amount per step.
pub fn filled_set_radius(f: &Polynomial) -> f64 {
    let a: Vec<f64> = f.coeffs().iter().map(|c| c.norm()).collect();
    let d = a.len() - 1;
    let g = |r: f64| {
        let lower: f64 = a[..d]
            .iter()
            .enumerate()
            .map(|(i, &ai)| ai * r.powi(i as i32))
            .sum();
        a[d] * r.powi(d as i32) - lower - r
    };
    let mut hi = f.escape_radius();
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    // largest sign change on a fine scan, then bisection
    let n = 4096;
    let lo = (0..=n)
        .rev()
        .map(|k| hi * k as f64 / n as f64)
        .find(|&r| g(r) <= 0.0)
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (lo, (lo + hi / n as f64).min(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaBound {
    pub area: f64,
    pub undecided_pixels: usize,
    pub escaped_pixels: usize,
    pub captured_pixels: usize,
    pub traps: Vec<Trap>,
}

/// Area of the pixels that neither escape nor enter an attracting-cycle trap
/// within `max_iter`, on a `refinement x refinement` resampling of `window`.
pub fn julia_area_bound(
    f: &Polynomial,
    window: Window,
    max_iter: usize,
    refinement: usize,
) -> Result<AreaBound, PlanesError> {
    let esc = PolynomialEscape::new(f)?;
    let filled = filled_set_radius(f);
    if !window.covers_disk(filled * (1.0 - 1e-12)) {
        return Err(PlanesError::InvalidWindow(format!(
            "window must cover the disk of radius {filled}"
        )));
    }
    let grid_window = window.resized(refinement, refinement)?;
    let traps: Vec<Trap> = attracting_cycles(f, 2000, 1e-9)?
        .iter()
        .filter_map(|c| cycle_trap(f, c))
        .collect();
    let r_sq = esc.radius() * esc.radius();
    let grid = super::ClassifiedGrid::from_fn(grid_window, |z0| {
        let mut z = z0;
        for n in 0..=max_iter {
            if z.norm_sqr() > r_sq {
                return super::Cell::new(class::ESCAPED, n as f64, n as u32);
            }
            if traps.iter().any(|t| (z - t.center).norm() < t.radius) {
                return super::Cell::new(class::BOUNDED, n as f64, n as u32);
            }
            if n < max_iter {
                z = f.eval(z);
            }
        }
        super::Cell::new(class::UNDECIDED, max_iter as f64, max_iter as u32)
    });
    let undecided = grid.count(class::UNDECIDED);
    Ok(AreaBound {
        area: undecided as f64 * grid_window.pixel_area(),
        undecided_pixels: undecided,
        escaped_pixels: grid.count(class::ESCAPED),
        captured_pixels: grid.count(class::BOUNDED),
        traps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Window {
        Window::square(2.0, 8).unwrap()
    }

    #[test]
    fn circle_band_shrinks() {
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let a = julia_area_bound(&f, square(), 200, 128).unwrap();
        let b = julia_area_bound(&f, square(), 200, 512).unwrap();
        assert!(b.area <= a.area);
        assert!(b.area < 0.1);
        assert_eq!(a.traps.len(), 1);
    }

    #[test]
    fn segment_band_small() {
        let f = Polynomial::from_real(&[-2.0, 0.0, 1.0]);
        assert!(julia_area_bound(&f, square(), 200, 256).unwrap().area < 0.1);
    }

    #[test]
    fn monotone_in_iterations() {
        let f = Polynomial::new(vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let mut last = f64::INFINITY;
        for n in [10, 20, 50, 100] {
            let a = julia_area_bound(&f, square(), n, 96).unwrap().area;
            assert!(a <= last);
            last = a;
        }
    }

    #[test]
    fn filled_radius_examples() {
        assert!((filled_set_radius(&Polynomial::from_real(&[0.0, 0.0, 1.0])) - 1.0).abs() < 1e-12);
        assert!((filled_set_radius(&Polynomial::from_real(&[-2.0, 0.0, 1.0])) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn window_must_cover_escape_disk() {
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!(julia_area_bound(&f, Window::square(0.5, 8).unwrap(), 10, 8).is_err());
    }
}
