use std::f64::consts::PI;

use num_complex::Complex64;

use super::family::{EntireFamily, Step};
use super::orbit::{classify_orbit, OrbitOutcome};
use super::EntireError;
use crate::planes::{class, Cell, ClassifiedGrid, Window};

/// Distance at which an orbit counts as captured by an attracting cycle.
pub const CAPTURE: f64 = 1e-6;

/// Distance from `Im z = 0` or `Im z = pi` treated as lying on the line.
pub const BOUNDARY_SNAP: f64 = 4.0 * f64::EPSILON * PI;

/// Class codes of the strip render.
pub mod strip_class {
    /// Every iterate through `N` stayed in the strip.
    pub const IN: u8 = crate::planes::class::BOUNDED;
    /// Some iterate left the strip; `value` is the step.
    pub const LEFT: u8 = crate::planes::class::ESCAPED;
    /// The orbit overflowed while still in the strip.
    pub const OVERFLOW_IN: u8 = crate::planes::class::UNDECIDED;
}

/// Dynamic plane: `ESCAPED` with the dwell as value, `basin(k)` for capture
/// by the `k`-th attracting cycle of the singular orbits, else `UNDECIDED`.
pub fn render_exp_dynamic(
    family: &EntireFamily,
    window: Window,
    max_iter: usize,
) -> Result<ClassifiedGrid, EntireError> {
    if max_iter == 0 {
        return Err(EntireError::InvalidInput(
            "max_iter must be at least 1".into(),
        ));
    }
    let mut cycles: Vec<Vec<Complex64>> = Vec::new();
    for v in family.singular_values() {
        if let OrbitOutcome::Attracted { cycle, .. } = classify_orbit(family, v, max_iter.max(2000))
        {
            let known = cycles.iter().any(|c| {
                c.iter()
                    .any(|w| (w - cycle[0]).norm() < 1e-8 * w.norm().max(1.0))
            });
            if !known {
                cycles.push(cycle);
            }
        }
    }
    Ok(ClassifiedGrid::from_fn(window, |z0| {
        let mut z = z0;
        for n in 0..=max_iter {
            for (k, cycle) in cycles.iter().enumerate() {
                if cycle
                    .iter()
                    .any(|w| (z - w).norm() < CAPTURE * w.norm().max(1.0))
                {
                    return Cell::new(class::basin(k), n as f64, k as u32);
                }
            }
            if n == max_iter {
                break;
            }
            if family.kind.has_exp() && family.certified_escape(z) {
                return Cell::new(class::ESCAPED, (n + 1) as f64, 0);
            }
            z = match family.step(z) {
                Step::Finite(w) => w,
                Step::Overflow { .. } => return Cell::new(class::ESCAPED, (n + 1) as f64, 0),
            };
        }
        Cell::new(class::UNDECIDED, max_iter as f64, 0)
    }))
}

/// Parameter plane of `lambda e^z`: fate of the orbit of 0 for each pixel
/// `lambda`. Attracted orbits get `basin(period - 1)` with the period in `aux`.
pub fn render_exp_param(window: Window, max_iter: usize) -> Result<ClassifiedGrid, EntireError> {
    if max_iter == 0 {
        return Err(EntireError::InvalidInput(
            "max_iter must be at least 1".into(),
        ));
    }
    Ok(ClassifiedGrid::from_fn(window, |lambda| {
        param_cell(lambda, max_iter)
    }))
}

/// One parameter-plane pixel.
pub fn param_cell(lambda: Complex64, max_iter: usize) -> Cell {
    let family = EntireFamily {
        kind: super::EntireKind::Exp,
        lambda,
    };
    match classify_orbit(&family, Complex64::new(0.0, 0.0), max_iter) {
        OrbitOutcome::Escaping { iterations } => Cell::new(class::ESCAPED, iterations as f64, 0),
        OrbitOutcome::Attracted {
            period,
            multiplier_abs,
            ..
        } => Cell::new(class::basin(period - 1), multiplier_abs, period as u32),
        OrbitOutcome::Neutral {
            period,
            multiplier_abs,
            ..
        } => Cell::new(class::UNDECIDED, multiplier_abs, period as u32),
        OrbitOutcome::Undecided => Cell::new(class::UNDECIDED, max_iter as f64, 0),
    }
}

/// Points of the closed strip `0 <= Im z <= pi` whose first `n` iterates
/// under `lambda e^z` stay in the strip.
pub fn strip_invariant_set(
    lambda: f64,
    window: Window,
    n: usize,
) -> Result<ClassifiedGrid, EntireError> {
    if !(lambda > (-1.0f64).exp()) {
        return Err(EntireError::InvalidParameter(format!(
            "strip set needs real lambda > 1/e, got {lambda}"
        )));
    }
    let top = window.center.im + 0.5 * window.height;
    let bottom = window.center.im - 0.5 * window.height;
    if bottom < 0.0 || top > PI {
        return Err(EntireError::InvalidInput(
            "window must lie in 0 <= Im z <= pi".into(),
        ));
    }
    let family = EntireFamily::exp(lambda);
    Ok(ClassifiedGrid::from_fn(window, |z| {
        strip_cell(&family, z, n)
    }))
}

/// Strip membership of a single point.
pub fn strip_cell(family: &EntireFamily, z0: Complex64, n: usize) -> Cell {
    let mut z = z0;
    for k in 0..=n {
        if !(0.0..=PI).contains(&z.im) {
            return Cell::new(strip_class::LEFT, k as f64, 0);
        }
        if k == n {
            break;
        }
        // the boundary lines map into the real axis; rounding of pi must not push them out
        let next = if z.im.abs() <= BOUNDARY_SNAP {
            family.step(Complex64::new(z.re, 0.0))
        } else if (z.im - PI).abs() <= BOUNDARY_SNAP {
            match family.step(Complex64::new(z.re, 0.0)) {
                Step::Finite(w) => Step::Finite(-w),
                Step::Overflow { direction } => Step::Overflow {
                    direction: -direction,
                },
            }
        } else {
            family.step(z)
        };
        z = match next {
            Step::Finite(w) => w,
            Step::Overflow { .. } => return Cell::new(strip_class::OVERFLOW_IN, (k + 1) as f64, 0),
        };
    }
    Cell::new(strip_class::IN, n as f64, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire_maps::EntireKind;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quarter_has_fatou_region() {
        let w = Window::new(c(1.0, 0.0), 6.0, 6.0, 96, 96).unwrap();
        let g = render_exp_dynamic(&EntireFamily::exp(0.25), w, 200).unwrap();
        let attracted = g.count(class::basin(0));
        assert!(attracted > w.len() / 4, "{attracted}");
        assert!(g.count(class::ESCAPED) > 0);
    }

    #[test]
    fn lambda_one_mostly_escapes() {
        let w = Window::new(c(1.0, 0.0), 6.0, 6.0, 96, 96).unwrap();
        let g = render_exp_dynamic(&EntireFamily::exp(1.0), w, 100).unwrap();
        let escaped = g.count(class::ESCAPED) as f64 / w.len() as f64;
        assert!(escaped >= 0.95, "{escaped}");
    }

    #[test]
    fn sine_origin_never_escapes() {
        let s = EntireFamily::new(EntireKind::Sin, c(1.0, 0.0)).unwrap();
        let w = Window::new(c(0.0, 0.0), 0.2, 0.2, 16, 16).unwrap();
        let g = render_exp_dynamic(&s, w, 300).unwrap();
        assert_eq!(g.count(class::ESCAPED), 0);
    }

    #[test]
    fn param_plane_samples() {
        assert_eq!(param_cell(c(0.25, 0.0), 1000).class, class::basin(0));
        assert_eq!(param_cell(c(0.25, 0.0), 1000).aux, 1);
        assert_eq!(param_cell(c(1.0, 0.0), 1000).class, class::ESCAPED);
    }

    #[test]
    fn strip_boundaries() {
        let e = EntireFamily::exp(1.0);
        for x in [-3.0, 0.0, 0.5] {
            // the real axis is invariant; the orbit may overflow on it
            assert_ne!(strip_cell(&e, c(x, 0.0), 40).class, strip_class::LEFT);
            assert_ne!(strip_cell(&e, c(x, PI), 40).class, strip_class::LEFT);
        }
        assert_eq!(strip_cell(&e, c(-1.0, PI), 1).class, strip_class::IN);
        assert_eq!(
            strip_cell(&e, c(3.0, 2.0), 3),
            Cell::new(strip_class::LEFT, 1.0, 0)
        );
        let w = Window::new(c(0.0, 1.5), 4.0, 3.0, 10, 10).unwrap();
        assert!(strip_invariant_set(1.0, w, 10).is_ok());
        let outside = Window::new(c(0.0, 2.0), 4.0, 3.0, 10, 10).unwrap();
        assert!(strip_invariant_set(1.0, outside, 10).is_err());
        assert!(strip_invariant_set(0.2, w, 10).is_err());
    }
}
