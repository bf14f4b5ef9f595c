use num_complex::Complex64;

use super::escape::{smooth_count, SMOOTH_BAILOUT};
use super::{class, Cell, ClassifiedGrid, PlanesError, Window};

fn check_iter(max_iter: usize) -> Result<(), PlanesError> {
    if max_iter == 0 {
        return Err(PlanesError::InvalidParameter(
            "max_iter must be positive".into(),
        ));
    }
    Ok(())
}

/// Escape classification of the critical orbit `0 -> c -> ...` of the
/// quadratic family; `conjugate` selects the antiholomorphic `conj(z)^2 + c`.
pub fn quadratic_parameter_cell(c: Complex64, max_iter: usize, conjugate: bool) -> Cell {
    let step = |z: Complex64| {
        let z = if conjugate { z.conj() } else { z };
        z * z + c
    };
    let mut z = Complex64::new(0.0, 0.0);
    let mut reference = z;
    let mut lap = 1usize;
    for n in 0..=max_iter {
        if z.norm_sqr() > 4.0 {
            let mut m = n;
            let mut w = z;
            while w.norm() <= SMOOTH_BAILOUT && m < n + 64 {
                w = step(w);
                m += 1;
            }
            return Cell::new(
                class::ESCAPED,
                smooth_count(m, w, 2, SMOOTH_BAILOUT),
                n as u32,
            );
        }
        if n == max_iter {
            break;
        }
        z = step(z);
        if z == reference {
            return Cell::new(class::BOUNDED, 0.0, n as u32 + 1);
        }
        if n + 1 == lap {
            reference = z;
            lap *= 2;
        }
    }
    Cell::new(class::BOUNDED, 0.0, max_iter as u32)
}

/// Mandelbrot set render over parameter `c`.
pub fn render_mandelbrot(window: Window, max_iter: usize) -> Result<ClassifiedGrid, PlanesError> {
    check_iter(max_iter)?;
    Ok(ClassifiedGrid::from_fn(window, |c| {
        quadratic_parameter_cell(c, max_iter, false)
    }))
}

/// Tricorn render; symmetric under rotation by a third of a turn about 0.
pub fn render_tricorn(window: Window, max_iter: usize) -> Result<ClassifiedGrid, PlanesError> {
    check_iter(max_iter)?;
    Ok(ClassifiedGrid::from_fn(window, |c| {
        quadratic_parameter_cell(c, max_iter, true)
    }))
}

/// Radius of the disk about 0 on which `lambda z^2 + z^3` halves moduli.
pub fn cubic_contraction_radius(lambda: Complex64) -> f64 {
    let a = lambda.norm();
    (-a + (a * a + 2.0).sqrt()) / 2.0
}

/// Number of finite critical points of `lambda z^2 + z^3` attracted to 0.
///
/// The critical point 0 always counts; the free critical point
/// `-2 lambda / 3` counts once its orbit enters the contraction disk.
pub fn cubic_u_cell(lambda: Complex64, max_iter: usize) -> Cell {
    let r0 = cubic_contraction_radius(lambda);
    let escape = 2.0f64.max(2.0 + lambda.norm());
    let mut z = -2.0 * lambda / 3.0;
    for n in 0..=max_iter {
        let m = z.norm();
        if m < r0 {
            return Cell::new(2, n as f64, n as u32);
        }
        if m > escape {
            return Cell::new(1, n as f64, n as u32);
        }
        if n < max_iter {
            z = z * z * (lambda + z);
        }
    }
    Cell::new(1, max_iter as f64, max_iter as u32)
}

/// Parameter plane of `lambda z^2 + z^3`: class 2 where both finite critical
/// points are attracted to 0, class 1 otherwise.
pub fn render_cubic_u(window: Window, max_iter: usize) -> Result<ClassifiedGrid, PlanesError> {
    check_iter(max_iter)?;
    Ok(ClassifiedGrid::from_fn(window, |l| {
        cubic_u_cell(l, max_iter)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mandelbrot_points() {
        assert_eq!(
            quadratic_parameter_cell(c(0.0, 0.0), 500, false).class,
            class::BOUNDED
        );
        assert_eq!(
            quadratic_parameter_cell(c(0.25, 0.0), 500, false).class,
            class::BOUNDED
        );
        assert_eq!(
            quadratic_parameter_cell(c(0.26, 0.0), 500, false).class,
            class::ESCAPED
        );
        assert_eq!(
            quadratic_parameter_cell(c(-2.0, 0.0), 500, false).class,
            class::BOUNDED
        );
    }

    #[test]
    fn tricorn_points() {
        assert_eq!(
            quadratic_parameter_cell(c(0.0, 0.0), 500, true).class,
            class::BOUNDED
        );
        assert_eq!(
            quadratic_parameter_cell(c(-2.0, 0.0), 500, true).class,
            class::BOUNDED
        );
        assert_eq!(
            quadratic_parameter_cell(c(1.0, 1.0), 500, true).class,
            class::ESCAPED
        );
    }

    #[test]
    fn cubic_u_points() {
        assert_eq!(cubic_u_cell(c(0.0, 0.0), 100).class, 2);
        assert_eq!(cubic_u_cell(c(0.5, 0.0), 100).class, 2);
        assert!(cubic_u_cell(c(10.0, 0.0), 100).class < 2);
    }

    #[test]
    fn cubic_contraction_disk_contracts() {
        for l in [c(0.0, 0.0), c(0.5, 0.3), c(3.0, -1.0)] {
            let r = cubic_contraction_radius(l);
            for k in 0..32 {
                let z = Complex64::from_polar(r * 0.999, k as f64 * 0.2);
                assert!((z * z * (l + z)).norm() <= 0.5 * z.norm() + 1e-15);
            }
        }
    }
}
