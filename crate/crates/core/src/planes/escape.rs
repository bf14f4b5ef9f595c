use num_complex::Complex64;

use super::{class, Cell, ClassifiedGrid, PlanesError, Window};
use crate::algebra::{Polynomial, RationalMap};
use crate::dynamics::{attracting_cycles, AnyMap, CycleRecord};
use crate::point::Point;

/// Radius past which escaping orbits are iterated further before the
/// smooth count is taken.
pub const SMOOTH_BAILOUT: f64 = 1e3;
/// Chordal capture radius around attracting cycles.
pub const CAPTURE_RADIUS: f64 = 1e-6;
/// Iterations used to enumerate attracting cycles from critical orbits.
const CYCLE_SEARCH_ITER: usize = 2000;

/// Continuous escape count `n + 1 - log_d(ln|z| / ln B)` for `|z| > B`.
pub fn smooth_count(n: usize, z: Complex64, degree: usize, bailout: f64) -> f64 {
    let ratio = z.norm().ln() / bailout.ln();
    let v = n as f64 + 1.0 - ratio.ln() / (degree as f64).ln();
    if v.is_finite() {
        v.max(0.0)
    } else {
        n as f64
    }
}

/// Escape-time iterator for a polynomial, with certified escape radius and
/// a Brent-style bitwise cycle check for early exit on bounded orbits.
#[derive(Clone, Debug)]
pub struct PolynomialEscape {
    coeffs: Vec<Complex64>,
    degree: usize,
    radius_sq: f64,
    bailout: f64,
}

impl PolynomialEscape {
    pub fn new(p: &Polynomial) -> Result<Self, PlanesError> {
        if p.degree() < 2 {
            return Err(PlanesError::InvalidMap(
                "escape time needs degree at least 2".into(),
            ));
        }
        let r = p.escape_radius();
        Ok(PolynomialEscape {
            coeffs: p.coeffs().to_vec(),
            degree: p.degree(),
            radius_sq: r * r,
            bailout: r.max(SMOOTH_BAILOUT),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq.sqrt()
    }

    #[inline]
    fn step(&self, z: Complex64) -> Complex64 {
        let mut acc = self.coeffs[self.degree];
        for &a in self.coeffs[..self.degree].iter().rev() {
            acc = acc * z + a;
        }
        acc
    }

    /// `Some(n)` with the first index past the escape radius, or `None`.
    pub fn escape_index(&self, z0: Complex64, max_iter: usize) -> Option<usize> {
        let cell = self.cell(z0, max_iter);
        (cell.class == class::ESCAPED).then_some(cell.aux as usize)
    }

    pub fn cell(&self, z0: Complex64, max_iter: usize) -> Cell {
        let mut z = z0;
        let mut reference = z;
        let mut lap = 1usize;
        for n in 0..=max_iter {
            if z.norm_sqr() > self.radius_sq {
                let mut m = n;
                let mut w = z;
                while w.norm() <= self.bailout && m < n + 64 {
                    w = self.step(w);
                    m += 1;
                }
                return Cell::new(
                    class::ESCAPED,
                    smooth_count(m, w, self.degree, self.bailout),
                    n as u32,
                );
            }
            if n == max_iter {
                break;
            }
            z = self.step(z);
            if z == reference {
                return Cell::new(class::BOUNDED, 0.0, n as u32 + 1);
            }
            if (n + 1) == lap {
                reference = z;
                lap *= 2;
            }
        }
        Cell::new(class::BOUNDED, 0.0, max_iter as u32)
    }
}

/// Classify pixels of a rational map by the attracting cycle they reach.
#[derive(Clone, Debug)]
pub struct BasinClassifier {
    map: RationalMap,
    cycles: Vec<CycleRecord>,
}

impl BasinClassifier {
    pub fn new(map: RationalMap, cycles: Vec<CycleRecord>) -> Self {
        BasinClassifier { map, cycles }
    }

    pub fn cycles(&self) -> &[CycleRecord] {
        &self.cycles
    }

    pub fn cell(&self, z0: Point, max_iter: usize) -> Cell {
        let mut p = z0;
        for n in 0..=max_iter {
            for (k, cycle) in self.cycles.iter().enumerate() {
                if let Some(slot) = cycle
                    .points
                    .iter()
                    .position(|&q| q.chordal_distance(p) < CAPTURE_RADIUS)
                {
                    return Cell::new(class::basin(k), n as f64, slot as u32);
                }
            }
            if n < max_iter {
                p = self.map.apply(p);
            }
        }
        Cell::new(class::UNDECIDED, max_iter as f64, 0)
    }
}

/// Escape-time render of a polynomial, or attracting-basin render of a
/// rational map (basin `k` of the `k`-th cycle found from critical orbits).
pub fn render_escape(
    f: &AnyMap,
    window: Window,
    max_iter: usize,
) -> Result<ClassifiedGrid, PlanesError> {
    if max_iter == 0 {
        return Err(PlanesError::InvalidParameter(
            "max_iter must be positive".into(),
        ));
    }
    match f {
        AnyMap::Polynomial(p) => {
            let esc = PolynomialEscape::new(p)?;
            Ok(ClassifiedGrid::from_fn(window, |z| esc.cell(z, max_iter)))
        }
        AnyMap::Rational(r) => {
            let cycles = attracting_cycles(r, CYCLE_SEARCH_ITER, 1e-9)?;
            let basins = BasinClassifier::new(r.clone(), cycles);
            Ok(ClassifiedGrid::from_fn(window, |z| {
                basins.cell(Point::Finite(z), max_iter)
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basilica_pixels() {
        let f: AnyMap = Polynomial::quadratic(c(-1.0, 0.0)).into();
        let g = render_escape(&f, Window::square(2.0, 101).unwrap(), 500).unwrap();
        assert_eq!(g.at(c(0.0, 0.0)).unwrap().class, class::BOUNDED);
        assert_eq!(g.get(100, 0).class, class::ESCAPED);
        assert!(g.cells.iter().all(|c| c.value.is_finite()));
    }

    #[test]
    fn unit_disk() {
        let f: AnyMap = Polynomial::from_real(&[0.0, 0.0, 1.0]).into();
        let w = Window::square(1.5, 120).unwrap();
        let g = render_escape(&f, w, 200).unwrap();
        let px = w.pixel_width() * std::f64::consts::SQRT_2;
        for j in 0..w.rows {
            for i in 0..w.columns {
                let r = w.point(i, j).norm();
                let cl = g.get(i, j).class;
                if r < 1.0 - px {
                    assert_eq!(cl, class::BOUNDED);
                } else if r > 1.0 + px {
                    assert_eq!(cl, class::ESCAPED);
                }
            }
        }
    }

    #[test]
    fn mating_basins() {
        let cc = c(0.5, 3f64.sqrt() / 2.0);
        let r = RationalMap::new(
            Polynomial::new(vec![cc, c(0.0, 0.0), c(1.0, 0.0)]),
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
        )
        .unwrap();
        let g = render_escape(&AnyMap::Rational(r), Window::square(2.0, 64).unwrap(), 200).unwrap();
        assert!(g.count(class::basin(0)) > 0 && g.count(class::basin(1)) > 0);
    }

    #[test]
    fn smooth_count_is_continuous_across_bands() {
        let esc = PolynomialEscape::new(&Polynomial::quadratic(c(0.3, 0.0))).unwrap();
        let a = esc.cell(c(0.0, 0.0), 100).value;
        let b = esc.cell(c(1e-9, 0.0), 100).value;
        assert!((a - b).abs() < 1e-6);
    }
}
