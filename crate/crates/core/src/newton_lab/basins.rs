use std::collections::VecDeque;

use num_complex::Complex64;

use super::cycles::bad_cycles_of;
use super::map::NewtonMap;
use super::NewtonError;
use crate::algebra::Polynomial;
use crate::dynamics::CycleRecord;
use crate::planes::{class, Cell, ClassifiedGrid, Window};
use crate::point::Point;

/// Distance (relative to `max(1, |root|)`) at which an orbit has reached a root.
pub const ROOT_CAPTURE: f64 = 1e-8;
/// Distance at which an orbit has reached a bad cycle.
pub const BAD_CAPTURE: f64 = 1e-6;
/// Longest bad cycle searched for when classifying.
pub const BAD_PERIOD: usize = 8;

/// Per-point classifier shared by the grid and the arc experiment.
pub(crate) struct BasinClassifier<'a> {
    map: &'a NewtonMap,
    bad: Vec<Vec<Complex64>>,
}

impl<'a> BasinClassifier<'a> {
    pub(crate) fn new(map: &'a NewtonMap) -> Result<Self, NewtonError> {
        let bad = bad_cycles_of(map, BAD_PERIOD)?
            .iter()
            .map(|c: &CycleRecord| {
                c.points
                    .iter()
                    .filter_map(|p| {
                        if let Point::Finite(z) = p {
                            Some(*z)
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(BasinClassifier { map, bad })
    }

    /// Class `basin(k)` for root `k`, `BAD` for a non-root cycle, else `UNDECIDED`.
    pub(crate) fn cell(&self, z0: Complex64, max_iter: usize) -> Cell {
        let mut z = z0;
        for n in 0..=max_iter {
            for (k, r) in self.map.roots().iter().enumerate() {
                if (z - r.value).norm() < ROOT_CAPTURE * r.value.norm().max(1.0) {
                    return Cell::new(class::basin(k), n as f64, k as u32);
                }
            }
            for (k, cycle) in self.bad.iter().enumerate() {
                if cycle.iter().any(|w| (z - w).norm() < BAD_CAPTURE) {
                    return Cell::new(class::BAD, n as f64, k as u32);
                }
            }
            if n == max_iter {
                break;
            }
            z = match self.map.eval(z) {
                Ok(w) if w.is_finite() => w,
                _ => break,
            };
        }
        Cell::new(class::UNDECIDED, max_iter as f64, 0)
    }
}

/// Root basins of the relaxed Newton map on `window`.
pub fn basin_grid(
    f: &Polynomial,
    h: f64,
    window: &Window,
    max_iter: usize,
) -> Result<ClassifiedGrid, NewtonError> {
    let map = NewtonMap::new(f.clone(), h)?;
    let classifier = BasinClassifier::new(&map)?;
    Ok(ClassifiedGrid::from_fn(*window, |z| {
        classifier.cell(z, max_iter)
    }))
}

/// Pixels of the 4-connected component of class `basin(root_index)` that
/// contains `root`; all false when `root` lies outside the window.
pub fn immediate_basin_mask(
    grid: &ClassifiedGrid,
    root_index: usize,
    root: Complex64,
) -> Vec<bool> {
    let w = grid.window;
    let mut mask = vec![false; w.len()];
    let Some((i0, j0)) = w.pixel(root) else {
        return mask;
    };
    let target = class::basin(root_index);
    if grid.get(i0, j0).class != target {
        return mask;
    }
    let mut queue = VecDeque::from([(i0, j0)]);
    mask[j0 * w.columns + i0] = true;
    while let Some((i, j)) = queue.pop_front() {
        let mut visit = |a: usize, b: usize| {
            let idx = b * w.columns + a;
            if !mask[idx] && grid.get(a, b).class == target {
                mask[idx] = true;
                queue.push_back((a, b));
            }
        };
        if i > 0 {
            visit(i - 1, j);
        }
        if i + 1 < w.columns {
            visit(i + 1, j);
        }
        if j > 0 {
            visit(i, j - 1);
        }
        if j + 1 < w.rows {
            visit(i, j + 1);
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cube_roots_equivariant() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let map = NewtonMap::new(f.clone(), 1.0).unwrap();
        let classifier = BasinClassifier::new(&map).unwrap();
        let w = Window::square(2.0, 60).unwrap();
        let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let root_of = |k: u32| map.roots()[k as usize].value;
        let mut checked = 0;
        for j in 0..w.rows {
            for i in 0..w.columns {
                let z = w.point(i, j);
                let a = classifier.cell(z, 100);
                let b = classifier.cell(z * rot, 100);
                if a.class == class::UNDECIDED || b.class == class::UNDECIDED {
                    continue;
                }
                assert!((root_of(a.aux) * rot - root_of(b.aux)).norm() < 1e-9);
                checked += 1;
            }
        }
        assert!(checked > 3500);
        let grid = basin_grid(&f, 1.0, &w, 100).unwrap();
        for k in 0..3 {
            assert!(grid.count(class::basin(k)) > 800);
        }
    }

    #[test]
    fn bad_region_has_area() {
        let f = Polynomial::from_real(&[2.0, -2.0, 0.0, 1.0]);
        let w = Window::new(c(0.5, 0.0), 2.0, 2.0, 128, 128).unwrap();
        let grid = basin_grid(&f, 1.0, &w, 200).unwrap();
        assert!(grid.count(class::BAD) > 100);
        assert_eq!(grid.at(c(0.0, 0.0)).unwrap().class, class::BAD);
    }

    #[test]
    fn double_root_basin() {
        let f = Polynomial::from_real(&[1.0, -2.0, 1.0]);
        let w = Window::new(c(1.0, 0.0), 0.5, 0.5, 32, 32).unwrap();
        let grid = basin_grid(&f, 1.0, &w, 200).unwrap();
        assert_eq!(grid.count(class::basin(0)), w.len());
        let map = NewtonMap::new(f, 1.0).unwrap();
        assert!((map.measured_root_multiplier(0).unwrap() - c(0.5, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn immediate_component() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let w = Window::square(2.0, 80).unwrap();
        let grid = basin_grid(&f, 1.0, &w, 100).unwrap();
        let mask = immediate_basin_mask(&grid, 0, NewtonMap::new(f, 1.0).unwrap().roots()[0].value);
        let inside = mask.iter().filter(|&&m| m).count();
        assert!(inside > 0 && inside < grid.count(class::basin(0)));
    }
}
