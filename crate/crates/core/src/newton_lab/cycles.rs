use num_complex::Complex64;

use super::map::NewtonMap;
use super::NewtonError;
use crate::algebra::Polynomial;
use crate::dynamics::{CycleKind, CycleRecord};
use crate::point::Point;

/// Iterates spent on each critical orbit before looking for a cycle.
pub const CRITICAL_ORBIT_ITERATIONS: usize = 4000;
/// Distance from a root below which an orbit counts as converging to it.
const ROOT_CAPTURE: f64 = 1e-6;

/// Attracting cycles of `N` that avoid the roots of `f`, found by following
/// every free critical point.
pub fn find_bad_cycles(
    f: &Polynomial,
    h: f64,
    max_period: usize,
) -> Result<Vec<CycleRecord>, NewtonError> {
    let map = NewtonMap::new(f.clone(), h)?;
    bad_cycles_of(&map, max_period)
}

pub(crate) fn bad_cycles_of(
    map: &NewtonMap,
    max_period: usize,
) -> Result<Vec<CycleRecord>, NewtonError> {
    if map.degree() < 3 {
        return Ok(Vec::new());
    }
    let mut found: Vec<CycleRecord> = Vec::new();
    'critical: for c in map.free_critical_points()? {
        let mut z = c;
        for _ in 0..CRITICAL_ORBIT_ITERATIONS {
            z = match map.eval(z) {
                Ok(w) => w,
                Err(_) => continue 'critical,
            };
            if map.nearest_root(z, ROOT_CAPTURE).is_some() || !z.is_finite() {
                continue 'critical;
            }
        }
        let Some(cycle) = settle_cycle(map, z, max_period) else {
            continue;
        };
        if !cycle.kind.is_attracting() {
            continue;
        }
        let clear = cycle.points.iter().all(|p| match p {
            Point::Finite(w) => map.nearest_root(*w, ROOT_CAPTURE).is_none(),
            Point::Infinity => false,
        });
        if clear && !found.iter().any(|other| other.same_cycle(&cycle, 1e-6)) {
            found.push(cycle);
        }
    }
    Ok(found)
}

/// Smallest period `p <= max_period` with `N^p(z) ~ z`, refined by Newton's
/// method on `N^p(z) - z`.
fn settle_cycle(map: &NewtonMap, start: Complex64, max_period: usize) -> Option<CycleRecord> {
    let mut orbit = vec![start];
    for _ in 0..max_period {
        let next = map.eval(*orbit.last().expect("nonempty")).ok()?;
        orbit.push(next);
    }
    let period =
        (1..=max_period).find(|&p| (orbit[p] - start).norm() < 1e-6 * start.norm().max(1.0))?;
    let mut z = start;
    for _ in 0..50 {
        let (w, dw) = iterate_with_derivative(map, z, period).ok()?;
        let denom = dw - 1.0;
        if denom.norm() == 0.0 {
            break;
        }
        let step = (w - z) / denom;
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let mut points = Vec::with_capacity(period);
    let mut multiplier = Complex64::new(1.0, 0.0);
    let mut w = z;
    for _ in 0..period {
        points.push(Point::Finite(w));
        multiplier *= map.derivative(w).ok()?;
        w = map.eval(w).ok()?;
    }
    if (w - z).norm() > 1e-9 * z.norm().max(1.0) {
        return None;
    }
    Some(CycleRecord {
        period,
        points,
        multiplier,
        kind: CycleKind::from_multiplier(multiplier),
    })
}

fn iterate_with_derivative(
    map: &NewtonMap,
    z: Complex64,
    n: usize,
) -> Result<(Complex64, Complex64), NewtonError> {
    let mut w = z;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        d *= map.derivative(w)?;
        w = map.eval(w)?;
    }
    Ok((w, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_bad_cubic() {
        let f = Polynomial::from_real(&[2.0, -2.0, 0.0, 1.0]);
        let cycles = find_bad_cycles(&f, 1.0, 8).unwrap();
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        assert_eq!(c.period, 2);
        assert!(c.multiplier.norm() < 1e-10);
        assert!(c.distance_to(Point::Finite(Complex64::new(0.0, 0.0))) < 1e-12);
        assert!(c.distance_to(Point::Finite(Complex64::new(1.0, 0.0))) < 1e-12);
    }

    #[test]
    fn good_polynomials() {
        assert!(
            find_bad_cycles(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 1.0, 8)
                .unwrap()
                .is_empty()
        );
        assert!(
            find_bad_cycles(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), 1.0, 8)
                .unwrap()
                .is_empty()
        );
    }
}
