use num_complex::Complex64;
use serde::Serialize;

use super::{find_cycle, ComplexMap, CycleRecord, DynamicsError};
use crate::algebra::Polynomial;
use crate::point::Point;

/// Fate of one critical orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CriticalOutcome {
    /// The critical point lies on a cycle of this exact period.
    Periodic {
        period: usize,
    },
    /// Lands exactly on a repelling cycle after `tail` steps.
    Preperiodic {
        tail: usize,
        period: usize,
    },
    /// Converges to an attracting cycle without landing on it.
    Attracted {
        period: usize,
    },
    /// Left the certified escape disk at this iterate.
    Escaping {
        iterations: usize,
    },
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalReport {
    pub critical_point: Point,
    pub multiplicity: usize,
    pub outcome: CriticalOutcome,
    pub cycle: Option<CycleRecord>,
}

/// Classify every critical orbit of `f`.
///
/// The orbit is scanned for the first return `f^(l+p)(c) ~ f^l(c)` within
/// chordal `tolerance`; the detected cycle is then refined with
/// [`find_cycle`] and its kind decides the outcome. Indifferent cycles and
/// orbits without a return are undecided. For polynomials the
/// superattracting point at infinity is not reported.
pub fn classify_critical_orbits<M: ComplexMap + ?Sized>(
    f: &M,
    max_iter: usize,
    tolerance: f64,
) -> Result<Vec<CriticalReport>, DynamicsError> {
    if f.degree() < 2 {
        return Err(DynamicsError::InvalidInput(
            "degree must be at least 2".into(),
        ));
    }
    let escape = f.escape_radius();
    let mut reports = Vec::new();
    for (c, multiplicity) in f.critical_points()? {
        if escape.is_some() && c.is_infinite() {
            continue;
        }
        let (outcome, cycle) = classify_one(f, c, max_iter, tolerance, escape);
        reports.push(CriticalReport {
            critical_point: c,
            multiplicity,
            outcome,
            cycle,
        });
    }
    Ok(reports)
}

fn classify_one<M: ComplexMap + ?Sized>(
    f: &M,
    c: Point,
    max_iter: usize,
    tolerance: f64,
    escape: Option<f64>,
) -> (CriticalOutcome, Option<CycleRecord>) {
    let escaped = |p: Point| match (escape, p) {
        (None, _) => false,
        (Some(_), Point::Infinity) => true,
        (Some(r), Point::Finite(z)) => z.norm() > r,
    };
    let mut orbit = vec![c];
    let mut p = c;
    for k in 1..=max_iter {
        p = f.apply(p);
        if escaped(p) {
            return (CriticalOutcome::Escaping { iterations: k }, None);
        }
        if let Some(j) = (0..k)
            .rev()
            .find(|&j| orbit[j].chordal_distance(p) < tolerance)
        {
            let (tail, period) = (j, k - j);
            return match refine(f, period, orbit[j]) {
                Some(cycle) => {
                    let outcome = if cycle.kind.is_attracting() {
                        if cycle.distance_to(c) < tolerance {
                            CriticalOutcome::Periodic {
                                period: cycle.period,
                            }
                        } else {
                            CriticalOutcome::Attracted {
                                period: cycle.period,
                            }
                        }
                    } else if cycle.kind == super::CycleKind::Repelling {
                        if tail == 0 {
                            CriticalOutcome::Periodic {
                                period: cycle.period,
                            }
                        } else {
                            CriticalOutcome::Preperiodic {
                                tail: landing_index(&orbit, &cycle, tolerance),
                                period: cycle.period,
                            }
                        }
                    } else {
                        CriticalOutcome::Undecided
                    };
                    (outcome, Some(cycle))
                }
                None => (CriticalOutcome::Undecided, None),
            };
        }
        orbit.push(p);
    }
    (CriticalOutcome::Undecided, None)
}

/// First orbit index lying on the cycle.
fn landing_index(orbit: &[Point], cycle: &CycleRecord, tolerance: f64) -> usize {
    orbit
        .iter()
        .position(|&q| cycle.distance_to(q) < tolerance)
        .unwrap_or(orbit.len())
}

fn refine<M: ComplexMap + ?Sized>(f: &M, period: usize, seed: Point) -> Option<CycleRecord> {
    let mut period = period;
    for _ in 0..8 {
        match find_cycle(f, period, seed, 1e-12) {
            Ok(cycle) => return Some(cycle),
            Err(DynamicsError::CollapsedToLowerPeriod(k)) => period = k,
            Err(_) => return None,
        }
    }
    None
}

/// Distinct attracting cycles found from critical orbits.
pub fn attracting_cycles<M: ComplexMap + ?Sized>(
    f: &M,
    max_iter: usize,
    tolerance: f64,
) -> Result<Vec<CycleRecord>, DynamicsError> {
    let mut cycles: Vec<CycleRecord> = Vec::new();
    for report in classify_critical_orbits(f, max_iter, tolerance)? {
        if let Some(cycle) = report.cycle {
            if cycle.kind.is_attracting() && !cycles.iter().any(|c| c.same_cycle(&cycle, 1e-6)) {
                cycles.push(cycle);
            }
        }
    }
    Ok(cycles)
}

/// Closest approach of a critical orbit to the repelling fixed points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointApproach {
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub critical_point: Complex64,
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub fixed_point: Complex64,
    pub iterate: usize,
    pub distance: f64,
}

/// For each finite critical point, the smallest distance over `iterations`
/// iterates to the set of repelling fixed points.
pub fn repelling_fixed_point_approach(
    f: &Polynomial,
    iterations: usize,
) -> Result<Vec<FixedPointApproach>, DynamicsError> {
    let g = f - &Polynomial::monomial(Complex64::new(1.0, 0.0), 1);
    let repelling: Vec<Complex64> = g
        .roots()?
        .into_iter()
        .filter(|&z| f.eval_with_derivative(z).1.norm() > 1.0)
        .collect();
    if repelling.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (c, _) in Polynomial::critical_points(f)? {
        let Some(c) = c.finite() else { continue };
        let mut best = FixedPointApproach {
            critical_point: c,
            fixed_point: repelling[0],
            iterate: 0,
            distance: f64::INFINITY,
        };
        let mut z = c;
        for k in 1..=iterations {
            z = f.eval(z);
            if !z.norm().is_finite() {
                break;
            }
            for &q in &repelling {
                let d = (z - q).norm();
                if d < best.distance {
                    best = FixedPointApproach {
                        critical_point: c,
                        fixed_point: q,
                        iterate: k,
                        distance: d,
                    };
                }
            }
        }
        out.push(best);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{solve_parameter, AffineFamily, Condition, ParameterProblem, RationalMap};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn outcome_at(reports: &[CriticalReport], z: Point) -> CriticalOutcome {
        reports
            .iter()
            .find(|r| r.critical_point.chordal_distance(z) < 1e-9)
            .unwrap()
            .outcome
    }

    #[test]
    fn intertwining_cubic_is_critically_periodic() {
        let s7 = 7f64.sqrt();
        let f = Polynomial::new(vec![
            c(0.0, s7 / 4.0),
            c(-0.75, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let reports = classify_critical_orbits(&f, 200, 1e-9).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert_eq!(r.outcome, CriticalOutcome::Periodic { period: 2 });
            assert!(r.cycle.as_ref().unwrap().multiplier.norm() < 1e-8);
        }
        let cyc = reports
            .iter()
            .find(|r| r.critical_point.chordal_distance(Point::new(0.5, 0.0)) < 1e-12)
            .unwrap();
        let hand = c(-0.25, s7 / 4.0);
        assert!(cyc.cycle.as_ref().unwrap().distance_to(Point::Finite(hand)) < 1e-12);
    }

    #[test]
    fn mating_critical_orbits() {
        let cc = c(0.5, 3f64.sqrt() / 2.0);
        let f = RationalMap::new(
            Polynomial::new(vec![cc, c(0.0, 0.0), c(1.0, 0.0)]),
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
        )
        .unwrap();
        let reports = classify_critical_orbits(&f, 100, 1e-9).unwrap();
        assert_eq!(
            outcome_at(&reports, Point::new(0.0, 0.0)),
            CriticalOutcome::Periodic { period: 3 }
        );
        assert_eq!(
            outcome_at(&reports, Point::Infinity),
            CriticalOutcome::Periodic { period: 2 }
        );
        assert_eq!(attracting_cycles(&f, 100, 1e-9).unwrap().len(), 2);
    }

    #[test]
    fn rabbit_and_tuned_rabbit() {
        let fam = AffineFamily::quadratic();
        let rabbit = solve_parameter(
            &ParameterProblem {
                family: fam.clone(),
                condition: Condition::CriticalPeriodic { period: 3 },
                seed: c(-0.1, 0.75),
            },
            1e-13,
        )
        .unwrap();
        let reports = classify_critical_orbits(&fam.member(rabbit.parameter), 100, 1e-9).unwrap();
        assert_eq!(reports[0].outcome, CriticalOutcome::Periodic { period: 3 });

        let tuned = solve_parameter(
            &ParameterProblem {
                family: fam.clone(),
                condition: Condition::CriticalPreperiodic { m: 9, n: 6 },
                seed: c(-0.1, 0.96),
            },
            1e-13,
        )
        .unwrap();
        let reports = classify_critical_orbits(&fam.member(tuned.parameter), 100, 1e-9).unwrap();
        assert_eq!(
            reports[0].outcome,
            CriticalOutcome::Preperiodic { tail: 4, period: 1 }
        );
    }

    #[test]
    fn escape_and_attraction() {
        let f = Polynomial::quadratic(c(0.3, 0.0));
        let r = classify_critical_orbits(&f, 100, 1e-9).unwrap();
        assert!(matches!(r[0].outcome, CriticalOutcome::Escaping { .. }));
        let f = Polynomial::quadratic(c(0.2, 0.1));
        let r = classify_critical_orbits(&f, 500, 1e-10).unwrap();
        assert_eq!(r[0].outcome, CriticalOutcome::Attracted { period: 1 });
    }

    #[test]
    fn parabolic_is_undecided() {
        let f = Polynomial::quadratic(c(0.25, 0.0));
        let r = classify_critical_orbits(&f, 2000, 1e-9).unwrap();
        assert_eq!(r[0].outcome, CriticalOutcome::Undecided);
    }

    #[test]
    fn intertwining_diagnostic_runs() {
        let f = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 2.55799), c(0.0, 0.0), c(1.0, 0.0)]);
        let d = repelling_fixed_point_approach(&f, 20).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|a| a.distance.is_finite()));
    }
}
