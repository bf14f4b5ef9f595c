use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::{best_rational, ComplexMap, DynamicsError};
use crate::point::{serialize_complex, Chart, Point};

/// Multiplier modulus below which a cycle is superattracting.
pub const SUPERATTRACTING: f64 = 1e-8;
/// Width of the indifferent band around `|multiplier| = 1`.
pub const INDIFFERENT_BAND: f64 = 1e-8;
/// Chordal tolerance for the exact-period (divisor) test.
pub const PERIOD_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKind {
    Superattracting,
    Attracting,
    Repelling,
    RationallyIndifferent,
    IrrationallyIndifferent,
}

impl CycleKind {
    pub fn from_multiplier(m: Complex64) -> Self {
        let r = m.norm();
        if r < SUPERATTRACTING {
            CycleKind::Superattracting
        } else if r < 1.0 - INDIFFERENT_BAND {
            CycleKind::Attracting
        } else if r > 1.0 + INDIFFERENT_BAND {
            CycleKind::Repelling
        } else {
            let t = m.arg() / std::f64::consts::TAU;
            match best_rational(t.rem_euclid(1.0), 1000) {
                Some((p, q)) if (t.rem_euclid(1.0) - p as f64 / q as f64).abs() < 1e-10 => {
                    CycleKind::RationallyIndifferent
                }
                _ => CycleKind::IrrationallyIndifferent,
            }
        }
    }

    pub fn is_attracting(self) -> bool {
        matches!(self, CycleKind::Superattracting | CycleKind::Attracting)
    }
}

/// A periodic orbit with its multiplier.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord {
    pub period: usize,
    pub points: Vec<Point>,
    pub multiplier: Complex64,
    pub kind: CycleKind,
}

impl CycleRecord {
    /// Smallest chordal distance from `p` to a point of the cycle.
    pub fn distance_to(&self, p: Point) -> f64 {
        self.points
            .iter()
            .map(|q| q.chordal_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// True when both records describe the same cycle within `tol`.
    pub fn same_cycle(&self, other: &CycleRecord, tol: f64) -> bool {
        self.period == other.period && other.points.iter().all(|&p| self.distance_to(p) < tol)
    }
}

impl Serialize for CycleRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Mult(Complex64);
        impl Serialize for Mult {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_complex(&self.0, s)
            }
        }
        let mut st = serializer.serialize_struct("CycleRecord", 4)?;
        st.serialize_field("period", &self.period)?;
        st.serialize_field("points", &self.points)?;
        st.serialize_field("multiplier", &Mult(self.multiplier))?;
        st.serialize_field("kind", &self.kind)?;
        st.end()
    }
}

/// Multiplier as the product of chart derivatives along `points`, starting
/// at index `start`.
pub fn cycle_multiplier<M: ComplexMap + ?Sized>(
    f: &M,
    points: &[Point],
    start: usize,
) -> Complex64 {
    let n = points.len();
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| {
        acc * f.chart_derivative(points[(start + k) % n])
    })
}

const MAX_NEWTON: usize = 200;

/// Locate a cycle of exact period `period` by Newton's method on
/// `g(u) = f^period(u) - u` in the chart of the seed.
///
/// Chart changes along the orbit contribute the transition factor
/// `-1/v^2`. The exact period is the smallest divisor `k` of `period` with
/// chordal `|f^k(z) - z| < PERIOD_TOLERANCE`.
pub fn find_cycle<M: ComplexMap + ?Sized>(
    f: &M,
    period: usize,
    seed: Point,
    tolerance: f64,
) -> Result<CycleRecord, DynamicsError> {
    if period == 0 {
        return Err(DynamicsError::InvalidInput(
            "period must be positive".into(),
        ));
    }
    let chart = seed.chart();
    let mut u = seed.coordinate();
    let mut converged = false;
    for _ in 0..MAX_NEWTON {
        let (g, dg) = return_map(f, period, chart, u);
        if !g.re.is_finite() || !g.im.is_finite() {
            return Err(DynamicsError::Diverged);
        }
        if g.norm() < tolerance {
            converged = true;
            break;
        }
        let step = g / (dg - 1.0);
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(DynamicsError::Diverged);
        }
        u -= step;
        // moving off the seed chart: continue in the other one
        if u.norm() > 4.0 {
            return find_cycle(f, period, Point::from_chart(chart, u), tolerance);
        }
        if step.norm() < 1e-16 * u.norm().max(1.0) {
            converged = return_map(f, period, chart, u).0.norm() < tolerance;
            break;
        }
    }
    if !converged {
        return Err(DynamicsError::Diverged);
    }
    // within tolerance of infinity in its own chart: the cycle passes through infinity
    if chart == Chart::W && u.norm() <= tolerance {
        u = Complex64::new(0.0, 0.0);
    }
    let mut points = vec![Point::from_chart(chart, u)];
    for _ in 1..period {
        points.push(f.apply(*points.last().unwrap()));
    }
    for k in (1..period).filter(|k| period % k == 0) {
        if points[k].chordal_distance(points[0]) < PERIOD_TOLERANCE {
            return Err(DynamicsError::CollapsedToLowerPeriod(k));
        }
    }
    let multiplier = cycle_multiplier(f, &points, 0);
    Ok(CycleRecord {
        period,
        points,
        multiplier,
        kind: CycleKind::from_multiplier(multiplier),
    })
}

/// `(coord_chart(f^n(p)) - u, d/du coord_chart(f^n(p)))` with `p` at `u`.
fn return_map<M: ComplexMap + ?Sized>(
    f: &M,
    n: usize,
    chart: Chart,
    u: Complex64,
) -> (Complex64, Complex64) {
    let mut p = Point::from_chart(chart, u);
    let mut d = if p.chart() == chart {
        Complex64::new(1.0, 0.0)
    } else {
        -(u * u).inv()
    };
    for _ in 0..n {
        d *= f.chart_derivative(p);
        p = f.apply(p);
    }
    let end = p.chart();
    let v = p.coordinate();
    if end != chart {
        d *= -(v * v).inv();
    }
    let back = p
        .coordinate_in(chart)
        .unwrap_or(Complex64::new(f64::INFINITY, 0.0));
    (back - u, d)
}
