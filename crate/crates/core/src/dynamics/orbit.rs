use serde::Serialize;

use super::ComplexMap;
use crate::point::Point;

/// Finite orbit sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub start: Point,
    /// `points[0]` is the start; `points[k+1] = f(points[k])`.
    pub points: Vec<Point>,
    pub escaped: bool,
    pub escape_index: Option<usize>,
}

/// Iterate `n` times, stopping at the first point outside `escape_radius`
/// (infinity counts as outside).
pub fn orbit<M: ComplexMap + ?Sized>(
    f: &M,
    z0: Point,
    n: usize,
    escape_radius: f64,
) -> OrbitRecord {
    let outside = |p: Point| match p {
        Point::Infinity => true,
        Point::Finite(z) => z.norm() > escape_radius,
    };
    let mut points = Vec::with_capacity(n + 1);
    points.push(z0);
    let mut escape_index = outside(z0).then_some(0);
    let mut p = z0;
    if escape_index.is_none() {
        for k in 1..=n {
            p = f.apply(p);
            points.push(p);
            if outside(p) {
                escape_index = Some(k);
                break;
            }
        }
    }
    OrbitRecord {
        start: z0,
        points,
        escaped: escape_index.is_some(),
        escape_index,
    }
}
