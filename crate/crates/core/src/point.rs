//! Points of the Riemann sphere.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeTuple, Serializer};

/// A point of the extended plane.
///
/// Near infinity computations switch to the coordinate `w = 1/z`; see
/// [`Chart`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

/// Coordinate chart on the sphere.
///
/// `Z` is the identity chart and is used on the closed unit disk, `W` is
/// `w = 1/z` and is used outside it (including at infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    Z,
    W,
}

impl Point {
    pub fn new(re: f64, im: f64) -> Self {
        Point::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    /// Preferred chart for this point.
    pub fn chart(self) -> Chart {
        match self {
            Point::Finite(z) if z.norm_sqr() <= 1.0 => Chart::Z,
            _ => Chart::W,
        }
    }

    /// Coordinate of the point in `chart`. Returns `None` for infinity in the
    /// `Z` chart.
    pub fn coordinate_in(self, chart: Chart) -> Option<Complex64> {
        match (self, chart) {
            (Point::Finite(z), Chart::Z) => Some(z),
            (Point::Infinity, Chart::Z) => None,
            (Point::Finite(z), Chart::W) => {
                if z == Complex64::new(0.0, 0.0) {
                    None
                } else {
                    Some(z.inv())
                }
            }
            (Point::Infinity, Chart::W) => Some(Complex64::new(0.0, 0.0)),
        }
    }

    /// Coordinate in the preferred chart (always defined).
    pub fn coordinate(self) -> Complex64 {
        self.coordinate_in(self.chart())
            .expect("preferred chart always contains the point")
    }

    /// Point with coordinate `u` in `chart`.
    pub fn from_chart(chart: Chart, u: Complex64) -> Self {
        match chart {
            Chart::Z => Point::Finite(u),
            Chart::W => {
                if u == Complex64::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite(u.inv())
                }
            }
        }
    }

    /// Chordal distance `2|z - w| / sqrt((1+|z|^2)(1+|w|^2))`, at most 2.
    pub fn chordal_distance(self, other: Point) -> f64 {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => 0.0,
            (Point::Finite(z), Point::Infinity) | (Point::Infinity, Point::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (Point::Finite(z), Point::Finite(w)) => {
                let d = 2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt();
                if d.is_finite() {
                    d
                } else {
                    // both huge: compare in the w chart
                    2.0 * (z.inv() - w.inv()).norm()
                        / ((1.0 + z.inv().norm_sqr()) * (1.0 + w.inv().norm_sqr())).sqrt()
                }
            }
        }
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// Serialized as `[re, im]`, or the string `"inf"` for the point at infinity.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Point::Finite(z) => serialize_complex(z, serializer),
            Point::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// Serialize a complex number as `[re, im]`.
pub fn serialize_complex<S: Serializer>(z: &Complex64, serializer: S) -> Result<S::Ok, S::Error> {
    let mut t = serializer.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Serialize a slice of complex numbers as `[[re, im], ...]`.
pub fn serialize_complex_vec<S: Serializer>(
    pts: &[Complex64],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(pts.len()))?;
    for z in pts {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}
