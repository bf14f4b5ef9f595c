use num_complex::Complex64;

use super::DynamicsError;
use crate::algebra::{AlgebraError, Polynomial, RationalMap};
use crate::point::{Chart, Point};

/// A holomorphic self-map of the sphere, evaluated chart by chart.
pub trait ComplexMap: Sync {
    fn degree(&self) -> usize;

    fn apply(&self, p: Point) -> Point;

    /// Derivative read in the preferred chart of `p` and of its image.
    fn chart_derivative(&self, p: Point) -> Complex64;

    /// Certified escape radius when infinity is a superattracting fixed point
    /// of a polynomial.
    fn escape_radius(&self) -> Option<f64> {
        None
    }

    fn critical_points(&self) -> Result<Vec<(Point, usize)>, DynamicsError>;
}

/// Derivative in preferred charts from the plane derivative at a finite
/// point with finite image.
pub fn chart_derivative_from_finite(z: Complex64, fz: Complex64, dfz: Complex64) -> Complex64 {
    let mut d = dfz;
    if Point::Finite(z).chart() == Chart::W {
        d *= -(z * z);
    }
    if Point::Finite(fz).chart() == Chart::W {
        d *= -(fz * fz).inv();
    }
    d
}

impl ComplexMap for Polynomial {
    fn degree(&self) -> usize {
        Polynomial::degree(self)
    }

    fn apply(&self, p: Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Finite(z) => {
                let v = self.eval(z);
                if v.re.is_finite() && v.im.is_finite() {
                    Point::Finite(v)
                } else {
                    Point::Infinity
                }
            }
        }
    }

    fn chart_derivative(&self, p: Point) -> Complex64 {
        match p {
            Point::Infinity => {
                if Polynomial::degree(self) == 1 {
                    self.leading().inv()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Point::Finite(z) => {
                let (v, d) = self.eval_with_derivative(z);
                if v.re.is_finite() && v.im.is_finite() {
                    chart_derivative_from_finite(z, v, d)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    fn escape_radius(&self) -> Option<f64> {
        (Polynomial::degree(self) >= 2).then(|| Polynomial::escape_radius(self))
    }

    fn critical_points(&self) -> Result<Vec<(Point, usize)>, DynamicsError> {
        Ok(Polynomial::critical_points(self)?)
    }
}

impl ComplexMap for RationalMap {
    fn degree(&self) -> usize {
        RationalMap::degree(self)
    }

    fn apply(&self, p: Point) -> Point {
        RationalMap::apply(self, p)
    }

    fn chart_derivative(&self, p: Point) -> Complex64 {
        RationalMap::chart_derivative(self, p)
    }

    fn critical_points(&self) -> Result<Vec<(Point, usize)>, DynamicsError> {
        Ok(RationalMap::critical_points(self)?)
    }
}

/// Either a polynomial or a general rational map.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMap {
    Polynomial(Polynomial),
    Rational(RationalMap),
}

impl AnyMap {
    /// Value and derivative at a finite point; `None` at a pole.
    pub fn eval_finite(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        match self {
            AnyMap::Polynomial(p) => Some(p.eval_with_derivative(z)),
            AnyMap::Rational(r) => r.eval_with_derivative(z).ok(),
        }
    }

    /// All finite preimages of a finite point, with multiplicity.
    pub fn preimages(&self, w: Complex64) -> Result<Vec<Complex64>, AlgebraError> {
        match self {
            AnyMap::Polynomial(p) => (p - &Polynomial::constant(w)).roots(),
            AnyMap::Rational(r) => (r.numerator() - &r.denominator().scale(w)).roots(),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            AnyMap::Polynomial(p) => Some(p),
            AnyMap::Rational(_) => None,
        }
    }
}

impl ComplexMap for AnyMap {
    fn degree(&self) -> usize {
        match self {
            AnyMap::Polynomial(p) => ComplexMap::degree(p),
            AnyMap::Rational(r) => ComplexMap::degree(r),
        }
    }

    fn apply(&self, p: Point) -> Point {
        match self {
            AnyMap::Polynomial(f) => ComplexMap::apply(f, p),
            AnyMap::Rational(f) => ComplexMap::apply(f, p),
        }
    }

    fn chart_derivative(&self, p: Point) -> Complex64 {
        match self {
            AnyMap::Polynomial(f) => ComplexMap::chart_derivative(f, p),
            AnyMap::Rational(f) => ComplexMap::chart_derivative(f, p),
        }
    }

    fn escape_radius(&self) -> Option<f64> {
        match self {
            AnyMap::Polynomial(f) => ComplexMap::escape_radius(f),
            AnyMap::Rational(_) => None,
        }
    }

    fn critical_points(&self) -> Result<Vec<(Point, usize)>, DynamicsError> {
        match self {
            AnyMap::Polynomial(f) => ComplexMap::critical_points(f),
            AnyMap::Rational(f) => ComplexMap::critical_points(f),
        }
    }
}

impl From<Polynomial> for AnyMap {
    fn from(p: Polynomial) -> Self {
        AnyMap::Polynomial(p)
    }
}

impl From<RationalMap> for AnyMap {
    fn from(r: RationalMap) -> Self {
        AnyMap::Rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_chart_derivative_matches_rational_view() {
        let p = Polynomial::new(vec![
            Complex64::new(0.1, 0.3),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let r = RationalMap::from_polynomial(&p).unwrap();
        for q in [
            Point::new(0.2, 0.1),
            Point::new(1.5, -0.3),
            Point::new(-0.9, 0.9),
            Point::Infinity,
        ] {
            let a = ComplexMap::chart_derivative(&p, q);
            let b = ComplexMap::chart_derivative(&r, q);
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{q}: {a} vs {b}");
            assert!(ComplexMap::apply(&p, q).chordal_distance(ComplexMap::apply(&r, q)) < 1e-14);
        }
    }
}
