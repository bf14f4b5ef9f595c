use num_complex::Complex64;

use super::{cluster_roots, AlgebraError, Polynomial};
use crate::point::{Chart, Point};

/// Relative resultant below which numerator and denominator are treated as
/// sharing a root.
pub const COPRIME_TOLERANCE: f64 = 1e-12;

/// Rational map `N/D` of the Riemann sphere with coprime `N`, `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
    degree: usize,
    // z^d N(1/z) and z^d D(1/z): the map in the chart at infinity
    num_rev: Polynomial,
    den_rev: Polynomial,
}

impl RationalMap {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let degree = num.degree().max(den.degree());
        if degree == 0 || num.is_zero() {
            return Err(AlgebraError::ConstantMap);
        }
        let res = normalized_resultant(&num, &den);
        if res < COPRIME_TOLERANCE {
            return Err(AlgebraError::NotCoprime(res));
        }
        Ok(Self::assemble(num, den, degree))
    }

    /// A polynomial viewed as a rational map with denominator 1.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self, AlgebraError> {
        if p.degree() == 0 {
            return Err(AlgebraError::ConstantMap);
        }
        Ok(Self::assemble(
            p.clone(),
            Polynomial::constant(Complex64::new(1.0, 0.0)),
            p.degree(),
        ))
    }

    fn assemble(num: Polynomial, den: Polynomial, degree: usize) -> Self {
        let num_rev = num.reversed(degree);
        let den_rev = den.reversed(degree);
        RationalMap {
            num,
            den,
            degree,
            num_rev,
            den_rev,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True when the denominator is constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// Value and derivative at a finite non-pole `z`.
    pub fn eval_with_derivative(
        &self,
        z: Complex64,
    ) -> Result<(Complex64, Complex64), AlgebraError> {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        let scale = self.den.abs_eval(z.norm());
        if d.norm() <= 1e3 * f64::EPSILON * scale {
            return Err(AlgebraError::PoleAt(z));
        }
        Ok((n / d, (dn * d - n * dd) / (d * d)))
    }

    /// Chart-local pair `(A, B)` with `F = A/B` in the source chart.
    fn pair(&self, chart: Chart) -> (&Polynomial, &Polynomial) {
        match chart {
            Chart::Z => (&self.num, &self.den),
            Chart::W => (&self.num_rev, &self.den_rev),
        }
    }

    /// Image of a point of the sphere.
    pub fn apply(&self, p: Point) -> Point {
        let chart = p.chart();
        let u = p.coordinate();
        let (a, b) = self.pair(chart);
        let av = a.eval(u);
        let bv = b.eval(u);
        if bv == Complex64::new(0.0, 0.0) {
            return Point::Infinity;
        }
        let v = av / bv;
        if v.re.is_finite() && v.im.is_finite() {
            Point::Finite(v)
        } else {
            Point::Infinity
        }
    }

    /// Derivative of the map read in the preferred charts of `p` and of its
    /// image. Products of these along a cycle give the multiplier.
    pub fn chart_derivative(&self, p: Point) -> Complex64 {
        let chart = p.chart();
        let u = p.coordinate();
        let (a, b) = self.pair(chart);
        let (av, ad) = a.eval_with_derivative(u);
        let (bv, bd) = b.eval_with_derivative(u);
        let image = self.apply(p);
        match image.chart() {
            Chart::Z => (ad * bv - av * bd) / (bv * bv),
            Chart::W => (bd * av - bv * ad) / (av * av),
        }
    }

    /// Wronskian numerator `N'D - ND'`, of degree at most `2d - 2`; higher
    /// terms cancel exactly and are dropped.
    pub fn wronskian(&self) -> Polynomial {
        let w = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let keep = (2 * self.degree - 1).min(w.coeffs().len());
        Polynomial::new(w.coeffs()[..keep].to_vec())
    }

    /// Critical points with multiplicity (total `2d - 2`).
    pub fn critical_points(&self) -> Result<Vec<(Point, usize)>, AlgebraError> {
        let w = self.wronskian();
        let mut out: Vec<(Point, usize)> = Vec::new();
        let mut finite = 0usize;
        if !w.is_zero() && w.degree() > 0 {
            let roots = w.roots()?;
            finite = roots.len();
            for (r, m) in cluster_roots(&roots, 1e-6) {
                out.push((Point::Finite(r), m));
            }
        }
        let total = 2 * self.degree - 2;
        if total > finite {
            out.push((Point::Infinity, total - finite));
        }
        Ok(out)
    }
}

/// Sylvester resultant of the coefficient-normalized pair, in absolute value.
pub(crate) fn normalized_resultant(p: &Polynomial, q: &Polynomial) -> f64 {
    let m = p.degree();
    let n = q.degree();
    if m == 0 || n == 0 {
        // a nonzero constant shares no root with anything
        return 1.0;
    }
    let pn = p.scale(Complex64::new(1.0 / p.max_coeff_norm(), 0.0));
    let qn = q.scale(Complex64::new(1.0 / q.max_coeff_norm(), 0.0));
    let size = m + n;
    let mut a = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    // rows use descending coefficients
    for r in 0..n {
        for (k, c) in pn.coeffs().iter().rev().enumerate() {
            a[r][r + k] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in qn.coeffs().iter().rev().enumerate() {
            a[n + r][r + k] = *c;
        }
    }
    determinant(a).norm()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mating() -> (RationalMap, Complex64) {
        let cc = c(0.5, 3f64.sqrt() / 2.0);
        let f = RationalMap::new(
            Polynomial::new(vec![cc, c(0.0, 0.0), c(1.0, 0.0)]),
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
        )
        .unwrap();
        (f, cc)
    }

    #[test]
    fn value_at_infinity_is_leading_ratio() {
        let (f, _) = mating();
        assert_eq!(f.apply(Point::Infinity), Point::Finite(c(1.0, 0.0)));
        // oracle: evaluate at |z| = 1e8
        let v = f.eval_with_derivative(c(1e8, 0.0)).unwrap().0;
        assert!((v - 1.0).norm() < 1e-15);
        assert_eq!(f.apply(Point::new(1.0, 0.0)), Point::Infinity);
    }

    #[test]
    fn pole_is_signalled() {
        let (f, _) = mating();
        assert!(matches!(
            f.eval_with_derivative(c(-1.0, 0.0)),
            Err(AlgebraError::PoleAt(_))
        ));
    }

    #[test]
    fn mating_critical_points() {
        let (f, cc) = mating();
        // Wronskian 2z(-1-c)
        let w = f.wronskian();
        assert_eq!(w.degree(), 1);
        assert!((w.coeffs()[1] - (-1.0 - cc) * 2.0).norm() < 1e-15);
        let cps = f.critical_points().unwrap();
        assert_eq!(cps.len(), 2);
        assert!(cps.contains(&(Point::Finite(c(0.0, 0.0)), 1)));
        assert!(cps.contains(&(Point::Infinity, 1)));
    }

    #[test]
    fn common_root_rejected() {
        let n = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let d = Polynomial::from_real(&[-1.0, 1.0]);
        assert!(matches!(
            RationalMap::new(n, d),
            Err(AlgebraError::NotCoprime(_))
        ));
    }

    #[test]
    fn chart_derivative_matches_finite_difference() {
        let (f, _) = mating();
        for p in [
            Point::new(0.3, 0.1),
            Point::new(3.0, -2.0),
            Point::new(0.9, 0.4),
        ] {
            let z = p.finite().unwrap();
            let h = 1e-6;
            let to_coord = |q: Point, ch: Chart| q.coordinate_in(ch).unwrap();
            let img_chart = f.apply(p).chart();
            let src = p.chart();
            let u = to_coord(p, src);
            let up = Point::from_chart(src, u + h);
            let um = Point::from_chart(src, u - h);
            let fd =
                (to_coord(f.apply(up), img_chart) - to_coord(f.apply(um), img_chart)) / (2.0 * h);
            let d = f.chart_derivative(p);
            assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0), "{z} {fd} {d}");
        }
    }
}
