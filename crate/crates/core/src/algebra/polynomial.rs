use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{cluster_roots, poly_roots, AlgebraError, RationalMap};
use crate::point::Point;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex polynomial with coefficients in ascending degree order.
///
/// The leading coefficient is nonzero unless the polynomial is the zero
/// polynomial, which is stored as a single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::constant(ONE);
        for &r in roots {
            p = &p * &Self::new(vec![-r, ONE]);
        }
        p
    }

    /// `z^2 + c`.
    pub fn quadratic(c: Complex64) -> Self {
        Self::new(vec![c, ZERO, ONE])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == ONE
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative by a simultaneous Horner recurrence.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut v = ZERO;
        let mut d = ZERO;
        for &c in self.coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    }

    /// Value, first and second derivative.
    pub fn eval_with_two_derivatives(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut v = ZERO;
        let mut d = ZERO;
        let mut dd = ZERO;
        for &c in self.coeffs.iter().rev() {
            dd = dd * z + d;
            d = d * z + v;
            v = v * z + c;
        }
        (v, d, dd * 2.0)
    }

    /// Running-error bound for Horner evaluation at `z`: `sum |a_i| |z|^i`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// `p(s z)`.
    pub fn rescale_argument(&self, s: Complex64) -> Self {
        let mut f = ONE;
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    let v = c * f;
                    f *= s;
                    v
                })
                .collect(),
        )
    }

    /// Coefficients padded to degree `d` and reversed: `z^d p(1/z)`.
    pub fn reversed(&self, d: usize) -> Self {
        assert!(d >= self.degree());
        let mut v = vec![ZERO; d + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[d - k] = c;
        }
        Self::new(v)
    }

    /// Composition `self(other(z))`.
    pub fn compose(&self, other: &Polynomial) -> Self {
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c);
        }
        acc
    }

    /// Radius beyond which every orbit escapes: `max(2, (1 + sum_{i<d} |a_i|) / |a_d|)`.
    ///
    /// For `|z| > R` this guarantees `|p(z)| >= 2|z|` when the degree is at
    /// least 2.
    pub fn escape_radius(&self) -> f64 {
        let d = self.degree();
        let lead = self.leading().norm();
        let s: f64 = self.coeffs[..d].iter().map(|c| c.norm()).sum();
        f64::max(2.0, (2.0 + s) / lead)
    }

    /// All roots, repeated by multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>, AlgebraError> {
        poly_roots(self)
    }

    /// Distinct roots with multiplicities, clustering within `tol`.
    pub fn distinct_roots(&self, tol: f64) -> Result<Vec<(Complex64, usize)>, AlgebraError> {
        Ok(cluster_roots(&poly_roots(self)?, tol))
    }

    /// Critical points including infinity, with multiplicity (total `2d - 2`).
    pub fn critical_points(&self) -> Result<Vec<(Point, usize)>, AlgebraError> {
        if self.degree() < 2 {
            return Ok(Vec::new());
        }
        RationalMap::from_polynomial(self)?.critical_points()
    }

    /// Plain-text form: one `re,im` pair per line, ascending degree.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.coeffs {
            s.push_str(&format!("{:?},{:?}\n", c.re, c.im));
        }
        s
    }

    /// Parse the plain-text form. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self, AlgebraError> {
        let mut coeffs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let c = parse_complex(line).map_err(|message| AlgebraError::Parse {
                line: n + 1,
                message,
            })?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(AlgebraError::Parse {
                line: 0,
                message: "no coefficients".into(),
            });
        }
        Ok(Self::new(coeffs))
    }
}

/// Parse `re,im` (or a bare real number).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts
        .next()
        .ok_or_else(|| "empty value".to_string())?
        .parse::<f64>()
        .map_err(|e| format!("{s:?}: {e}"))?;
    let im = match parts.next() {
        Some(t) => t.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("{s:?}: expected re,im"));
    }
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("{s:?}: non-finite value"));
    }
    Ok(Complex64::new(re, im))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        Polynomial::new(
            (0..n)
                .map(|k| get(&self.coeffs, k) + get(&rhs.coeffs, k))
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut v = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Polynomial::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(
            p.eval_with_derivative(c(0.0, 0.0)),
            (c(-1.0, 0.0), c(0.0, 0.0))
        );
        let (v, d, dd) =
            Polynomial::from_real(&[1.0, 1.0, 2.0, 1.0]).eval_with_two_derivatives(c(2.0, 0.0));
        assert_eq!(v, c(19.0, 0.0));
        assert_eq!(d, c(21.0, 0.0));
        assert_eq!(dd, c(16.0, 0.0));
    }

    #[test]
    fn rabbit_cubic_real_root_residual() {
        // oracle: bisection on the real cubic c^3 + 2c^2 + c + 1
        let f = |x: f64| x * x * x + 2.0 * x * x + x + 1.0;
        let (mut a, mut b) = (-2.0, -1.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m
            } else {
                a = m
            }
        }
        assert!((a - -1.7549).abs() < 1e-4);
        let p = Polynomial::from_real(&[1.0, 1.0, 2.0, 1.0]);
        assert!(p.eval(c(-1.7549, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn arithmetic_and_composition() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let pp = p.compose(&p);
        assert_eq!(pp, Polynomial::from_real(&[0.0, 0.0, -2.0, 0.0, 1.0]));
        assert_eq!(
            &(&p * &p) - &pp,
            Polynomial::from_real(&[1.0, 0.0, 0.0]).scale(c(1.0, 0.0))
        );
        assert_eq!(p.reversed(3), Polynomial::from_real(&[0.0, 1.0, 0.0, -1.0]));
        assert_eq!(p.reflect(), p);
    }

    #[test]
    fn critical_points_of_polynomials() {
        let cps = Polynomial::quadratic(c(0.3, 0.1))
            .critical_points()
            .unwrap();
        assert_eq!(
            cps,
            vec![(Point::Finite(c(0.0, 0.0)), 1), (Point::Infinity, 1)]
        );
        // z^3 - 3/4 z + sqrt(-7)/4
        let p = Polynomial::new(vec![
            c(0.0, 7f64.sqrt() / 4.0),
            c(-0.75, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let cps = p.critical_points().unwrap();
        let finite: Vec<_> = cps.iter().filter_map(|(q, _)| q.finite()).collect();
        assert_eq!(finite.len(), 2);
        for t in [0.5, -0.5] {
            assert!(finite.iter().any(|z| (z - t).norm() < 1e-15));
        }
        assert!(cps.contains(&(Point::Infinity, 2)));
    }

    #[test]
    fn text_round_trip() {
        let p = Polynomial::new(vec![c(0.25, -1.5), c(0.0, 0.0), c(1.0, 0.0)]);
        let q = Polynomial::parse_text(&p.to_text()).unwrap();
        assert_eq!(p, q);
        assert!(Polynomial::parse_text("1,2,3\n").is_err());
        assert!(Polynomial::parse_text("# only a comment\n").is_err());
    }

    #[test]
    fn escape_radius_is_certified() {
        let p = Polynomial::from_real(&[0.0, 1.0, 1.0, 1.0]);
        let r = p.escape_radius();
        for k in 0..64 {
            let z = Complex64::from_polar(r * 1.0001, k as f64 * 0.1);
            assert!(p.eval(z).norm() >= 2.0 * z.norm());
        }
    }
}
