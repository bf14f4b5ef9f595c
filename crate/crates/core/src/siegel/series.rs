use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{FromPrimitive, Num};

/// Truncated power series `a_0 + a_1 z + ... + a_N z^N`.
///
/// Arithmetic is exact through the truncation order; operands of different
/// orders combine at the smaller one.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T = Complex64> {
    coefficients: Vec<T>,
}

impl<T: Num + Clone + FromPrimitive> PowerSeries<T> {
    /// Series with truncation order `coefficients.len() - 1`.
    pub fn new(coefficients: Vec<T>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "a series needs at least a constant term"
        );
        PowerSeries { coefficients }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coefficients: vec![T::zero(); order + 1],
        }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = c;
        s
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coefficients[1] = T::one();
        }
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> T {
        self.coefficients.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coefficients.clone();
        c.resize(order + 1, T::zero());
        PowerSeries { coefficients: c }
    }

    pub fn scale(&self, k: T) -> Self {
        PowerSeries {
            coefficients: self
                .coefficients
                .iter()
                .map(|a| a.clone() * k.clone())
                .collect(),
        }
    }

    /// Known through order `N - 1`.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coefficients = (1..=self.order())
            .map(|k| self.coefficients[k].clone() * T::from_usize(k).expect("index fits"))
            .collect();
        PowerSeries { coefficients }
    }

    /// Antiderivative vanishing at 0, known through order `N + 1`.
    pub fn integral(&self) -> Self {
        let mut coefficients = vec![T::zero()];
        coefficients.extend(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| a.clone() / T::from_usize(k + 1).expect("index fits")),
        );
        PowerSeries { coefficients }
    }

    /// `1 / self`; the constant term must be nonzero.
    pub fn reciprocal(&self) -> Option<Self> {
        let a0 = self.coefficients[0].clone();
        if a0.is_zero() {
            return None;
        }
        let n = self.order();
        let mut b: Vec<T> = Vec::with_capacity(n + 1);
        b.push(T::one() / a0.clone());
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + self.coefficients[j].clone() * b[k - j].clone();
            }
            b.push(T::zero() - s / a0.clone());
        }
        Some(PowerSeries { coefficients: b })
    }

    pub fn divide(&self, other: &Self) -> Option<Self> {
        other.reciprocal().map(|r| self * &r)
    }

    /// `self(inner(z))` for `inner(0) = 0`, by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Option<Self> {
        if !inner.coefficients[0].is_zero() {
            return None;
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coefficient(n), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coefficients[0] = acc.coefficients[0].clone() + self.coefficients[k].clone();
        }
        Some(acc)
    }

    /// `self(c z)`.
    pub fn rescale(&self, c: T) -> Self {
        let mut power = T::one();
        let coefficients = self
            .coefficients
            .iter()
            .map(|a| {
                let v = a.clone() * power.clone();
                power = power.clone() * c.clone();
                v
            })
            .collect();
        PowerSeries { coefficients }
    }
}

impl PowerSeries<Complex64> {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Binomial series of `(1 - z)^rho`.
    pub fn one_minus_z_pow(rho: Complex64, order: usize) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=order {
            let prev = c[k - 1];
            c.push(prev * (k as f64 - 1.0 - rho) / k as f64);
        }
        PowerSeries { coefficients: c }
    }

    pub fn max_modulus(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }
}

impl<T: Num + Clone + FromPrimitive> Add for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn add(self, rhs: Self) -> PowerSeries<T> {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coefficients: (0..=n)
                .map(|k| self.coefficients[k].clone() + rhs.coefficients[k].clone())
                .collect(),
        }
    }
}

impl<T: Num + Clone + FromPrimitive> Sub for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn sub(self, rhs: Self) -> PowerSeries<T> {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coefficients: (0..=n)
                .map(|k| self.coefficients[k].clone() - rhs.coefficients[k].clone())
                .collect(),
        }
    }
}

impl<T: Num + Clone + FromPrimitive> Neg for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn neg(self) -> PowerSeries<T> {
        PowerSeries {
            coefficients: self
                .coefficients
                .iter()
                .map(|a| T::zero() - a.clone())
                .collect(),
        }
    }
}

impl<T: Num + Clone + FromPrimitive> Mul for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn mul(self, rhs: Self) -> PowerSeries<T> {
        let n = self.order().min(rhs.order());
        let coefficients = (0..=n)
            .map(|k| {
                (0..=k).fold(T::zero(), |s, j| {
                    s + self.coefficients[j].clone() * rhs.coefficients[k - j].clone()
                })
            })
            .collect();
        PowerSeries { coefficients }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometric_reciprocal() {
        let one_minus_z =
            PowerSeries::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let g = one_minus_z.reciprocal().unwrap();
        assert!(g
            .coefficients()
            .iter()
            .all(|a| (a - c(1.0, 0.0)).norm() < 1e-15));
        assert!(PowerSeries::<Complex64>::variable(3).reciprocal().is_none());
    }

    #[test]
    fn exact_product_rule() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        let f = PowerSeries::new(vec![r(1, 2), r(-3, 4), r(5, 7), r(2, 9), r(-1, 3)]);
        let g = PowerSeries::new(vec![r(2, 3), r(1, 5), r(0, 1), r(-7, 2), r(4, 11)]);
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_and_rescale() {
        // exp(z) - 1 composed into log(1 + w) gives z
        let n = 12;
        let mut fact = 1.0;
        let mut e = vec![c(0.0, 0.0)];
        let mut l = vec![c(0.0, 0.0)];
        for k in 1..=n {
            fact *= k as f64;
            e.push(c(1.0 / fact, 0.0));
            l.push(c(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0));
        }
        let id = PowerSeries::new(l)
            .compose(&PowerSeries::new(e.clone()))
            .unwrap();
        for k in 0..=n {
            let want = if k == 1 { 1.0 } else { 0.0 };
            assert!((id.coefficient(k) - c(want, 0.0)).norm() < 1e-14);
        }
        let e = PowerSeries::new(e);
        let z = c(0.3, -0.2);
        assert!((e.rescale(c(0.5, 0.1)).eval(z) - e.eval(z * c(0.5, 0.1))).norm() < 1e-15);
    }

    #[test]
    fn binomial_series() {
        let s = PowerSeries::one_minus_z_pow(c(2.0, 0.0), 5);
        let want = [1.0, -2.0, 1.0, 0.0, 0.0, 0.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s.coefficient(k) - c(*w, 0.0)).norm() < 1e-15);
        }
        let z = c(0.1, 0.05);
        let h = PowerSeries::one_minus_z_pow(c(0.5, 0.3), 60);
        assert!((h.eval(z) - (c(1.0, 0.0) - z).powc(c(0.5, 0.3))).norm() < 1e-14);
    }

    #[test]
    fn integral_inverts_derivative() {
        let s = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 2.0), c(-0.5, 0.0), c(0.25, 1.0)]);
        assert_eq!(s.derivative().integral(), s);
    }
}
