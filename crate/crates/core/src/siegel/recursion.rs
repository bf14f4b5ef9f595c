use num_complex::Complex64;
use serde::Serialize;

use super::series::PowerSeries;
use super::SiegelError;
use crate::point::serialize_complex;

/// Distance of `(nu + 1) theta` from the integers below which the cotangent
/// is treated as a pole.
pub const COT_POLE_GUARD: f64 = 1e-10;

/// Settings for [`carleson_recursion_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecursionOptions {
    /// Constant term; `None` means `1 / (1 + rho/2)`.
    #[serde(serialize_with = "serialize_optional_complex")]
    pub a0: Option<Complex64>,
    /// Keep the `(i/2) cot` part of the weights.
    pub imaginary_cot: bool,
}

impl Default for RecursionOptions {
    fn default() -> Self {
        RecursionOptions {
            a0: None,
            imaginary_cot: true,
        }
    }
}

fn serialize_optional_complex<S: serde::Serializer>(
    z: &Option<Complex64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => serialize_complex(z, s),
        None => s.serialize_none(),
    }
}

/// `1 / (1 + rho/2)`, the constant of `1 / ((1 + rho/2)(1 - z))`.
pub fn default_a0(rho: Complex64) -> Complex64 {
    1.0 / (1.0 + rho / 2.0)
}

/// `cot(pi x)` with `x` reduced to `(-1/2, 1/2]` first.
fn cot_pi(x: f64) -> f64 {
    let r = x - x.round();
    1.0 / (std::f64::consts::PI * r).tan()
}

/// Coefficients `a_0, ..., a_n` of `f` with
/// `f' - f^2 = f rho sum (1/2 + (i/2) cot((nu+1) pi theta)) a_nu z^nu`, using
/// the default constant term.
pub fn carleson_recursion(
    theta: f64,
    rho: Complex64,
    n: usize,
) -> Result<PowerSeries, SiegelError> {
    carleson_recursion_with(theta, rho, n, RecursionOptions::default())
}

/// Matching the order-`nu` coefficients gives
/// `(nu+1) a_{nu+1} = sum_{i+j=nu} a_i a_j (1 + rho c_j)` with
/// `c_j = 1/2 + (i/2) cot((j+1) pi theta)`.
pub fn carleson_recursion_with(
    theta: f64,
    rho: Complex64,
    n: usize,
    options: RecursionOptions,
) -> Result<PowerSeries, SiegelError> {
    let mut weights = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = (j as f64 + 1.0) * theta;
        let distance = (x - x.round()).abs();
        let imaginary = if options.imaginary_cot {
            if distance < COT_POLE_GUARD {
                return Err(SiegelError::CotPole(j));
            }
            0.5 * cot_pi(x)
        } else {
            0.0
        };
        weights.push(1.0 + rho * Complex64::new(0.5, imaginary));
    }
    let mut a = Vec::with_capacity(n + 1);
    a.push(options.a0.unwrap_or_else(|| default_a0(rho)));
    for nu in 0..n {
        let s: Complex64 = (0..=nu).map(|j| a[nu - j] * a[j] * weights[j]).sum();
        // the unknown enters only through f', with coefficient nu + 1
        a.push(s / (nu + 1) as f64);
    }
    Ok(PowerSeries::new(a))
}

/// `h' / (1 - h)` through order `N - 1`.
pub fn f_from_h(h: &PowerSeries) -> PowerSeries {
    let n = h.order();
    let one = PowerSeries::constant(Complex64::new(1.0, 0.0), n);
    let denominator = (&one - h).truncate(n.saturating_sub(1));
    h.derivative()
        .divide(&denominator)
        .expect("h(0) = 0 keeps 1 - h invertible")
}

/// `max |a_nu - reference|`.
pub fn max_deviation(f: &PowerSeries, reference: Complex64) -> f64 {
    f.coefficients()
        .iter()
        .map(|a| (a - reference).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::{golden_mean, linearize, SiegelFamily};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_gives_geometric() {
        let f = f_from_h(&PowerSeries::variable(20));
        assert_eq!(f.order(), 19);
        assert!(f
            .coefficients()
            .iter()
            .all(|a| (a - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn model_linearizer() {
        for rho in [1.0, 2.0, 0.3] {
            let alpha = 2.0 / (rho + 2.0);
            let n = 60;
            let h0 = &PowerSeries::constant(c(1.0, 0.0), n)
                - &PowerSeries::one_minus_z_pow(c(alpha, 0.0), n);
            let f = f_from_h(&h0);
            let want = 1.0 / (1.0 + rho / 2.0);
            assert!(max_deviation(&f, c(want, 0.0)) < 1e-13);
        }
    }

    #[test]
    fn real_weights_give_model() {
        let opts = RecursionOptions {
            a0: None,
            imaginary_cot: false,
        };
        let f = carleson_recursion_with(golden_mean(), c(1.0, 0.0), 200, opts).unwrap();
        assert!(max_deviation(&f, c(2.0 / 3.0, 0.0)) < 1e-12);
    }

    #[test]
    fn cot_reduction() {
        for x in [0.1, 0.37, 12.25, 1e6 + 0.3] {
            let want = 1.0 / (std::f64::consts::PI * x).tan();
            assert!((cot_pi(x) - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn pole_guard() {
        assert!(matches!(
            carleson_recursion(0.25, c(1.0, 0.0), 10),
            Err(SiegelError::CotPole(3))
        ));
    }

    #[test]
    fn dual_construction() {
        let theta = golden_mean();
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), theta).unwrap();
        let h = linearize(&fam, 50).unwrap();
        let s = c(0.65, 0.025);
        let f = f_from_h(&h.rescale(s));
        let opts = RecursionOptions {
            a0: Some(s),
            imaginary_cot: true,
        };
        let g = carleson_recursion_with(theta, c(1.0, 0.0), 49, opts).unwrap();
        for k in 0..=40 {
            assert!((f.coefficient(k) - g.coefficient(k)).norm() < 1e-10, "{k}");
        }
    }
}
