use num_complex::Complex64;
use serde::Serialize;

use super::series::PowerSeries;
use super::SiegelError;
use crate::point::serialize_complex;

/// Truncation order used when none is given.
pub const DEFAULT_ORDER: usize = 256;
/// Smallest admissible `|lambda^n - lambda|`.
pub const SMALL_DIVISOR_FLOOR: f64 = 1e-12;

/// The maps `P` with `P(0) = 0`, `P'(z) = lambda (1 - z)^rho`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiegelFamily {
    #[serde(serialize_with = "serialize_complex")]
    pub rho: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub lambda: Complex64,
}

impl SiegelFamily {
    pub fn new(rho: Complex64, lambda: Complex64) -> Result<Self, SiegelError> {
        if !(rho.re > 0.0) {
            return Err(SiegelError::InvalidInput(format!(
                "rho = {rho} needs positive real part"
            )));
        }
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(SiegelError::InvalidInput(format!(
                "|lambda| = {} is not 1",
                lambda.norm()
            )));
        }
        Ok(SiegelFamily { rho, lambda })
    }

    /// `lambda = exp(2 pi i theta)`.
    pub fn with_rotation(rho: Complex64, theta: f64) -> Result<Self, SiegelError> {
        Self::new(
            rho,
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta),
        )
    }
}

/// Taylor coefficients of `P` through order `n`.
pub fn series_p_rho(family: &SiegelFamily, n: usize) -> PowerSeries {
    let derivative =
        PowerSeries::one_minus_z_pow(family.rho, n.saturating_sub(1)).scale(family.lambda);
    derivative.integral().truncate(n)
}

/// `h` with `h(0) = 0`, `h'(0) = 1` and `h(lambda z) = P(h(z))` through order `n`.
///
/// The order-`k` coefficient of `P(h)` beyond the linear term involves only
/// `h_1, ..., h_{k-1}`, so `h_k = [P(h)]_k / (lambda^k - lambda)`; the powers
/// `[h^j]_k` are accumulated in a triangular table.
pub fn linearize(family: &SiegelFamily, n: usize) -> Result<PowerSeries, SiegelError> {
    if n == 0 {
        return Err(SiegelError::InvalidInput("order must be at least 1".into()));
    }
    let lambda = family.lambda;
    let mut lambda_k = lambda;
    for k in 2..=n {
        lambda_k *= lambda;
        let gap = (lambda_k - lambda).norm();
        if gap < SMALL_DIVISOR_FLOOR {
            return Err(SiegelError::SmallDivisorOverflow { order: k, gap });
        }
    }
    let p = series_p_rho(family, n);
    let zero = Complex64::new(0.0, 0.0);
    // powers[j][k] = [h^j]_k, zero for k < j
    let mut powers = vec![vec![zero; n + 1]; n + 1];
    let mut h = vec![zero; n + 1];
    h[1] = Complex64::new(1.0, 0.0);
    powers[1][1] = h[1];
    let mut lambda_k = lambda;
    for k in 2..=n {
        lambda_k *= lambda;
        let mut rhs = zero;
        for j in (2..=k).rev() {
            let mut s = zero;
            for i in 1..=k + 1 - j {
                s += h[i] * powers[j - 1][k - i];
            }
            powers[j][k] = s;
            rhs += p.coefficient(j) * s;
        }
        h[k] = rhs / (lambda_k - lambda);
        powers[1][k] = h[k];
    }
    Ok(PowerSeries::new(h))
}

/// Coefficients of `h(lambda z) - P(h(z))`.
pub fn conjugacy_residual(family: &SiegelFamily, h: &PowerSeries) -> PowerSeries {
    let n = h.order();
    let p = series_p_rho(family, n);
    let lhs = h.rescale(family.lambda);
    let rhs = p.compose(h).expect("h(0) = 0");
    &lhs - &rhs
}

/// Rescaling `H(z) = h(s z)` placing the critical point `1` of `P` at `z = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalNormalization {
    /// Estimated `s` with `h(s) = 1`.
    #[serde(serialize_with = "serialize_complex")]
    pub scale: Complex64,
    /// `|s|`, the estimated conformal radius of the Siegel disk.
    pub radius: f64,
    #[serde(skip)]
    pub series: PowerSeries,
}

/// Estimates the singular point `s` of `h'/(1 - h)` on the circle of
/// convergence from a least-squares fit of the unwrapped logarithm of its
/// upper-half coefficients against the index, then rescales `h` by `s`.
pub fn normalize_at_critical_point(h: &PowerSeries) -> Result<CriticalNormalization, SiegelError> {
    let f = super::f_from_h(h);
    let n = f.order();
    if n < 16 {
        return Err(SiegelError::InsufficientOrder(format!(
            "order {n} is too small to fit a radius"
        )));
    }
    let start = n / 2;
    let mut logs = Vec::with_capacity(n - start + 1);
    let mut phase = f.coefficient(start).arg();
    for k in start..=n {
        let a = f.coefficient(k);
        if a.norm() == 0.0 {
            return Err(SiegelError::InsufficientOrder(format!(
                "coefficient {k} vanishes"
            )));
        }
        if k > start {
            phase += (a / f.coefficient(k - 1)).arg();
        }
        logs.push((k as f64, Complex64::new(a.norm().ln(), phase)));
    }
    let m = logs.len() as f64;
    let mean_k = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_l = logs.iter().map(|p| p.1).sum::<Complex64>() / m;
    let skk: f64 = logs.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
    let skl: Complex64 = logs.iter().map(|p| (p.1 - mean_l) * (p.0 - mean_k)).sum();
    let slope = skl / skk;
    let scale = (-slope).exp();
    Ok(CriticalNormalization {
        scale,
        radius: scale.norm(),
        series: h.rescale(scale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::golden_mean;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_member() {
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), 0.3).unwrap();
        let p = series_p_rho(&fam, 5);
        assert!((p.coefficient(1) - fam.lambda).norm() < 1e-15);
        assert!((p.coefficient(2) + fam.lambda / 2.0).norm() < 1e-15);
        for k in [0, 3, 4, 5] {
            assert_eq!(p.coefficient(k), c(0.0, 0.0));
        }
        let fam2 = SiegelFamily::with_rotation(c(2.0, 0.0), 0.3).unwrap();
        let q = series_p_rho(&fam2, 3);
        let want = [0.0, 1.0, -1.0, 1.0 / 3.0];
        for (k, w) in want.iter().enumerate() {
            assert!((q.coefficient(k) - fam2.lambda * *w).norm() < 1e-15);
        }
        let fam3 = SiegelFamily::with_rotation(c(0.4, 0.7), 0.1).unwrap();
        assert!((series_p_rho(&fam3, 9).coefficient(1) - fam3.lambda).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_family() {
        assert!(SiegelFamily::new(c(-1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(SiegelFamily::new(c(1.0, 0.0), c(1.1, 0.0)).is_err());
    }

    #[test]
    fn golden_linearizer_residual() {
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), golden_mean()).unwrap();
        let h = linearize(&fam, 50).unwrap();
        assert_eq!(h.coefficient(0), c(0.0, 0.0));
        assert_eq!(h.coefficient(1), c(1.0, 0.0));
        let r = conjugacy_residual(&fam, &h);
        assert!(
            r.max_modulus() < 1e-8 * h.max_modulus(),
            "{}",
            r.max_modulus()
        );
    }

    #[test]
    fn golden_small_divisors() {
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), golden_mean()).unwrap();
        let gap = (2..=200)
            .map(|n| (fam.lambda.powu(n) - fam.lambda).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(gap > 1e-3, "{gap}");
    }

    #[test]
    fn rational_rotation_overflows() {
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), 0.25).unwrap();
        assert!(matches!(
            linearize(&fam, 10),
            Err(SiegelError::SmallDivisorOverflow { order: 5, .. })
        ));
    }

    #[test]
    fn golden_critical_point_scale() {
        let fam = SiegelFamily::with_rotation(c(1.0, 0.0), golden_mean()).unwrap();
        let h = linearize(&fam, DEFAULT_ORDER).unwrap();
        let norm = normalize_at_critical_point(&h).unwrap();
        assert!(norm.radius > 0.6 && norm.radius < 0.7, "{}", norm.scale);
        assert_eq!(norm.series.coefficient(1), norm.scale);
    }
}
