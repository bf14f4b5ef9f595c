use num_complex::Complex64;
use num_traits::Float;
use serde::Serialize;

use super::SiegelError;

/// Golden mean `(sqrt 5 - 1) / 2`.
pub fn golden_mean() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Continued-fraction data of a rotation number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationNumber {
    pub theta: f64,
    /// `a_1, a_2, ...`, cut where the double's rounding interval stops
    /// determining them.
    pub partial_quotients: Vec<u64>,
    /// `(p_k, q_k)`.
    pub convergents: Vec<(u64, u64)>,
    pub bounded_type_bound: Option<u64>,
    /// Least-squares slope of `-ln|theta - p_k/q_k|` against `ln q_k`.
    pub diophantine_exponent: Option<f64>,
    /// Fewer than the requested quotients were reliable.
    pub precision_limited: bool,
}

impl RotationNumber {
    pub fn lambda(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.theta)
    }
}

/// Exact quotients of `num / den` until the remainder vanishes or `k` terms.
fn expansion(mut num: u128, mut den: u128, k: usize) -> (Vec<u128>, bool) {
    // num / den in (0, 1): start by inverting
    let mut q = Vec::new();
    while q.len() < k {
        if num == 0 {
            return (q, true);
        }
        q.push(den / num);
        let r = den % num;
        den = num;
        num = r;
    }
    (q, num == 0)
}

/// `theta = m / 2^e` exactly.
fn dyadic(theta: f64) -> (u128, u32) {
    let (mantissa, exponent, _) = theta.integer_decode();
    let shift = (-exponent) as u32;
    let mut m = mantissa as u128;
    let mut e = shift;
    while m % 2 == 0 && e > 0 {
        m /= 2;
        e -= 1;
    }
    (m, e)
}

/// Partial quotients by the Gauss map, carried out in exact integer
/// arithmetic on the double and on both ends of its rounding interval.
pub fn continued_fraction(theta: f64, k: usize) -> Result<RotationNumber, SiegelError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(SiegelError::InvalidInput(format!(
            "rotation number {theta} must lie in (0, 1)"
        )));
    }
    let (m, e) = dyadic(theta);
    if e > 100 {
        return Err(SiegelError::InvalidInput(format!(
            "rotation number {theta} is below working range"
        )));
    }
    // rounding interval (2m - 1, 2m + 1) / 2^(e+1)
    let den = 1u128 << (e + 1);
    let (lo, _) = expansion(2 * m - 1, den, k + 1);
    let (hi, _) = expansion(2 * m + 1, den, k + 1);
    let (own, terminated) = expansion(m, 1u128 << e, k + 1);
    let eps = theta * f64::EPSILON / 2.0;

    let mut partial_quotients = Vec::new();
    let mut convergents = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (1u128, 0u128, 0u128, 1u128);
    for i in 0..k.min(own.len()) {
        if lo.get(i) != Some(&own[i]) || hi.get(i) != Some(&own[i]) {
            break;
        }
        let a = own[i];
        let (p, q) = (a * p1 + p0, a * q1 + q0);
        p0 = p1;
        q0 = q1;
        p1 = p;
        q1 = q;
        partial_quotients.push(a as u64);
        convergents.push((p as u64, q as u64));
    }
    let exact_error = |p: u128, q: u128| {
        let lhs = m * q;
        let rhs = p << e;
        lhs.abs_diff(rhs) as f64 / (q as f64 * (1u128 << e) as f64)
    };
    // rational to working precision: a small-denominator convergent matches theta
    let small = |q: u128| (q as f64).powi(2) * eps < 0.01;
    let (mut a0, mut b0, mut a1, mut b1) = (1u128, 0u128, 0u128, 1u128);
    for &a in &own {
        let (p, q) = (a * a1 + a0, a * b1 + b0);
        if !small(q) {
            break;
        }
        if exact_error(p, q) <= 2.0 * eps {
            return Err(SiegelError::RationalInput {
                p: p as u64,
                q: q as u64,
            });
        }
        a0 = a1;
        b0 = b1;
        a1 = p;
        b1 = q;
    }
    if terminated && own.len() <= partial_quotients.len() + 1 {
        return Err(SiegelError::RationalInput {
            p: p1 as u64,
            q: q1 as u64,
        });
    }

    let points: Vec<(f64, f64)> = convergents
        .iter()
        .filter(|&&(_, q)| q >= 2)
        .filter_map(|&(p, q)| {
            let err = exact_error(p as u128, q as u128);
            (err > 0.0).then(|| ((q as f64).ln(), -err.ln()))
        })
        .collect();
    let diophantine_exponent = (points.len() >= 2).then(|| {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(RotationNumber {
        theta,
        precision_limited: partial_quotients.len() < k,
        bounded_type_bound: partial_quotients.iter().copied().max(),
        partial_quotients,
        convergents,
        diophantine_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_quotients() {
        let r = continued_fraction(golden_mean(), 30).unwrap();
        assert_eq!(r.partial_quotients, vec![1; 30]);
        assert_eq!(r.bounded_type_bound, Some(1));
        assert_eq!(r.convergents[9], (55, 89));
        let gamma = r.diophantine_exponent.unwrap();
        assert!((gamma - 2.0).abs() < 0.1, "{gamma}");
        let deep = continued_fraction(golden_mean(), 40).unwrap();
        assert!(deep.precision_limited);
        assert!(deep.partial_quotients.iter().all(|&a| a == 1));
        assert!(deep.partial_quotients.len() >= 32);
    }

    #[test]
    fn silver_quotients() {
        let r = continued_fraction(2f64.sqrt() - 1.0, 18).unwrap();
        assert_eq!(r.partial_quotients, vec![2; 18]);
        let full = continued_fraction(2f64.sqrt() - 1.0, 40).unwrap();
        assert!(full.partial_quotients.len() <= 21);
    }

    #[test]
    fn convergents_reconstruct() {
        let theta = 0.78705954039469;
        let r = continued_fraction(theta, 20).unwrap();
        assert_eq!(&r.partial_quotients[..5], &[1, 3, 1, 2, 3]);
        for &(p, q) in &r.convergents {
            assert!((theta - p as f64 / q as f64).abs() <= 1.0 / (q as f64 * q as f64));
        }
        assert_eq!(
            r.bounded_type_bound,
            r.partial_quotients.iter().copied().max()
        );
    }

    #[test]
    fn rationals_rejected() {
        assert!(matches!(
            continued_fraction(0.5, 10),
            Err(SiegelError::RationalInput { p: 1, q: 2 })
        ));
        assert!(matches!(
            continued_fraction(1.0 / 3.0, 10),
            Err(SiegelError::RationalInput { p: 1, q: 3 })
        ));
        assert!(matches!(
            continued_fraction(0.375, 10),
            Err(SiegelError::RationalInput { p: 3, q: 8 })
        ));
        assert!(continued_fraction(1.5, 3).is_err());
    }
}
