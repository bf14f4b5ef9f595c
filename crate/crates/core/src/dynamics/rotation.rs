use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::{ComplexMap, DynamicsError};
use crate::point::Point;

/// An external angle `num/den` in lowest terms, `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExternalAngle {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ExternalAngle {
    pub fn new(num: u64, den: u64) -> Result<Self, DynamicsError> {
        if den == 0 {
            return Err(DynamicsError::InvalidInput(
                "angle denominator is zero".into(),
            ));
        }
        let num = num % den;
        let g = gcd(num, den).max(1);
        Ok(ExternalAngle {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `d * angle mod 1`, exactly.
    pub fn times(self, d: u64) -> Self {
        let num = ((self.num as u128 * d as u128) % self.den as u128) as u64;
        ExternalAngle::new(num, self.den).expect("nonzero denominator")
    }

    /// `d^n * angle mod 1`, exactly.
    pub fn times_pow(self, d: u64, n: u32) -> Self {
        let mut a = self;
        for _ in 0..n {
            a = a.times(d);
        }
        a
    }
}

impl fmt::Display for ExternalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExternalAngle {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DynamicsError::InvalidInput(format!("cannot parse angle {s:?}"));
        match s.trim().split_once('/') {
            Some((n, d)) => ExternalAngle::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => ExternalAngle::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

impl Serialize for ExternalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Best rational approximation `p/q` of `x` with `q <= q_max`, from the
/// continued-fraction convergents.
pub fn best_rational(x: f64, q_max: u64) -> Option<(i64, u64)> {
    if !x.is_finite() || q_max == 0 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1u64, 1i64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let p2 = ai.checked_mul(p1).and_then(|v| v.checked_add(p0))?;
        let q2 = (ai.unsigned_abs())
            .checked_mul(q1)
            .and_then(|v| v.checked_add(q0))?;
        if q2 > q_max {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (q1 > 0).then_some((p1, q1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RotationNumberEstimate {
    Rational { p: u64, q: u64 },
    Irrational { value: f64 },
}

/// Rotation number at a fixed point.
///
/// Indifferent points use `arg(multiplier)/2pi` with a continued-fraction
/// rationality test (denominators up to 1000, error below 1e-10). Repelling
/// points need the angles of the rays landing there: the map permutes their
/// cyclic order by a rotation `p` steps out of `q`.
pub fn rotation_number_at<M: ComplexMap + ?Sized>(
    f: &M,
    fixed_point: Complex64,
    rays: Option<&[ExternalAngle]>,
) -> Result<RotationNumberEstimate, DynamicsError> {
    let p = Point::Finite(fixed_point);
    if f.apply(p).chordal_distance(p) > 1e-8 {
        return Err(DynamicsError::InvalidInput(format!(
            "{fixed_point} is not fixed"
        )));
    }
    let m = f.chart_derivative(p);
    let r = m.norm();
    if r < 1.0 - 1e-8 {
        return Err(DynamicsError::InvalidInput(
            "attracting fixed point has no rotation number".into(),
        ));
    }
    if r <= 1.0 + 1e-8 {
        let t = (m.arg() / std::f64::consts::TAU).rem_euclid(1.0);
        return Ok(match best_rational(t, 1000) {
            Some((a, q)) if (t - a as f64 / q as f64).abs() < 1e-10 => {
                RotationNumberEstimate::Rational {
                    p: (a as u64) % q,
                    q,
                }
            }
            _ => RotationNumberEstimate::Irrational { value: t },
        });
    }
    let rays = rays.ok_or(DynamicsError::NeedsRays)?;
    combinatorial_rotation(rays, f.degree() as u64)
}

fn combinatorial_rotation(
    rays: &[ExternalAngle],
    d: u64,
) -> Result<RotationNumberEstimate, DynamicsError> {
    let mut sorted = rays.to_vec();
    sorted.sort_by(|a, b| (a.num as u128 * b.den as u128).cmp(&(b.num as u128 * a.den as u128)));
    sorted.dedup();
    let q = sorted.len();
    if q == 0 {
        return Err(DynamicsError::NeedsRays);
    }
    let image = sorted[0].times(d);
    let shift = sorted
        .iter()
        .position(|&a| a == image)
        .ok_or_else(|| DynamicsError::InvalidInput("ray set is not invariant".into()))?;
    for (k, a) in sorted.iter().enumerate() {
        if a.times(d) != sorted[(k + shift) % q] {
            return Err(DynamicsError::InvalidInput(
                "rays are not cyclically rotated".into(),
            ));
        }
    }
    let g = gcd(shift as u64, q as u64).max(1);
    Ok(RotationNumberEstimate::Rational {
        p: shift as u64 / g,
        q: q as u64 / g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    #[test]
    fn angle_arithmetic() {
        let a: ExternalAngle = "1/3".parse().unwrap();
        assert_eq!(a.times(2), ExternalAngle::new(2, 3).unwrap());
        assert_eq!(ExternalAngle::new(4, 6).unwrap().to_string(), "2/3");
        assert_eq!(
            ExternalAngle::new(1, 7).unwrap().times_pow(2, 3),
            ExternalAngle::new(1, 7).unwrap()
        );
    }

    #[test]
    fn convergents() {
        assert_eq!(best_rational(0.5, 100), Some((1, 2)));
        assert_eq!(best_rational(std::f64::consts::PI, 200), Some((355, 113)));
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(best_rational(golden, 100), Some((55, 89)));
    }

    #[test]
    fn basilica_alpha_rotates_by_half() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let alpha = Complex64::new((1.0 - 5f64.sqrt()) / 2.0, 0.0);
        let rays = ["1/3".parse().unwrap(), "2/3".parse().unwrap()];
        assert_eq!(
            rotation_number_at(&f, alpha, Some(&rays)).unwrap(),
            RotationNumberEstimate::Rational { p: 1, q: 2 }
        );
        assert_eq!(
            rotation_number_at(&f, alpha, None),
            Err(DynamicsError::NeedsRays)
        );
    }

    #[test]
    fn square_map_at_one() {
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let rays = [ExternalAngle::new(0, 1).unwrap()];
        assert_eq!(
            rotation_number_at(&f, Complex64::new(1.0, 0.0), Some(&rays)).unwrap(),
            RotationNumberEstimate::Rational { p: 0, q: 1 }
        );
    }

    #[test]
    fn irrational_rotation_at_origin() {
        let alpha = 0.78705954039469;
        let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU * alpha);
        let f = Polynomial::new(vec![
            Complex64::new(0.0, 0.0),
            lambda,
            Complex64::new(1.0, 0.0),
        ]);
        match rotation_number_at(&f, Complex64::new(0.0, 0.0), None).unwrap() {
            RotationNumberEstimate::Irrational { value } => assert!((value - alpha).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
