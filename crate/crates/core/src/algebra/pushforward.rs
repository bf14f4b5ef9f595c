use num_complex::Complex64;

use super::{cluster_roots, AlgebraError, Polynomial};

/// Quotient of polynomials with no degree restriction (quadratic
/// differential densities, pushforward results).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::constant(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunction {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Finite poles with their orders, after cancelling common roots.
    pub fn poles(&self, tol: f64) -> Result<Vec<(Complex64, usize)>, AlgebraError> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        let den_roots = cluster_roots(&self.den.roots()?, tol);
        let num_roots = if self.num.degree() == 0 {
            Vec::new()
        } else {
            cluster_roots(&self.num.roots()?, tol)
        };
        Ok(den_roots
            .into_iter()
            .filter_map(|(r, m)| {
                let cancelled = num_roots
                    .iter()
                    .find(|(s, _)| (s - r).norm() <= tol * r.norm().max(1.0))
                    .map(|&(_, k)| k)
                    .unwrap_or(0);
                (m > cancelled).then_some((r, m - cancelled))
            })
            .collect())
    }
}

/// Result of [`pushforward_qd`].
#[derive(Clone, Debug, PartialEq)]
pub struct Pushforward {
    pub result: RationalFunction,
    /// Set when the input has no finite poles; the formal result is returned.
    pub flagged: Option<String>,
}

const ROOT_MATCH: f64 = 1e-7;

/// Pushforward of the density `q` under `s(z) = z^2`:
/// `(q(w) + q(-w)) / (4 w^2)` with `w^2 = z`.
///
/// With `q = P/Q` the numerator `P(w)Q(-w) + P(-w)Q(w)` and denominator
/// `Q(w)Q(-w)` are even in `w`, so both are polynomials in `z`. Common roots
/// of the final numerator and denominator are cancelled.
pub fn pushforward_qd(q: &RationalFunction) -> Result<Pushforward, AlgebraError> {
    let poles = q.poles(ROOT_MATCH)?;
    if let Some(&(r, m)) = poles.iter().find(|&&(_, m)| m >= 2) {
        return Err(AlgebraError::UnsupportedInput(format!(
            "pole of order {m} at {r}"
        )));
    }
    let flagged = poles
        .is_empty()
        .then(|| "density has no finite poles; formal result returned".to_string());

    let (p, d) = (&q.num, &q.den);
    let a = &(p * &d.reflect()) + &(&p.reflect() * d);
    let b = d * &d.reflect();
    let a_z = even_part(&a);
    let b_z = even_part(&b);
    // A(z) / (4 z B(z))
    let den = &b_z * &Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0)]);
    let scale = a.max_coeff_norm().max(f64::MIN_POSITIVE);
    let num = if a_z.max_coeff_norm() <= 1e-14 * scale.max(p.max_coeff_norm() * d.max_coeff_norm())
    {
        Polynomial::zero()
    } else {
        a_z
    };
    let result = simplify(RationalFunction { num, den })?;
    Ok(Pushforward { result, flagged })
}

/// Polynomial in `z = w^2` from an even polynomial in `w`.
fn even_part(p: &Polynomial) -> Polynomial {
    Polynomial::new(p.coeffs().iter().step_by(2).copied().collect())
}

/// Cancel numerically common roots of numerator and denominator.
fn simplify(f: RationalFunction) -> Result<RationalFunction, AlgebraError> {
    if f.num.is_zero() {
        return Ok(RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::constant(Complex64::new(1.0, 0.0)),
        });
    }
    if f.num.degree() == 0 || f.den.degree() == 0 {
        return Ok(f);
    }
    let mut nr = f.num.roots()?;
    let mut dr = f.den.roots()?;
    let mut cancelled = false;
    let mut i = 0;
    while i < nr.len() {
        if let Some(j) = dr
            .iter()
            .position(|s| (s - nr[i]).norm() <= ROOT_MATCH * nr[i].norm().max(1.0))
        {
            dr.swap_remove(j);
            nr.swap_remove(i);
            cancelled = true;
        } else {
            i += 1;
        }
    }
    if !cancelled {
        return Ok(f);
    }
    let lead = f.num.leading() / f.den.leading();
    Ok(RationalFunction {
        num: Polynomial::from_roots(&nr).scale(lead),
        den: Polynomial::from_roots(&dr),
    })
}
