use num_complex::Complex64;

use super::{AlgebraError, Polynomial};

/// One-parameter polynomial family `f_c(z) = A(z) + c B(z)` with a marked
/// critical point that does not move with `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFamily {
    pub base: Polynomial,
    pub slope: Polynomial,
    pub critical_point: Complex64,
}

impl AffineFamily {
    /// `z^2 + c` with critical point 0.
    pub fn quadratic() -> Self {
        AffineFamily {
            base: Polynomial::from_real(&[0.0, 0.0, 1.0]),
            slope: Polynomial::from_real(&[1.0]),
            critical_point: Complex64::new(0.0, 0.0),
        }
    }

    pub fn member(&self, c: Complex64) -> Polynomial {
        &self.base + &self.slope.scale(c)
    }

    /// Orbit of the critical point up to `n` with `d z_k / d c`.
    fn critical_orbit(&self, c: Complex64, n: usize) -> Vec<(Complex64, Complex64)> {
        let f = self.member(c);
        let mut z = self.critical_point;
        let mut dz = Complex64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(n + 1);
        out.push((z, dz));
        for _ in 0..n {
            let (v, fz) = f.eval_with_derivative(z);
            let fc = self.slope.eval(z);
            dz = fz * dz + fc;
            z = v;
            out.push((z, dz));
        }
        out
    }
}

/// Critical-orbit condition to solve for.
#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    /// `f^n(crit) = crit` with exact period `n`.
    CriticalPeriodic { period: usize },
    /// `f^m(crit) = f^n(crit)` with `m > n >= 1` and
    /// `f^n(crit) != f^{n-(m-n)}(crit)`.
    CriticalPreperiodic { m: usize, n: usize },
    /// A fixed point with multiplier `lambda`.
    FixedPointMultiplier { lambda: Complex64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterProblem {
    pub family: AffineFamily,
    pub condition: Condition,
    pub seed: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSolution {
    pub parameter: Complex64,
    /// Undeflated condition residual at the returned parameter.
    pub residual: f64,
    pub iterations: usize,
}

const MAX_NEWTON: usize = 100;

/// Newton's method on the parameter.
///
/// Derivatives of iterates come from the forward recurrence
/// `dz_{k+1} = f'(z_k) dz_k + df/dc(z_k)`. Periodic conditions are deflated by
/// the factors of proper divisor periods. Preperiodic conditions are solved
/// undeflated and the result is rejected when `f^n = f^{n-(m-n)}` also holds.
/// The search disk has radius `10 (1 + |seed|)`.
pub fn solve_parameter(
    problem: &ParameterProblem,
    tolerance: f64,
) -> Result<ParameterSolution, AlgebraError> {
    if tolerance <= 0.0 {
        return Err(AlgebraError::InvalidProblem(
            "tolerance must be positive".into(),
        ));
    }
    match problem.condition {
        Condition::CriticalPeriodic { period } => {
            if period == 0 {
                return Err(AlgebraError::InvalidProblem(
                    "period must be positive".into(),
                ));
            }
            let factors = divisors(period)
                .into_iter()
                .filter(|&k| k < period)
                .map(|k| (k, 0))
                .collect::<Vec<_>>();
            critical_newton(problem, (period, 0), &factors, tolerance)
        }
        Condition::CriticalPreperiodic { m, n } => {
            if n == 0 || m <= n {
                return Err(AlgebraError::InvalidProblem(format!(
                    "need m > n >= 1, got m={m}, n={n}"
                )));
            }
            let sol = critical_newton(problem, (m, n), &[], tolerance)?;
            // the relation must not already hold one period earlier
            let p = m - n;
            if n >= p {
                let orbit = problem.family.critical_orbit(sol.parameter, m);
                let gap = (orbit[n].0 - orbit[n - p].0).norm();
                if gap < tolerance.sqrt() {
                    return Err(AlgebraError::DegenerateCondition(format!(
                        "solution also satisfies f^{n}(crit) = f^{}(crit)",
                        n - p
                    )));
                }
            }
            Ok(sol)
        }
        Condition::FixedPointMultiplier { lambda } => multiplier_newton(problem, lambda, tolerance),
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Newton on `G(c) = (z_a - z_b) / prod (z_p - z_q)`.
fn critical_newton(
    problem: &ParameterProblem,
    main: (usize, usize),
    factors: &[(usize, usize)],
    tolerance: f64,
) -> Result<ParameterSolution, AlgebraError> {
    let family = &problem.family;
    let top = main.0;
    let radius = 10.0 * (1.0 + problem.seed.norm());
    let mut c = problem.seed;

    // identically satisfied conditions show up as exact zeros at generic parameters
    let probes = [
        c,
        c + Complex64::new(0.0123, 0.0371),
        c - Complex64::new(0.0291, -0.0177),
    ];
    if probes.iter().all(|&p| {
        let o = family.critical_orbit(p, top);
        o[main.0].0 == o[main.1].0
    }) {
        return Err(AlgebraError::DegenerateCondition(format!(
            "f^{}(crit) = f^{}(crit) for every parameter",
            main.0, main.1
        )));
    }

    for it in 0..MAX_NEWTON {
        let orbit = family.critical_orbit(c, top);
        let g = orbit[main.0].0 - orbit[main.1].0;
        let dg = orbit[main.0].1 - orbit[main.1].1;
        let residual = g.norm();
        // logarithmic derivative of the deflated function
        let mut logd = dg / g;
        for &(p, q) in factors {
            let h = orbit[p].0 - orbit[q].0;
            let dh = orbit[p].1 - orbit[q].1;
            if h != Complex64::new(0.0, 0.0) {
                logd -= dh / h;
            }
        }
        if residual < tolerance * 1e-3 || g == Complex64::new(0.0, 0.0) {
            return Ok(ParameterSolution {
                parameter: c,
                residual,
                iterations: it,
            });
        }
        let step = logd.inv();
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(AlgebraError::Diverged(c));
        }
        c -= step;
        if (c - problem.seed).norm() > radius {
            return Err(AlgebraError::Diverged(c));
        }
        if step.norm() < 1e-15 * c.norm().max(1.0) {
            let orbit = family.critical_orbit(c, top);
            let residual = (orbit[main.0].0 - orbit[main.1].0).norm();
            return finish(c, residual, it + 1, tolerance);
        }
    }
    let orbit = family.critical_orbit(c, top);
    let residual = (orbit[main.0].0 - orbit[main.1].0).norm();
    finish(c, residual, MAX_NEWTON, tolerance)
}

fn finish(
    c: Complex64,
    residual: f64,
    iterations: usize,
    tolerance: f64,
) -> Result<ParameterSolution, AlgebraError> {
    if residual < tolerance {
        Ok(ParameterSolution {
            parameter: c,
            residual,
            iterations,
        })
    } else {
        Err(AlgebraError::Diverged(c))
    }
}

/// Two-dimensional Newton in `(z, c)` on `f_c(z) = z`, `f_c'(z) = lambda`.
fn multiplier_newton(
    problem: &ParameterProblem,
    lambda: Complex64,
    tolerance: f64,
) -> Result<ParameterSolution, AlgebraError> {
    let family = &problem.family;
    let radius = 10.0 * (1.0 + problem.seed.norm());
    let mut c = problem.seed;
    // start from the fixed point whose multiplier is closest to lambda
    let fixed = &family.member(c) - &Polynomial::from_real(&[0.0, 1.0]);
    let mut z = fixed
        .roots()?
        .into_iter()
        .min_by(|a, b| {
            let ma = (family.member(c).eval_with_derivative(*a).1 - lambda).norm();
            let mb = (family.member(c).eval_with_derivative(*b).1 - lambda).norm();
            ma.total_cmp(&mb)
        })
        .ok_or_else(|| AlgebraError::InvalidProblem("family has no fixed points".into()))?;
    let ds = family.slope.derivative();
    for it in 0..MAX_NEWTON {
        let f = family.member(c);
        let (v, d1, d2) = f.eval_with_two_derivatives(z);
        let f1 = v - z;
        let f2 = d1 - lambda;
        let residual = f1.norm().max(f2.norm());
        if residual < tolerance * 1e-3 {
            return Ok(ParameterSolution {
                parameter: c,
                residual,
                iterations: it,
            });
        }
        // Jacobian [[f' - 1, B(z)], [f'', B'(z)]]
        let a11 = d1 - 1.0;
        let a12 = family.slope.eval(z);
        let a21 = d2;
        let a22 = ds.eval(z);
        let det = a11 * a22 - a12 * a21;
        if det.norm() == 0.0 {
            return Err(AlgebraError::DegenerateCondition(
                "singular Jacobian in the multiplier condition".into(),
            ));
        }
        let dz = (f1 * a22 - a12 * f2) / det;
        let dc = (a11 * f2 - a21 * f1) / det;
        z -= dz;
        c -= dc;
        if !c.re.is_finite() || !c.im.is_finite() || (c - problem.seed).norm() > radius {
            return Err(AlgebraError::Diverged(c));
        }
        if dz.norm().max(dc.norm()) < 1e-15 * c.norm().max(1.0) {
            let f = family.member(c);
            let (v, d1) = f.eval_with_derivative(z);
            let residual = (v - z).norm().max((d1 - lambda).norm());
            return finish(c, residual, it + 1, tolerance);
        }
    }
    Err(AlgebraError::Diverged(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad(condition: Condition, seed: Complex64) -> ParameterProblem {
        ParameterProblem {
            family: AffineFamily::quadratic(),
            condition,
            seed,
        }
    }

    #[test]
    fn rabbit_parameter() {
        let s = solve_parameter(
            &quad(Condition::CriticalPeriodic { period: 3 }, c(-0.1, 0.75)),
            1e-12,
        )
        .unwrap();
        // oracle: root of c^3 + 2c^2 + c + 1 in the upper half plane
        let p = Polynomial::from_real(&[1.0, 1.0, 2.0, 1.0]);
        let oracle = p.roots().unwrap().into_iter().find(|r| r.im > 0.1).unwrap();
        assert!((s.parameter - oracle).norm() < 1e-12);
        assert!((s.parameter - c(-0.122561, 0.744862)).norm() < 1e-6);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn tuned_rabbit_parameter() {
        let s = solve_parameter(
            &quad(Condition::CriticalPreperiodic { m: 9, n: 6 }, c(-0.1, 0.96)),
            1e-12,
        )
        .unwrap();
        assert!((s.parameter - c(-0.101096, 0.956287)).norm() < 1e-6);
        // f^6(0) differs from f^3(0)
        let f = AffineFamily::quadratic().member(s.parameter);
        let mut z = vec![c(0.0, 0.0)];
        for _ in 0..9 {
            z.push(f.eval(*z.last().unwrap()));
        }
        assert!((z[9] - z[6]).norm() < 1e-12);
        assert!((z[6] - z[3]).norm() > 1e-3);
    }

    #[test]
    fn cardioid_cusp_from_multiplier() {
        let s = solve_parameter(
            &quad(
                Condition::FixedPointMultiplier {
                    lambda: c(1.0, 0.0),
                },
                c(0.2, 0.05),
            ),
            1e-12,
        )
        .unwrap();
        assert!((s.parameter - 0.25).norm() < 1e-10);
        // cardioid parametrization c = l/2 - l^2/4
        let l = Complex64::from_polar(0.7, 0.9);
        let s = solve_parameter(
            &quad(
                Condition::FixedPointMultiplier { lambda: l },
                l / 2.0 - l * l / 4.0 + 0.05,
            ),
            1e-12,
        )
        .unwrap();
        assert!((s.parameter - (l / 2.0 - l * l / 4.0)).norm() < 1e-10);
    }

    #[test]
    fn idempotent_from_solution() {
        let p = quad(Condition::CriticalPeriodic { period: 4 }, c(-0.15, 1.0));
        let s = solve_parameter(&p, 1e-12).unwrap();
        let again = solve_parameter(
            &ParameterProblem {
                seed: s.parameter,
                ..p
            },
            1e-12,
        )
        .unwrap();
        assert!((again.parameter - s.parameter).norm() < 1e-12);
    }

    #[test]
    fn invalid_and_degenerate() {
        assert!(matches!(
            solve_parameter(
                &quad(Condition::CriticalPreperiodic { m: 3, n: 3 }, c(0.0, 0.0)),
                1e-9
            ),
            Err(AlgebraError::InvalidProblem(_))
        ));
        // f_c(z) = z^2 has f^2(0) = f(0) = 0 for every c
        let fam = AffineFamily {
            base: Polynomial::from_real(&[0.0, 0.0, 1.0]),
            slope: Polynomial::from_real(&[0.0, 0.0, 1.0]),
            critical_point: c(0.0, 0.0),
        };
        let p = ParameterProblem {
            family: fam,
            condition: Condition::CriticalPreperiodic { m: 2, n: 1 },
            seed: c(0.3, 0.0),
        };
        assert!(matches!(
            solve_parameter(&p, 1e-9),
            Err(AlgebraError::DegenerateCondition(_))
        ));
    }
}
