use num_complex::Complex64;
use serde::Serialize;

use super::family::{EntireFamily, EntireKind, Step};
use super::EntireError;
use crate::point::serialize_complex;

/// Longest cycle looked for at the end of an orbit.
pub const MAX_PERIOD: usize = 64;
/// Closing tolerance (relative) for cycle detection.
pub const CYCLE_TOLERANCE: f64 = 1e-6;
/// `| |multiplier| - 1 |` below which a cycle is flagged neutral.
pub const NEUTRAL_BAND: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum OrbitOutcome {
    /// Certified escape after `iterations` steps.
    Escaping {
        iterations: usize,
    },
    Attracted {
        period: usize,
        #[serde(serialize_with = "crate::point::serialize_complex_vec")]
        cycle: Vec<Complex64>,
        multiplier_abs: f64,
    },
    /// Limit cycle with multiplier on (or numerically at) the unit circle.
    Neutral {
        period: usize,
        #[serde(serialize_with = "crate::point::serialize_complex_vec")]
        cycle: Vec<Complex64>,
        multiplier_abs: f64,
    },
    Undecided,
}

impl OrbitOutcome {
    pub fn is_escaping(&self) -> bool {
        matches!(self, OrbitOutcome::Escaping { .. })
    }

    pub fn is_attracted(&self) -> bool {
        matches!(self, OrbitOutcome::Attracted { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularOrbit {
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub outcome: OrbitOutcome,
}

/// Fate of every listed singular value over `max_iter` steps.
pub fn singular_orbit_classify(
    family: &EntireFamily,
    max_iter: usize,
) -> Result<Vec<SingularOrbit>, EntireError> {
    if max_iter == 0 {
        return Err(EntireError::InvalidInput(
            "max_iter must be at least 1".into(),
        ));
    }
    Ok(family
        .singular_values()
        .into_iter()
        .map(|value| SingularOrbit {
            value,
            outcome: classify_orbit(family, value, max_iter),
        })
        .collect())
}

/// Escape, attraction to a cycle, neutral cycle or undecided for the orbit of `z0`.
pub fn classify_orbit(family: &EntireFamily, z0: Complex64, max_iter: usize) -> OrbitOutcome {
    let mut tail = Vec::with_capacity(MAX_PERIOD + 1);
    let mut z = z0;
    for n in 0..max_iter {
        if family.kind.has_exp() && family.certified_escape(z) {
            return OrbitOutcome::Escaping { iterations: n + 1 };
        }
        z = match family.step(z) {
            Step::Finite(w) => w,
            Step::Overflow { .. } => return OrbitOutcome::Escaping { iterations: n + 1 },
        };
        if max_iter - n <= MAX_PERIOD + 1 {
            tail.push(z);
        }
    }
    settle(family, &tail).unwrap_or(OrbitOutcome::Undecided)
}

/// Smallest period closing the tail, refined by Newton on `f^p(z) - z`.
fn settle(family: &EntireFamily, tail: &[Complex64]) -> Option<OrbitOutcome> {
    let last = *tail.last()?;
    let period = (1..tail.len()).find(|&p| {
        let back = tail[tail.len() - 1 - p];
        (last - back).norm() < CYCLE_TOLERANCE * last.norm().max(1.0)
    })?;
    let mut z = last;
    for _ in 0..60 {
        let (w, dw) = iterate_with_derivative(family, z, period)?;
        let denom = dw - 1.0;
        if denom.norm() < 1e-300 {
            break;
        }
        let step = (w - z) / denom;
        // a step larger than the closing gap means Newton left the cycle
        if step.norm() > 1e3 * CYCLE_TOLERANCE * z.norm().max(1.0) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let mut cycle = Vec::with_capacity(period);
    let mut multiplier = Complex64::new(1.0, 0.0);
    let mut w = z;
    for _ in 0..period {
        cycle.push(w);
        multiplier *= family.derivative(w)?;
        w = family.step(w).finite()?;
    }
    let multiplier_abs = multiplier.norm();
    Some(if (multiplier_abs - 1.0).abs() <= NEUTRAL_BAND {
        OrbitOutcome::Neutral {
            period,
            cycle,
            multiplier_abs,
        }
    } else if multiplier_abs < 1.0 {
        OrbitOutcome::Attracted {
            period,
            cycle,
            multiplier_abs,
        }
    } else {
        return None;
    })
}

fn iterate_with_derivative(
    family: &EntireFamily,
    z: Complex64,
    n: usize,
) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        d *= family.derivative(w)?;
        w = family.step(w).finite()?;
    }
    Some((w, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Transition {
    /// Largest sampled parameter whose singular orbit does not escape.
    pub below: f64,
    /// Smallest sampled parameter whose singular orbit escapes.
    pub above: f64,
}

impl Transition {
    pub fn width(&self) -> f64 {
        self.above - self.below
    }
}

/// Bisects the real slice `lambda in [lo, hi]` of `lambda e^z` for the
/// change from non-escaping (`lo`) to escaping (`hi`) singular orbit.
pub fn real_slice_transition(
    lo: f64,
    hi: f64,
    width: f64,
    max_iter: usize,
) -> Result<Transition, EntireError> {
    let escapes = |l: f64| {
        classify_orbit(&EntireFamily::exp(l), Complex64::new(0.0, 0.0), max_iter).is_escaping()
    };
    if !(lo < hi && width > 0.0) {
        return Err(EntireError::InvalidInput(
            "need lo < hi and width > 0".into(),
        ));
    }
    if escapes(lo) || !escapes(hi) {
        return Err(EntireError::InvalidInput(format!(
            "[{lo}, {hi}] does not bracket the escape transition"
        )));
    }
    let (mut below, mut above) = (lo, hi);
    while above - below > width {
        let mid = 0.5 * (below + above);
        if escapes(mid) {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(Transition { below, above })
}

/// Kind-specific description of the escape certificate used by the classifier.
pub fn escape_rule(kind: EntireKind) -> &'static str {
    if kind.has_exp() {
        "real part above ln(1e300/|lambda|) or overflow"
    } else {
        "overflow of |lambda| sinh|Im z| past 1e300"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_one_escapes() {
        let r = singular_orbit_classify(&EntireFamily::exp(1.0), 100).unwrap();
        assert_eq!(r.len(), 1);
        // 0 -> 1 -> e -> e^e -> 3.8e6 -> overflow
        assert_eq!(r[0].outcome, OrbitOutcome::Escaping { iterations: 5 });
    }

    #[test]
    fn quarter_attracted() {
        let r = singular_orbit_classify(&EntireFamily::exp(0.25), 2000).unwrap();
        let OrbitOutcome::Attracted {
            period,
            cycle,
            multiplier_abs,
        } = &r[0].outcome
        else {
            panic!("{r:?}")
        };
        assert_eq!(*period, 1);
        // fixed-point oracle
        let mut x = 0.0f64;
        for _ in 0..2000 {
            x = 0.25 * x.exp();
        }
        assert!((cycle[0].re - x).abs() < 1e-12 && cycle[0].im.abs() < 1e-12);
        assert!((x - 0.35740).abs() < 1e-5);
        assert!((multiplier_abs - x).abs() < 1e-12);
    }

    #[test]
    fn threshold_not_escaping() {
        let r =
            singular_orbit_classify(&EntireFamily::exp(1.0 / std::f64::consts::E), 20000).unwrap();
        assert!(
            matches!(
                r[0].outcome,
                OrbitOutcome::Neutral { period: 1, .. } | OrbitOutcome::Undecided
            ),
            "{r:?}"
        );
    }

    #[test]
    fn transition_brackets_inverse_e() {
        let t = real_slice_transition(0.3, 0.45, 2e-4, 20000).unwrap();
        let e = 1.0 / std::f64::consts::E;
        assert!(t.below <= e + 1e-12 && e <= t.above + 1e-3, "{t:?}");
        assert!((t.below - e).abs() < 1e-3 && (t.above - e).abs() < 1e-3);
    }

    #[test]
    fn sine_neutral_origin() {
        let s = EntireFamily::new(EntireKind::Sin, Complex64::new(1.0, 0.0)).unwrap();
        let out = classify_orbit(&s, Complex64::new(0.1, 0.0), 500);
        assert!(!out.is_escaping());
    }
}
