use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::EntireError;

/// Natural log of the overflow cap `1e300`.
pub const LN_CAP: f64 = 690.7755278982137;
/// Beyond this `|Im z|` the trigonometric factor is taken from its
/// one-exponential asymptotic form.
const TRIG_ASYMPTOTIC: f64 = 300.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntireKind {
    Exp,
    Sin,
    Cos,
    ExpSin,
    ExpCos,
}

impl EntireKind {
    pub const ALL: [EntireKind; 5] = [
        EntireKind::Exp,
        EntireKind::Sin,
        EntireKind::Cos,
        EntireKind::ExpSin,
        EntireKind::ExpCos,
    ];

    pub fn has_exp(self) -> bool {
        matches!(
            self,
            EntireKind::Exp | EntireKind::ExpSin | EntireKind::ExpCos
        )
    }

    fn trig(self) -> Option<Trig> {
        match self {
            EntireKind::Exp => None,
            EntireKind::Sin | EntireKind::ExpSin => Some(Trig::Sin),
            EntireKind::Cos | EntireKind::ExpCos => Some(Trig::Cos),
        }
    }
}

impl fmt::Display for EntireKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntireKind::Exp => "exp",
            EntireKind::Sin => "sin",
            EntireKind::Cos => "cos",
            EntireKind::ExpSin => "expsin",
            EntireKind::ExpCos => "expcos",
        })
    }
}

impl FromStr for EntireKind {
    type Err = EntireError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exp" => Ok(EntireKind::Exp),
            "sin" => Ok(EntireKind::Sin),
            "cos" => Ok(EntireKind::Cos),
            "expsin" => Ok(EntireKind::ExpSin),
            "expcos" => Ok(EntireKind::ExpCos),
            other => Err(EntireError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Trig {
    Sin,
    Cos,
}

/// Result of one evaluation: a finite value or a certified escape with the
/// unit direction of the (unrepresentable) image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Finite(Complex64),
    Overflow { direction: Complex64 },
}

impl Step {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Step::Finite(z) => Some(z),
            Step::Overflow { .. } => None,
        }
    }

    pub fn is_overflow(self) -> bool {
        matches!(self, Step::Overflow { .. })
    }
}

/// `lambda e^z`, `lambda sin z`, `lambda cos z`, `lambda e^z sin z` or `lambda e^z cos z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntireFamily {
    pub kind: EntireKind,
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub lambda: Complex64,
}

impl EntireFamily {
    pub fn new(kind: EntireKind, lambda: Complex64) -> Result<Self, EntireError> {
        if !lambda.is_finite() {
            return Err(EntireError::InvalidParameter(lambda.to_string()));
        }
        Ok(EntireFamily { kind, lambda })
    }

    pub fn exp(lambda: f64) -> Self {
        EntireFamily {
            kind: EntireKind::Exp,
            lambda: Complex64::new(lambda, 0.0),
        }
    }

    /// Singular values: the omitted value 0 for exponential kinds, `+-lambda`
    /// for sine and cosine. The product kinds have infinitely many critical
    /// values; those at `tan z = -1` (sine) or `tan z = 1` (cosine) with
    /// `|Re z| < pi` are listed after 0.
    pub fn singular_values(&self) -> Vec<Complex64> {
        let l = self.lambda;
        match self.kind {
            EntireKind::Exp => vec![Complex64::new(0.0, 0.0)],
            EntireKind::Sin | EntireKind::Cos => vec![l, -l],
            EntireKind::ExpSin | EntireKind::ExpCos => {
                let base = if self.kind == EntireKind::ExpSin {
                    -0.25
                } else {
                    0.25
                };
                let mut out = vec![Complex64::new(0.0, 0.0)];
                for k in -1..=1 {
                    let c = Complex64::new(std::f64::consts::PI * (base + k as f64), 0.0);
                    if c.re.abs() < std::f64::consts::PI {
                        out.extend(self.step(c).finite());
                    }
                }
                out
            }
        }
    }

    /// Overflow-safe evaluation; never returns a non-finite value.
    pub fn step(&self, z: Complex64) -> Step {
        if !z.is_finite() {
            let direction = if z.re.is_finite() && z.im.is_finite() {
                z / z.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            return Step::Overflow { direction };
        }
        let l = self.lambda;
        if l == Complex64::new(0.0, 0.0) {
            return Step::Finite(l);
        }
        // log-modulus and unit direction, factor by factor
        let mut log_mod = l.norm().ln();
        let mut dir = l / l.norm();
        if self.kind.has_exp() {
            log_mod += z.re;
            dir *= Complex64::from_polar(1.0, z.im);
        }
        if let Some(trig) = self.kind.trig() {
            let (lm, d) = trig_polar(trig, z);
            log_mod += lm;
            dir *= d;
        }
        let dir = dir / dir.norm();
        if log_mod > LN_CAP {
            return Step::Overflow { direction: dir };
        }
        let direct = self.direct(z);
        if direct.is_finite() {
            Step::Finite(direct)
        } else {
            Step::Finite(dir * log_mod.exp())
        }
    }

    fn direct(&self, z: Complex64) -> Complex64 {
        let mut v = self.lambda;
        if self.kind.has_exp() {
            v *= z.exp();
        }
        match self.kind.trig() {
            Some(Trig::Sin) => v * z.sin(),
            Some(Trig::Cos) => v * z.cos(),
            None => v,
        }
    }

    /// Derivative, or `None` when it is not representable.
    pub fn derivative(&self, z: Complex64) -> Option<Complex64> {
        let l = self.lambda;
        let d = match self.kind {
            EntireKind::Exp => l * z.exp(),
            EntireKind::Sin => l * z.cos(),
            EntireKind::Cos => -l * z.sin(),
            EntireKind::ExpSin => l * z.exp() * (z.sin() + z.cos()),
            EntireKind::ExpCos => l * z.exp() * (z.cos() - z.sin()),
        };
        d.is_finite().then_some(d)
    }

    /// Sufficient condition for the next evaluation to overflow, from lower
    /// bounds `|e^z| = e^{Re z}` and `|sin z|, |cos z| >= sinh |Im z|`.
    pub fn certified_escape(&self, z: Complex64) -> bool {
        let mut lower = self.lambda.norm().ln();
        if self.kind.has_exp() {
            lower += z.re;
        }
        if self.kind.trig().is_some() {
            let y = z.im.abs();
            if y == 0.0 {
                return false;
            }
            lower += if y > 20.0 { y - LN_2 } else { y.sinh().ln() };
        }
        lower > LN_CAP
    }

    /// `Re z` above which exponential kinds overflow on the next step.
    pub fn escape_threshold(&self) -> f64 {
        LN_CAP - self.lambda.norm().ln()
    }
}

/// `(ln |t(z)|, t(z)/|t(z)|)` for `t = sin` or `cos`.
fn trig_polar(trig: Trig, z: Complex64) -> (f64, Complex64) {
    let y = z.im;
    if y.abs() < TRIG_ASYMPTOTIC {
        let v = match trig {
            Trig::Sin => z.sin(),
            Trig::Cos => z.cos(),
        };
        let m = v.norm();
        return (
            m.ln(),
            if m > 0.0 {
                v / m
            } else {
                Complex64::new(1.0, 0.0)
            },
        );
    }
    // sin z ~ (i/2) e^{y} e^{-ix} for y >> 0 and (-i/2) e^{-y} e^{ix} for y << 0
    let (phase, sign) = if y > 0.0 { (-z.re, 1.0) } else { (z.re, -1.0) };
    let unit = Complex64::from_polar(1.0, phase);
    let dir = match trig {
        Trig::Sin => Complex64::new(0.0, sign) * unit,
        Trig::Cos => unit,
    };
    (y.abs() - LN_2, dir)
}
