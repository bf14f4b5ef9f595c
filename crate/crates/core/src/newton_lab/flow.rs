use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::map::NewtonMap;
use super::NewtonError;
use crate::algebra::Polynomial;
use crate::planes::Window;
use crate::point::serialize_complex;

/// Relative and absolute local error targets of the integrator.
pub const FLOW_RTOL: f64 = 1e-11;
pub const FLOW_ATOL: f64 = 1e-13;
/// Allowed drift of `arg f` per unit time on an accepted step.
pub const ARG_DRIFT: f64 = 1e-7;
/// `|f'|` (relative) below which the raw field is treated as singular.
pub const SINGULAR_EVENT: f64 = 1e-6;
/// Distance to a root at which a trajectory stops.
pub const ROOT_ARRIVAL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowField {
    /// `z' = -f/f'`.
    Raw,
    /// `z' = -f conj(f')`.
    Desingularized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FlowTerminal {
    ReachedRoot { index: usize },
    ReachedSingularity,
    TimeBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub z: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowTrajectory {
    pub field: FlowField,
    pub samples: Vec<FlowSample>,
    pub terminal: FlowTerminal,
}

impl FlowTrajectory {
    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectory starts with z0")
    }

    pub fn to_csv(&self, f: &Polynomial) -> String {
        let mut out = String::from("t,re,im,abs_f,arg_f\n");
        for s in &self.samples {
            let v = f.eval(s.z);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.t,
                s.z.re,
                s.z.im,
                v.norm(),
                v.arg()
            ));
        }
        out
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince 5(4) step: the fifth-order update and the error estimate.
fn dopri_step(
    field: &impl Fn(Complex64) -> Complex64,
    z: Complex64,
    dt: f64,
) -> (Complex64, Complex64) {
    let mut k = [Complex64::new(0.0, 0.0); 7];
    k[0] = field(z);
    for s in 1..7 {
        let mut acc = z;
        for (j, &a) in A[s].iter().enumerate().take(s) {
            acc += dt * a * k[j];
        }
        k[s] = field(acc);
    }
    let mut high = z;
    let mut err = Complex64::new(0.0, 0.0);
    for s in 0..7 {
        high += dt * B5[s] * k[s];
        err += dt * (B5[s] - B4[s]) * k[s];
    }
    (high, err)
}

/// Integrates the Newton flow of `f` from `z0` up to `t_max`.
pub fn newton_flow(
    f: &Polynomial,
    z0: Complex64,
    t_max: f64,
    field: FlowField,
) -> Result<FlowTrajectory, NewtonError> {
    if !(t_max > 0.0) {
        return Err(NewtonError::InvalidInput("t_max must be positive".into()));
    }
    let map = NewtonMap::new(f.clone(), 1.0)?;
    let scale = f.max_coeff_norm();
    let singular = |z: Complex64| f.eval_with_derivative(z).1.norm() <= SINGULAR_EVENT * scale;
    let arrived = |z: Complex64| map.nearest_root(z, ROOT_ARRIVAL * z.norm().max(1.0));
    if singular(z0) && arrived(z0).is_none() {
        return Err(NewtonError::NearSingularity(z0));
    }
    if arrived(z0).is_some() {
        return Err(NewtonError::InvalidInput("start point is a root".into()));
    }
    let rhs = |z: Complex64| {
        let (v, d) = f.eval_with_derivative(z);
        match field {
            FlowField::Raw => -v / d,
            FlowField::Desingularized => -v * d.conj(),
        }
    };
    let mut samples = vec![FlowSample { t: 0.0, z: z0 }];
    let (mut t, mut z) = (0.0, z0);
    let mut fz = f.eval(z);
    let mut dt = (0.01 * t_max).min(0.01);
    let terminal = loop {
        if let Some(index) = arrived(z) {
            break FlowTerminal::ReachedRoot { index };
        }
        if singular(z) {
            break FlowTerminal::ReachedSingularity;
        }
        if t >= t_max {
            break FlowTerminal::TimeBudget;
        }
        let step = dt.min(t_max - t);
        if step <= 1e-14 * (1.0 + t) {
            return Err(NewtonError::StepFailure { t, z });
        }
        let (next, err) = dopri_step(&rhs, z, step);
        let tol = FLOW_ATOL + FLOW_RTOL * z.norm().max(next.norm());
        let ratio = err.norm() / tol;
        if !next.is_finite() || ratio > 1.0 {
            dt = step * (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.5);
            continue;
        }
        let f_next = f.eval(next);
        // at rounding level the monotonicity test is meaningless
        let rounding = 8.0 * f64::EPSILON * f.abs_eval(next.norm());
        let floor = 1e3 * rounding;
        let decreasing = f_next.norm() < fz.norm() || f_next.norm() <= floor;
        let drift = (f_next / fz).arg().abs();
        let allowance = ARG_DRIFT * step + 1e-12 + rounding / f_next.norm();
        if !decreasing || (drift > allowance && f_next.norm() > floor) {
            dt = step * 0.5;
            continue;
        }
        t += step;
        z = next;
        fz = f_next;
        samples.push(FlowSample { t, z });
        dt = step * (0.9 * ratio.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        if f_next.norm() <= floor {
            let index = map.nearest_root(z, 1e-6 * z.norm().max(1.0));
            if let Some(index) = index {
                break FlowTerminal::ReachedRoot { index };
            }
        }
    };
    Ok(FlowTrajectory {
        field,
        samples,
        terminal,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerCheck {
    pub h: f64,
    pub mean: f64,
    pub max: f64,
    pub points: usize,
}

/// Compares one relaxed Newton step with one raw-flow step of length `h` on
/// the pixel centres of `window`, skipping singular pixels.
pub fn euler_discrepancy(
    f: &Polynomial,
    h: f64,
    window: &Window,
) -> Result<EulerCheck, NewtonError> {
    let map = NewtonMap::new(f.clone(), h)?;
    let gaps: Vec<f64> = (0..window.len())
        .into_par_iter()
        .filter_map(|idx| {
            let z = window.point(idx % window.columns, idx / window.columns);
            let euler = map.eval(z).ok()?;
            let flow = newton_flow(f, z, h, FlowField::Raw).ok()?;
            (flow.terminal == FlowTerminal::TimeBudget).then(|| (euler - flow.last().z).norm())
        })
        .collect();
    if gaps.is_empty() {
        return Err(NewtonError::InvalidInput(
            "no regular points in window".into(),
        ));
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let max = gaps.iter().copied().fold(0.0, f64::max);
    Ok(EulerCheck {
        h,
        mean,
        max,
        points: gaps.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn raw_flow_is_exponential() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let tr = newton_flow(&f, c(2.0, 0.0), 5.0, FlowField::Raw).unwrap();
        assert_eq!(tr.terminal, FlowTerminal::TimeBudget);
        let f0 = f.eval(c(2.0, 0.0));
        for s in &tr.samples {
            assert!(s.z.im.abs() < 1e-14);
            let want = f0 * (-s.t).exp();
            assert!((f.eval(s.z) - want).norm() <= 1e-6 * want.norm());
        }
        let long = newton_flow(&f, c(2.0, 0.0), 60.0, FlowField::Raw).unwrap();
        assert!(matches!(long.terminal, FlowTerminal::ReachedRoot { .. }));
        assert!((long.last().z - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn desingularized_descends() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let tr = newton_flow(&f, c(0.1, 0.5), 200.0, FlowField::Desingularized).unwrap();
        assert!(
            matches!(tr.terminal, FlowTerminal::ReachedRoot { .. }),
            "{:?}",
            tr.terminal
        );
        let mods: Vec<f64> = tr.samples.iter().map(|s| f.eval(s.z).norm()).collect();
        assert!(mods.windows(2).all(|w| w[1] < w[0] || w[1] < 1e-12));
        // on the imaginary axis the trajectory is the separatrix into the saddle at 0
        let axis = newton_flow(&f, c(0.0, 0.5), 200.0, FlowField::Desingularized).unwrap();
        assert_eq!(axis.terminal, FlowTerminal::ReachedSingularity);
        let a0 = f.eval(tr.samples[0].z).arg();
        for s in &tr.samples {
            let v = f.eval(s.z);
            if v.norm() > 1e-8 {
                assert!((v.arg() - a0).abs() < 1e-6 * (1.0 + s.t));
            }
        }
    }

    #[test]
    fn degenerate_flow_hits_singularity() {
        let f = Polynomial::from_real(&[3.0, -3.0, 0.0, 1.0]);
        let tr = newton_flow(&f, c(1.3, 0.0), 20.0, FlowField::Raw).unwrap();
        assert_eq!(tr.terminal, FlowTerminal::ReachedSingularity);
        assert!((tr.last().z - c(1.0, 0.0)).norm() < 1e-3);
        // a nearby start passes close to the saddle before reaching a root
        let off = newton_flow(&f, c(1.3, 1e-6), 40.0, FlowField::Raw).unwrap();
        assert!(
            matches!(off.terminal, FlowTerminal::ReachedRoot { .. }),
            "{:?}",
            off.terminal
        );
        let closest = off
            .samples
            .iter()
            .map(|s| (s.z - c(1.0, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(closest < 1e-2, "{closest}");
        assert!(newton_flow(&f, c(1.0, 0.0), 1.0, FlowField::Raw).is_err());
    }

    #[test]
    fn euler_approximates_flow() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let w = Window::new(c(0.0, 0.0), 4.0, 4.0, 16, 16).unwrap();
        let a = euler_discrepancy(&f, 0.05, &w).unwrap();
        let b = euler_discrepancy(&f, 0.025, &w).unwrap();
        assert!(a.mean > 0.0 && b.mean < a.mean);
    }
}
