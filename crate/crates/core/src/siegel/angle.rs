use num_complex::Complex64;
use serde::Serialize;

use super::series::PowerSeries;
use super::SiegelError;

/// Minimum truncation order for the probe.
pub const MIN_PROBE_ORDER: usize = 200;
/// Probe offsets `s = SPREAD (1 - r)` on each side of `z = 1`.
pub const SPREAD: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleEstimate {
    /// Extrapolated opening angle at `h(1)`, degrees.
    pub degrees: f64,
    /// Half-width of the uncertainty band, degrees.
    pub band: f64,
    /// `(r, estimate)` per probe radius.
    pub samples: Vec<(f64, f64)>,
}

impl AngleEstimate {
    pub fn contains(&self, degrees: f64) -> bool {
        (self.degrees - degrees).abs() <= self.band
    }
}

/// Opening angle of `h(|z| < 1)` at `h(1)`.
///
/// At each radius the arguments of `h(1) - h(r e^{+-is})` are compared with
/// those of `1 - r e^{+-is}`; the ratio is exact for `1 - (1 - z)^alpha`. The
/// estimates are extrapolated linearly in `1 - r` to `r = 1`; the band is
/// the extrapolation step plus the residual spread.
pub fn boundary_angle_probe(h: &PowerSeries, radii: &[f64]) -> Result<AngleEstimate, SiegelError> {
    if h.order() < MIN_PROBE_ORDER {
        return Err(SiegelError::InsufficientOrder(format!(
            "order {} is below {MIN_PROBE_ORDER}",
            h.order()
        )));
    }
    if radii.len() < 2
        || radii.windows(2).any(|w| w[1] <= w[0])
        || radii.iter().any(|&r| !(0.0..1.0).contains(&r))
    {
        return Err(SiegelError::InvalidInput(
            "radii must increase inside (0, 1)".into(),
        ));
    }
    let vertex = Complex64::new(1.0, 0.0);
    let n = h.order();
    let tail_coefficient = h.coefficient(n).norm();
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let s = SPREAD * (1.0 - r);
        let up = Complex64::from_polar(r, s);
        let down = Complex64::from_polar(r, -s);
        let image_up = vertex - h.eval(up);
        let image_down = vertex - h.eval(down);
        // geometric bound on the discarded terms against the distance to the vertex
        let tail = tail_coefficient * r.powi(n as i32 + 1) / (1.0 - r);
        if tail > 1e-3 * image_up.norm().min(image_down.norm()) {
            return Err(SiegelError::InsufficientOrder(format!(
                "truncation tail dominates at r = {r}"
            )));
        }
        let opening = (image_down / image_up).arg().abs();
        let domain = ((vertex - down) / (vertex - up)).arg().abs();
        samples.push((r, 180.0 * opening / domain));
    }
    let m = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(r, _)| 1.0 - r).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = samples.iter().map(|s| s.1).sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&samples)
        .map(|(x, s)| (x - mx) * (s.1 - my))
        .sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let degrees = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&samples)
        .map(|(x, s)| (s.1 - (degrees + slope * x)).abs())
        .fold(0.0, f64::max);
    let last = samples.last().expect("two or more radii").1;
    let band = (degrees - last).abs() + residual;
    Ok(AngleEstimate {
        degrees,
        band,
        samples,
    })
}
