use std::sync::Arc;

use super::pchip::Pchip;
use super::polynomial::IntervalPolynomial;
use super::ThurstonError;

/// Default table size per lap when a map is materialized.
pub const DEFAULT_LAP_SAMPLES: usize = 4096;

const BISECTION_WIDTH: f64 = 1e-14;
const VALUE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
enum Shape {
    /// Polygon through the nodes.
    Linear {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    Polynomial(IntervalPolynomial),
    /// One monotone interpolant per lap.
    Sampled(Vec<Pchip>),
    /// `H^-1 o f0 o H` for the recorded conjugacy `H`.
    Conjugate(Arc<Conjugacy>),
}

/// Conjugacy `H_n = h_0 o ... o h_{n-1}` stored through the polynomials
/// `p_0, ..., p_{n-1}` of the pullback: `H_{k+1}(x)` is the preimage of
/// `H_k(p_k(x))` under the lap of `f0` carrying the index of `x`'s lap of `p_k`.
#[derive(Debug)]
struct Conjugacy {
    base: PiecewiseMonotoneMap,
    polys: Vec<IntervalPolynomial>,
}

impl Conjugacy {
    fn forward(&self, x: f64) -> f64 {
        let mut trail = Vec::with_capacity(self.polys.len());
        let mut y = x;
        for p in self.polys.iter().rev() {
            trail.push(p.lap_of(y));
            y = p.eval(y).clamp(0.0, 1.0);
        }
        for &lap in trail.iter().rev() {
            y = self.base.lap_inverse(lap, y);
        }
        y
    }

    fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        // bisect to the last representable split: near the ends H is steep
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= f64::EPSILON * hi {
                break;
            }
            if self.forward(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if y - self.forward(lo) <= self.forward(hi) - y {
            lo
        } else {
            hi
        }
    }
}

/// Continuous map of `[0, 1]` with alternately ascending and descending laps,
/// sending the boundary to the boundary.
#[derive(Clone, Debug)]
pub struct PiecewiseMonotoneMap {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    shape: Shape,
}

impl PiecewiseMonotoneMap {
    /// Polygon through `(xs[k], ys[k])`; consecutive monotone segments merge
    /// into one lap.
    pub fn piecewise_linear(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, ThurstonError> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(ThurstonError::InvalidMap("need two or more nodes".into()));
        }
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ThurstonError::InvalidMap(
                "nodes must increase from 0 to 1".into(),
            ));
        }
        if ys.iter().any(|y| !(0.0..=1.0).contains(y)) {
            return Err(ThurstonError::InvalidMap(
                "values must lie in [0, 1]".into(),
            ));
        }
        let mut breakpoints = vec![0.0];
        let mut values = vec![ys[0]];
        let mut last_sign = 0.0;
        for k in 0..xs.len() - 1 {
            let s = (ys[k + 1] - ys[k]).signum();
            if ys[k + 1] == ys[k] {
                return Err(ThurstonError::InvalidMap(format!(
                    "flat segment at x = {}",
                    xs[k]
                )));
            }
            if last_sign != 0.0 && s != last_sign {
                breakpoints.push(xs[k]);
                values.push(ys[k]);
            }
            last_sign = s;
        }
        breakpoints.push(1.0);
        values.push(ys[ys.len() - 1]);
        Self::checked(breakpoints, values, Shape::Linear { xs, ys })
    }

    /// Parses `x y` pairs, one per line; `#` starts a comment, commas are
    /// accepted as separators.
    pub fn parse(text: &str) -> Result<Self, ThurstonError> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parsed: Result<Vec<f64>, _> = fields.iter().map(|s| s.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 2 => {
                    xs.push(v[0]);
                    ys.push(v[1]);
                }
                _ => {
                    return Err(ThurstonError::Parse {
                        line: n + 1,
                        content: line.to_string(),
                    })
                }
            }
        }
        Self::piecewise_linear(xs, ys)
    }

    pub fn from_polynomial(p: IntervalPolynomial) -> Result<Self, ThurstonError> {
        let breakpoints = p.breakpoints();
        let values = breakpoints.iter().map(|&x| p.eval(x)).collect();
        Self::checked(breakpoints, values, Shape::Polynomial(p))
    }

    /// One strictly monotone table per lap; tables must meet end to end.
    pub fn from_lap_samples(laps: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self, ThurstonError> {
        if laps.is_empty() {
            return Err(ThurstonError::InvalidMap("no laps".into()));
        }
        let mut breakpoints = vec![laps[0].0[0]];
        let mut values = vec![laps[0].1[0]];
        let mut tables = Vec::with_capacity(laps.len());
        for (j, (xs, ys)) in laps.into_iter().enumerate() {
            if xs.len() < 2 || xs.len() != ys.len() || xs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ThurstonError::InvalidMap(format!(
                    "lap {j} table is not increasing in x"
                )));
            }
            let rising = ys[1] > ys[0];
            if ys
                .windows(2)
                .any(|w| (w[1] > w[0]) != rising || w[1] == w[0])
            {
                return Err(ThurstonError::InvalidMap(format!(
                    "lap {j} values are not strictly monotone"
                )));
            }
            let (x0, y0) = (xs[0], ys[0]);
            if (x0 - breakpoints[j]).abs() > VALUE_TOLERANCE
                || (y0 - values[j]).abs() > VALUE_TOLERANCE
            {
                return Err(ThurstonError::InvalidMap(format!(
                    "lap {j} does not start where lap {} ends",
                    j.max(1) - 1
                )));
            }
            breakpoints.push(xs[xs.len() - 1]);
            values.push(ys[ys.len() - 1]);
            tables.push(Pchip::new(xs, ys));
        }
        Self::checked(breakpoints, values, Shape::Sampled(tables))
    }

    fn checked(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        shape: Shape,
    ) -> Result<Self, ThurstonError> {
        let d = breakpoints.len() - 1;
        if d == 0 || breakpoints[0] != 0.0 || breakpoints[d] != 1.0 {
            return Err(ThurstonError::InvalidMap("laps must cover [0, 1]".into()));
        }
        for &end in [values[0], values[d]].iter() {
            if end.min((end - 1.0).abs()) > VALUE_TOLERANCE {
                return Err(ThurstonError::InvalidMap(format!(
                    "boundary value {end} is not 0 or 1"
                )));
            }
        }
        let first = values[1] > values[0];
        for j in 0..d {
            let rising = values[j + 1] > values[j];
            if rising != (first == (j % 2 == 0)) || values[j + 1] == values[j] {
                return Err(ThurstonError::InvalidMap("laps do not alternate".into()));
            }
        }
        Ok(PiecewiseMonotoneMap {
            breakpoints,
            values,
            shape,
        })
    }

    /// Number of laps.
    pub fn degree(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// `0 = x_0 < x_1 < ... < x_d = 1`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.breakpoints[1..self.degree()]
    }

    /// Values at the interior breakpoints, in lap order.
    pub fn critical_values(&self) -> &[f64] {
        &self.values[1..self.degree()]
    }

    /// `(f(0), f(1))`, rounded onto `{0, 1}`.
    pub fn boundary(&self) -> (f64, f64) {
        (self.values[0].round(), self.values[self.degree()].round())
    }

    pub fn ascending_first(&self) -> bool {
        self.values[1] > self.values[0]
    }

    pub fn lap_range(&self, j: usize) -> (f64, f64) {
        let (a, b) = (self.values[j], self.values[j + 1]);
        (a.min(b), a.max(b))
    }

    /// Lap containing `x`, the left one at a breakpoint.
    pub fn lap_of(&self, x: f64) -> usize {
        self.critical_points().partition_point(|&c| c < x)
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.shape, Shape::Polynomial(_))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.shape {
            Shape::Linear { xs, ys } => {
                let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1) - 1;
                let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
                ys[k] + t * (ys[k + 1] - ys[k])
            }
            Shape::Polynomial(p) => p.eval(x),
            Shape::Sampled(tables) => tables[self.lap_of(x)].eval(x),
            Shape::Conjugate(h) => h.inverse(h.base.eval(h.forward(x))),
        }
    }

    /// Preimage of `y` in lap `j`; `y` is clamped into the lap's range.
    pub fn lap_inverse(&self, j: usize, y: f64) -> f64 {
        let (lo, hi) = self.lap_range(j);
        let y = y.clamp(lo, hi);
        let (a, b) = (self.breakpoints[j], self.breakpoints[j + 1]);
        let rising = self.values[j + 1] > self.values[j];
        match &self.shape {
            Shape::Linear { xs, ys } => {
                let start = xs.partition_point(|&v| v < a);
                let end = xs.partition_point(|&v| v <= b) - 1;
                let seg = &ys[start..=end];
                let k = if rising {
                    seg.partition_point(|&v| v < y)
                } else {
                    seg.partition_point(|&v| v > y)
                };
                let k = start + k.clamp(1, end - start) - 1;
                let t = (y - ys[k]) / (ys[k + 1] - ys[k]);
                xs[k] + t * (xs[k + 1] - xs[k])
            }
            Shape::Polynomial(p) => p.lap_inverse(j, y),
            Shape::Sampled(tables) => {
                let table = &tables[j];
                let x = bisect(a, b, rising, y, |x| table.eval(x));
                let d = table.derivative(x);
                let polished = if d != 0.0 {
                    x - (table.eval(x) - y) / d
                } else {
                    x
                };
                if (a..=b).contains(&polished)
                    && (table.eval(polished) - y).abs() <= (table.eval(x) - y).abs()
                {
                    polished
                } else {
                    x
                }
            }
            Shape::Conjugate(h) => h.inverse(h.base.lap_inverse(j, h.forward(y))),
        }
    }

    /// `H^-1 o self o H`, where `H` carries the laps of the new map onto
    /// those of `self` and satisfies `H(x) = (self|lap j)^-1(p(x))` on lap `j`
    /// of `p`.
    pub(crate) fn pulled_back(&self, p: &IntervalPolynomial) -> Self {
        let conjugacy = match &self.shape {
            Shape::Conjugate(h) => {
                let mut polys = h.polys.clone();
                polys.push(p.clone());
                Conjugacy {
                    base: h.base.clone(),
                    polys,
                }
            }
            _ => Conjugacy {
                base: self.clone(),
                polys: vec![p.clone()],
            },
        };
        let breakpoints = p.breakpoints();
        let mut values: Vec<f64> = vec![self.values[0]];
        values.extend(
            conjugacy
                .base
                .critical_values()
                .iter()
                .map(|&v| conjugacy.inverse(v)),
        );
        values.push(self.values[self.degree()]);
        PiecewiseMonotoneMap {
            breakpoints,
            values,
            shape: Shape::Conjugate(Arc::new(conjugacy)),
        }
    }

    /// The conjugacy `H` with `self = H^-1 o f0 o H`, identity unless this map
    /// came out of a pullback.
    pub fn conjugacy(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Conjugate(h) => h.forward(x),
            _ => x,
        }
    }

    pub fn conjugacy_inverse(&self, y: f64) -> f64 {
        match &self.shape {
            Shape::Conjugate(h) => h.inverse(y),
            _ => y,
        }
    }

    /// Dense monotone tables, `samples` points per lap.
    pub fn materialize(&self, samples: usize) -> Result<Self, ThurstonError> {
        let samples = samples.max(2);
        let laps = (0..self.degree())
            .map(|j| {
                let (a, b) = (self.breakpoints[j], self.breakpoints[j + 1]);
                let xs: Vec<f64> = (0..samples)
                    .map(|k| a + (b - a) * k as f64 / (samples - 1) as f64)
                    .collect();
                let mut ys: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
                ys[0] = self.values[j];
                ys[samples - 1] = self.values[j + 1];
                (xs, ys)
            })
            .collect();
        Self::from_lap_samples(laps)
    }

    /// Sup distance on `n + 1` equispaced points.
    pub fn sup_distance(&self, other: &Self, n: usize) -> f64 {
        (0..=n)
            .map(|k| k as f64 / n as f64)
            .map(|x| (self.eval(x) - other.eval(x)).abs())
            .fold(0.0, f64::max)
    }

    /// Lap itinerary of each critical value, `C` marking a critical point.
    pub fn kneading(&self, length: usize) -> Vec<String> {
        let symbols = b"0123456789abcdefghijklmnopqrstuvwxyz";
        self.critical_points()
            .iter()
            .map(|&c| {
                let mut x = self.eval(c);
                let mut word = String::with_capacity(length);
                for _ in 0..length {
                    if self.critical_points().iter().any(|&b| (x - b).abs() < 1e-9) {
                        word.push('C');
                    } else {
                        word.push(symbols[self.lap_of(x) % symbols.len()] as char);
                    }
                    x = self.eval(x);
                }
                word
            })
            .collect()
    }
}

fn bisect(mut lo: f64, mut hi: f64, rising: bool, y: f64, f: impl Fn(f64) -> f64) -> f64 {
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < y) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thurston_interval::solve_critical_values;

    fn tent() -> PiecewiseMonotoneMap {
        PiecewiseMonotoneMap::piecewise_linear(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn tent_structure() {
        let f = tent();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.critical_points(), &[0.5]);
        assert_eq!(f.critical_values(), &[1.0]);
        assert_eq!(f.boundary(), (0.0, 0.0));
        assert!(f.ascending_first());
        assert_eq!(f.eval(0.25), 0.5);
        assert_eq!(f.lap_inverse(1, 0.5), 0.75);
    }

    #[test]
    fn parse_merges_segments() {
        let f = PiecewiseMonotoneMap::parse("# two laps\n0 0\n0.2, 0.5\n0.4 1\n1 0\n").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.critical_points(), &[0.4]);
        assert!((f.lap_inverse(0, 0.75) - 0.3).abs() < 1e-15);
        assert!(matches!(
            PiecewiseMonotoneMap::parse("0 0\nx 1\n"),
            Err(ThurstonError::Parse { line: 2, .. })
        ));
        assert!(PiecewiseMonotoneMap::parse("0 0\n0.5 1\n1 0.5\n").is_err());
        assert!(PiecewiseMonotoneMap::parse("0 0\n0.5 1\n0.7 1\n1 0\n").is_err());
    }

    #[test]
    fn sampled_round_trip() {
        let p = solve_critical_values(3, (0.0, 1.0), &[0.7, 0.2]).unwrap();
        let f = PiecewiseMonotoneMap::from_polynomial(p.clone()).unwrap();
        let g = f.materialize(DEFAULT_LAP_SAMPLES).unwrap();
        assert!(g.sup_distance(&f, 1000) < 1e-9);
        for j in 0..3 {
            let (lo, hi) = g.lap_range(j);
            let y = 0.3 * lo + 0.7 * hi;
            assert!((g.eval(g.lap_inverse(j, y)) - y).abs() < 1e-12);
        }
    }

    #[test]
    fn pulled_back_is_conjugate() {
        let f = tent();
        let p = solve_critical_values(2, (0.0, 0.0), &[1.0]).unwrap();
        let g = f.pulled_back(&p);
        for k in 0..=50 {
            let x = k as f64 / 50.0;
            let h = g.conjugacy(x);
            assert!((f.eval(h) - g.conjugacy(g.eval(x))).abs() < 1e-12);
            assert!((g.conjugacy(g.conjugacy_inverse(h)) - h).abs() < 1e-14);
        }
        assert_eq!(g.critical_points(), &[0.5]);
    }
}
