use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::basins::BasinClassifier;
use super::map::NewtonMap;
use super::NewtonError;
use crate::algebra::Polynomial;
use crate::planes::class;
use crate::point::serialize_complex;

/// Radial rings per angular sample of the polar grid.
pub const RADIAL_FRACTION: usize = 4;
/// Number of relaxation parameters used by [`default_h_samples`] callers.
pub const DEFAULT_H_COUNT: usize = 16;

/// Half-open angular interval `[start, end)` in radians, inside `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngularInterval {
    pub start: f64,
    pub end: f64,
}

impl AngularInterval {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcReport {
    pub radius: f64,
    pub alpha: usize,
    #[serde(serialize_with = "serialize_complex")]
    pub root: Complex64,
    pub multiplicity: usize,
    pub degree: usize,
    pub h_set: Vec<f64>,
    pub arcs: Vec<AngularInterval>,
    pub total_length: f64,
    /// `c` from `total_length = 2 pi R / (c d)`; `None` when nothing survives.
    pub c: Option<f64>,
    pub bound: f64,
    /// Circle length inside the immediate basin for each `h` alone.
    pub per_h_length: Vec<f64>,
    pub angular_resolution: usize,
    pub radial_resolution: usize,
    /// Circle samples left undecided for at least one `h`.
    pub undecided_on_circle: usize,
    /// Per-sample membership on the circle.
    #[serde(skip)]
    pub membership: Vec<bool>,
}

/// `count` log-spaced values from `0.05 m` up to `m`.
pub fn default_h_samples(multiplicity: usize, count: usize) -> Vec<f64> {
    let m = multiplicity as f64;
    if count <= 1 {
        return vec![m];
    }
    (0..count)
        .map(|k| m * 0.05f64.powf((count - 1 - k) as f64 / (count - 1) as f64))
        .collect()
}

/// Samples of the circle `|z| = R` lying in the immediate basin of root
/// `alpha` for every `h` in `h_samples`.
///
/// The immediate basin is the connected component of the basin containing
/// the root on a polar grid covering `|z| <= R`; undecided cells are
/// excluded.
pub fn common_basin_arcs(
    f: &Polynomial,
    alpha: usize,
    h_samples: &[f64],
    radius: f64,
    angular_resolution: usize,
) -> Result<ArcReport, NewtonError> {
    if !(radius >= 3.0) {
        return Err(NewtonError::InvalidInput(format!(
            "radius {radius} is below 3"
        )));
    }
    if angular_resolution < 8 {
        return Err(NewtonError::InvalidInput(
            "angular resolution must be at least 8".into(),
        ));
    }
    let base = NewtonMap::new(f.clone(), 1.0)?;
    if base.roots().iter().any(|r| r.value.norm() > 1.0 + 1e-9) {
        return Err(NewtonError::InvalidInput(
            "all roots must lie in the closed unit disk".into(),
        ));
    }
    let Some(root) = base.roots().get(alpha).copied() else {
        return Err(NewtonError::InvalidInput(format!(
            "root index {alpha} out of range"
        )));
    };
    let m = root.multiplicity as f64;
    if h_samples.is_empty() || h_samples.iter().any(|&h| !(h > 0.0 && h <= m)) {
        return Err(NewtonError::InvalidInput(format!(
            "h samples must lie in (0, {m}]"
        )));
    }
    let grid = PolarGrid::new(radius, angular_resolution);
    let mut membership = vec![true; angular_resolution];
    let mut per_h_length = Vec::with_capacity(h_samples.len());
    let mut undecided = vec![false; angular_resolution];
    for &h in h_samples {
        let map = base.with_h(h)?;
        let classifier = BasinClassifier::new(&map)?;
        let max_iter = 100 + (40.0 * m / h).ceil() as usize;
        let classes: Vec<u8> = (0..grid.len())
            .into_par_iter()
            .map(|idx| classifier.cell(grid.point(idx), max_iter).class)
            .collect();
        let component = grid.component(&classes, class::basin(alpha), root.value);
        let outer = grid.outer_ring();
        let mut inside = 0usize;
        for (j, idx) in outer.enumerate() {
            membership[j] &= component[idx];
            undecided[j] |= classes[idx] == class::UNDECIDED;
            inside += component[idx] as usize;
        }
        per_h_length.push(radius * 2.0 * PI * inside as f64 / angular_resolution as f64);
    }
    let arcs = assemble_arcs(&membership);
    let total_length = radius * arcs.iter().map(AngularInterval::width).sum::<f64>();
    let d = f.degree() as f64;
    let c = (total_length > 0.0).then(|| 2.0 * PI * radius / (d * total_length));
    let bound = c.map_or(0.0, |c| 2.0 * PI * radius / (c * d));
    Ok(ArcReport {
        radius,
        alpha,
        root: root.value,
        multiplicity: root.multiplicity,
        degree: f.degree(),
        h_set: h_samples.to_vec(),
        arcs,
        total_length,
        c,
        bound,
        per_h_length,
        angular_resolution,
        radial_resolution: grid.rings,
        undecided_on_circle: undecided.iter().filter(|&&u| u).count(),
        membership,
    })
}

/// Maximal runs of true samples; sample `j` covers `[2 pi j/n, 2 pi (j+1)/n)`.
fn assemble_arcs(membership: &[bool]) -> Vec<AngularInterval> {
    let n = membership.len();
    let step = 2.0 * PI / n as f64;
    let mut arcs = Vec::new();
    let mut j = 0;
    while j < n {
        if !membership[j] {
            j += 1;
            continue;
        }
        let start = j;
        while j < n && membership[j] {
            j += 1;
        }
        arcs.push(AngularInterval {
            start: start as f64 * step,
            end: if j == n { 2.0 * PI } else { j as f64 * step },
        });
    }
    arcs
}

/// Cells `(ring, sector)` at radius `R (ring + 1)/rings`, angle
/// `2 pi (sector + 1/2)/sectors`; the last ring is the circle itself.
struct PolarGrid {
    radius: f64,
    rings: usize,
    sectors: usize,
}

impl PolarGrid {
    fn new(radius: f64, sectors: usize) -> Self {
        PolarGrid {
            radius,
            rings: (sectors / RADIAL_FRACTION).max(16),
            sectors,
        }
    }

    fn len(&self) -> usize {
        self.rings * self.sectors
    }

    fn point(&self, idx: usize) -> Complex64 {
        let (ring, sector) = (idx / self.sectors, idx % self.sectors);
        let r = self.radius * (ring + 1) as f64 / self.rings as f64;
        Complex64::from_polar(r, 2.0 * PI * (sector as f64 + 0.5) / self.sectors as f64)
    }

    fn outer_ring(&self) -> impl Iterator<Item = usize> {
        let first = (self.rings - 1) * self.sectors;
        first..first + self.sectors
    }

    /// Component of `target` cells containing the cell nearest `seed`.
    fn component(&self, classes: &[u8], target: u8, seed: Complex64) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let start = (0..self.len())
            .filter(|&i| classes[i] == target)
            .min_by(|&a, &b| {
                (self.point(a) - seed)
                    .norm()
                    .total_cmp(&(self.point(b) - seed).norm())
            });
        let Some(start) = start else { return mask };
        let mut queue = VecDeque::from([start]);
        mask[start] = true;
        while let Some(idx) = queue.pop_front() {
            let (ring, sector) = (idx / self.sectors, idx % self.sectors);
            let left = ring * self.sectors + (sector + self.sectors - 1) % self.sectors;
            let right = ring * self.sectors + (sector + 1) % self.sectors;
            let mut next = vec![left, right];
            if ring > 0 {
                next.push(idx - self.sectors);
            } else {
                // the innermost ring surrounds the origin
                next.push((sector + self.sectors / 2) % self.sectors);
            }
            if ring + 1 < self.rings {
                next.push(idx + self.sectors);
            }
            for k in next {
                if !mask[k] && classes[k] == target {
                    mask[k] = true;
                    queue.push_back(k);
                }
            }
        }
        mask
    }
}
