use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifiedGrid, PlanesError};
use crate::dynamics::{AnyMap, CodingTree, DEFAULT_TREE_BUDGET};

/// Sample the Julia set by the leaves of a coding tree.
///
/// All `d^depth` leaves are built; when they exceed `sample_budget` a subset
/// is drawn without replacement by a ChaCha generator seeded with `seed`,
/// kept in leaf order.
pub fn render_inverse(
    f: &AnyMap,
    root: Complex64,
    depth: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<Vec<Complex64>, PlanesError> {
    let tree = CodingTree::build_with_budget(f.clone(), root, depth, DEFAULT_TREE_BUDGET)?;
    let leaves = tree.level(depth);
    if leaves.len() <= sample_budget {
        return Ok(leaves.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, leaves.len(), sample_budget).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|k| leaves[k]).collect())
}

/// Fraction of `points` lying on pixels of the class boundary of `grid`
/// (within `reach` pixels).
pub fn boundary_band_fraction(points: &[Complex64], grid: &ClassifiedGrid, reach: usize) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let mask = grid.boundary_mask(reach);
    let hits = points
        .iter()
        .filter(|&&z| {
            grid.window
                .pixel(z)
                .is_some_and(|(i, j)| mask[j * grid.window.columns + i])
        })
        .count();
    hits as f64 / points.len() as f64
}
