use num_complex::Complex64;
use serde::Serialize;

use super::{AnyMap, ComplexMap, DynamicsError};
use crate::point::Point;

/// Default cap on `depth * d^depth`.
pub const DEFAULT_TREE_BUDGET: u128 = 1 << 24;

/// Samples per edge curve.
const CURVE_SAMPLES: usize = 33;
const MAX_SUBDIVISION: u32 = 24;
/// Postcritical points closer than this fraction of an edge length are
/// dodged when drawing level-1 edges.
const DODGE_FRACTION: f64 = 0.02;

type Curve = Vec<Complex64>;

/// Tree of iterated preimages of a root, labelled by symbol words.
///
/// Level `n` holds `d^n` vertices indexed base `d` with the first symbol
/// most significant. The vertex of word `w` at level `n + 1` is the endpoint
/// of the lift, starting at the vertex of the prefix of `w`, of the edge
/// curve of the shifted word; hence `f(z_{n+1}(w)) = z_n(shift w)`.
#[derive(Clone, Debug)]
pub struct CodingTree {
    map: AnyMap,
    root: Complex64,
    degree: usize,
    levels: Vec<Vec<Complex64>>,
    first_edges: Vec<Curve>,
    postcritical: Vec<Complex64>,
}

impl CodingTree {
    pub fn build(map: AnyMap, root: Complex64, depth: usize) -> Result<Self, DynamicsError> {
        Self::build_with_budget(map, root, depth, DEFAULT_TREE_BUDGET)
    }

    pub fn build_with_budget(
        map: AnyMap,
        root: Complex64,
        depth: usize,
        budget: u128,
    ) -> Result<Self, DynamicsError> {
        let d = map.degree();
        if d < 2 {
            return Err(DynamicsError::InvalidInput(
                "degree must be at least 2".into(),
            ));
        }
        let needed = (d as u128)
            .checked_pow(depth as u32)
            .and_then(|v| v.checked_mul(depth.max(1) as u128))
            .unwrap_or(u128::MAX);
        if needed > budget {
            return Err(DynamicsError::BudgetExceeded { needed, budget });
        }
        let postcritical = postcritical_set(&map)?;
        let first = first_preimages(&map, root)?;
        let first_edges: Vec<Curve> = first
            .iter()
            .map(|&z| edge_curve(root, z, &postcritical))
            .collect();
        let mut tree = CodingTree {
            map,
            root,
            degree: d,
            levels: vec![vec![root]],
            first_edges,
            postcritical,
        };
        if depth == 0 {
            return Ok(tree);
        }
        tree.levels.push(first);
        let mut curves = tree.first_edges.clone();
        for n in 1..depth {
            let count = d.pow(n as u32 + 1);
            let keep_curves = n + 1 < depth;
            let mut vertices = Vec::with_capacity(count);
            let mut next_curves = Vec::with_capacity(if keep_curves { count } else { 0 });
            let shift_mod = d.pow(n as u32);
            for idx in 0..count {
                let start = tree.levels[n][idx / d];
                let lifted = lift_curve(&tree.map, &curves[idx % shift_mod], start)?;
                vertices.push(*lifted.last().expect("nonempty curve"));
                if keep_curves {
                    next_curves.push(lifted);
                }
            }
            tree.levels.push(vertices);
            curves = next_curves;
        }
        Ok(tree)
    }

    pub fn root(&self) -> Complex64 {
        self.root
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn map(&self) -> &AnyMap {
        &self.map
    }

    pub fn level(&self, n: usize) -> &[Complex64] {
        &self.levels[n]
    }

    /// Vertex of a word; the level is the word length.
    pub fn vertex(&self, word: &[usize]) -> Option<Complex64> {
        let level = self.levels.get(word.len())?;
        let mut idx = 0usize;
        for &a in word {
            if a >= self.degree {
                return None;
            }
            idx = idx * self.degree + a;
        }
        level.get(idx).copied()
    }

    /// Index of the shifted word (first symbol dropped) at level `n - 1`.
    pub fn shift_index(&self, n: usize, idx: usize) -> usize {
        idx % self.degree.pow(n as u32 - 1)
    }

    /// Finite postcritical points avoided by the level-1 edges.
    pub fn postcritical(&self) -> &[Complex64] {
        &self.postcritical
    }

    /// Largest `|f(z_{n+1}(w)) - z_n(shift w)|` relative to `max(1, |z_n|)`.
    pub fn shift_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 1..self.levels.len() {
            for (idx, &z) in self.levels[n].iter().enumerate() {
                let target = self.levels[n - 1][self.shift_index(n, idx)];
                let image = match self.map.apply(Point::Finite(z)) {
                    Point::Finite(v) => v,
                    Point::Infinity => return f64::INFINITY,
                };
                worst = worst.max((image - target).norm() / target.norm().max(1.0));
            }
        }
        worst
    }
}

/// Preimages of the root labelled by argument in `[0, 2pi)`, with the root
/// itself first when it is fixed.
fn first_preimages(map: &AnyMap, root: Complex64) -> Result<Vec<Complex64>, DynamicsError> {
    let mut pre = map.preimages(root)?;
    if pre.len() != map.degree() {
        return Err(DynamicsError::InvalidInput(
            "root has preimages at infinity".into(),
        ));
    }
    let scale = pre.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    for i in 0..pre.len() {
        for j in 0..i {
            if (pre[i] - pre[j]).norm() < 1e-8 * scale {
                return Err(DynamicsError::CriticalValueHit(root));
            }
        }
    }
    for z in pre.iter_mut() {
        // one Newton polish against the root
        if let Some((v, dv)) = map.eval_finite(*z) {
            if dv.norm() > 0.0 {
                *z -= (v - root) / dv;
            }
        }
    }
    let key = |z: &Complex64| {
        let fixed = (*z - root).norm() < 1e-9 * scale;
        (!fixed, z.arg().rem_euclid(std::f64::consts::TAU), z.norm())
    };
    pre.sort_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite preimages"));
    Ok(pre)
}

fn postcritical_set(map: &AnyMap) -> Result<Vec<Complex64>, DynamicsError> {
    let escape = map.escape_radius();
    let mut out = Vec::new();
    for (c, _) in map.critical_points()? {
        if escape.is_some() && c.is_infinite() {
            continue;
        }
        let mut p = c;
        for _ in 0..64 {
            p = map.apply(p);
            match p {
                Point::Finite(z) if escape.map_or(true, |r| z.norm() <= r) => {
                    if out.iter().any(|q: &Complex64| (*q - z).norm() < 1e-12) {
                        break;
                    }
                    out.push(z);
                }
                _ => break,
            }
        }
    }
    Ok(out)
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Polyline from `a` to `b` avoiding postcritical points, resampled to
/// `CURVE_SAMPLES` points by arc length.
fn edge_curve(a: Complex64, b: Complex64, avoid: &[Complex64]) -> Curve {
    let len = (b - a).norm();
    if len == 0.0 {
        return vec![a; CURVE_SAMPLES];
    }
    let clearance = DODGE_FRACTION * len;
    let blocked = |p: Complex64, q: Complex64| {
        avoid.iter().any(|&c| {
            (c - a).norm() > 1e-12
                && (c - b).norm() > 1e-12
                && distance_to_segment(c, p, q) < clearance
        })
    };
    let mut path = vec![a, b];
    if blocked(a, b) {
        let mid = (a + b) * 0.5;
        let normal = (b - a) * Complex64::new(0.0, 1.0) / len;
        for off in [0.25, -0.25, 0.5, -0.5, 0.75, -0.75] {
            let w = mid + normal * (off * len);
            if !blocked(a, w) && !blocked(w, b) {
                path = vec![a, w, b];
                break;
            }
        }
    }
    resample(&path, CURVE_SAMPLES)
}

fn resample(path: &[Complex64], n: usize) -> Curve {
    let lengths: Vec<f64> = path.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut acc = 0.0;
    for k in 0..n {
        let s = total * k as f64 / (n - 1) as f64;
        while seg + 1 < lengths.len() && acc + lengths[seg] < s {
            acc += lengths[seg];
            seg += 1;
        }
        let t = if lengths[seg] > 0.0 {
            ((s - acc) / lengths[seg]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(path[seg] + (path[seg + 1] - path[seg]) * t);
    }
    *out.last_mut().expect("n >= 2") = *path.last().expect("nonempty path");
    out
}

/// Lift `curve` through `map` starting at `start` (with `f(start) = curve[0]`).
fn lift_curve(map: &AnyMap, curve: &[Complex64], start: Complex64) -> Result<Curve, DynamicsError> {
    let mut out = Vec::with_capacity(curve.len());
    out.push(start);
    let mut u = start;
    for w in curve.windows(2) {
        u = lift_segment(map, u, w[0], w[1], 0)?;
        out.push(u);
    }
    Ok(out)
}

/// Continue the preimage `u` of `a` to a preimage of `b`, subdividing when
/// the Newton correction disagrees with the linear prediction.
pub(crate) fn lift_segment(
    map: &AnyMap,
    u: Complex64,
    a: Complex64,
    b: Complex64,
    level: u32,
) -> Result<Complex64, DynamicsError> {
    if a == b {
        return Ok(u);
    }
    let (_, du) = map
        .eval_finite(u)
        .ok_or(DynamicsError::CriticalValueHit(a))?;
    if du.norm() < 1e-300 {
        return Err(DynamicsError::CriticalValueHit(a));
    }
    let predicted = u + (b - a) / du;
    let step = (predicted - u).norm();
    if let Some(v) = newton_preimage(map, predicted, b) {
        if (v - predicted).norm() <= 0.1 * step + 1e-13 * (1.0 + u.norm()) {
            return Ok(v);
        }
    }
    if level >= MAX_SUBDIVISION {
        return Err(DynamicsError::CriticalValueHit(a));
    }
    let m = (a + b) * 0.5;
    let um = lift_segment(map, u, a, m, level + 1)?;
    lift_segment(map, um, m, b, level + 1)
}

fn newton_preimage(map: &AnyMap, mut v: Complex64, target: Complex64) -> Option<Complex64> {
    let scale = target.norm().max(1.0);
    for _ in 0..12 {
        let (fv, dv) = map.eval_finite(v)?;
        let r = fv - target;
        if dv.norm() == 0.0 {
            return None;
        }
        let dz = r / dv;
        v -= dz;
        if !v.re.is_finite() || !v.im.is_finite() {
            return None;
        }
        if r.norm() <= 4.0 * f64::EPSILON * scale || dz.norm() <= 1e-16 * v.norm().max(1e-300) {
            let (fv, _) = map.eval_finite(v)?;
            return ((fv - target).norm() < 1e-11 * scale).then_some(v);
        }
    }
    let (fv, _) = map.eval_finite(v)?;
    ((fv - target).norm() < 1e-11 * scale).then_some(v)
}

/// Vertices along a single branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchLimit {
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub point: Complex64,
    pub converged: bool,
    pub tail_diameter: f64,
    #[serde(skip)]
    pub vertices: Vec<Complex64>,
}

/// Follow the branch of the word `symbol(0), symbol(1), ...` to `depth`.
///
/// Only the curves along the branch are lifted: with `C(j, m)` the edge of the
/// word `symbol(j..=j+m)`, `C(j, m)` is the lift of `C(j+1, m-1)` from the
/// endpoint of `C(j, m-1)`, so each level costs one diagonal of lifts.
/// Converged iff the last quarter of the vertex sequence has diameter below
/// `tolerance`.
pub fn branch_limit(
    tree: &CodingTree,
    symbol: impl Fn(usize) -> usize,
    depth: usize,
    tolerance: f64,
) -> Result<BranchLimit, DynamicsError> {
    let d = tree.degree;
    let edge = |j: usize| -> Result<&Curve, DynamicsError> {
        let a = symbol(j);
        tree.first_edges.get(a).ok_or_else(|| {
            DynamicsError::InvalidInput(format!("symbol {a} out of range for degree {d}"))
        })
    };
    let mut vertices = vec![tree.root];
    // diagonal[k] = C(k, n-1-k) for the current level n
    let mut diagonal: Vec<Curve> = Vec::new();
    for n in 1..=depth {
        let mut next: Vec<Curve> = Vec::with_capacity(n);
        let mut below = edge(n - 1)?.clone();
        let mut column: Vec<Curve> = vec![below.clone()];
        for k in (0..n - 1).rev() {
            let start = *diagonal[k].last().expect("nonempty curve");
            below = lift_curve(&tree.map, &below, start)?;
            column.push(below.clone());
        }
        column.reverse();
        next.extend(column);
        vertices.push(*next[0].last().expect("nonempty curve"));
        diagonal = next;
    }
    let tail = &vertices[vertices.len() - (vertices.len() / 4).max(1)..];
    let mut tail_diameter = 0.0f64;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            tail_diameter = tail_diameter.max((a - b).norm());
        }
    }
    Ok(BranchLimit {
        point: *vertices.last().expect("root present"),
        converged: tail_diameter < tolerance,
        tail_diameter,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad(cr: f64, ci: f64) -> AnyMap {
        Polynomial::quadratic(c(cr, ci)).into()
    }

    fn close_to_set(z: Complex64, set: &[Complex64], tol: f64) -> bool {
        set.iter().any(|&w| (z - w).norm() < tol)
    }

    #[test]
    fn square_root_levels() {
        let tree = CodingTree::build(quad(-1.0, 0.0), c(2.0, 0.0), 2).unwrap();
        let s3 = 3f64.sqrt();
        let l1 = tree.level(1);
        assert!((l1[0] - s3).norm() < 1e-14 && (l1[1] + s3).norm() < 1e-14);
        let a = (s3 + 1.0).sqrt();
        let b = (s3 - 1.0).sqrt();
        let expected = [c(a, 0.0), c(-a, 0.0), c(0.0, b), c(0.0, -b)];
        for &z in tree.level(2) {
            assert!(close_to_set(z, &expected, 1e-13), "{z}");
        }
        for &w in &expected {
            assert!(close_to_set(w, tree.level(2), 1e-13));
        }
        assert!(tree.shift_residual() < 1e-12);
    }

    #[test]
    fn roots_of_unity() {
        let tree = CodingTree::build(quad(0.0, 0.0), c(1.0, 0.0), 3).unwrap();
        let level = tree.level(3);
        assert_eq!(level.len(), 8);
        for k in 0..8 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0);
            assert!(close_to_set(w, level, 1e-13));
        }
        assert_eq!(tree.vertex(&[0, 0, 0]), Some(c(1.0, 0.0)));
    }

    #[test]
    fn shift_relation_rabbit() {
        let f = quad(-0.12256116687665362, 0.7448617666197442);
        let poly = f.as_polynomial().unwrap().clone();
        let fixed = (&poly - &Polynomial::monomial(c(1.0, 0.0), 1))
            .roots()
            .unwrap();
        let alpha = fixed
            .into_iter()
            .max_by(|a, b| a.im.partial_cmp(&b.im).unwrap())
            .unwrap();
        let tree = CodingTree::build(f, alpha, 8).unwrap();
        assert_eq!(tree.level(8).len(), 256);
        assert!(tree.shift_residual() < 1e-9);
    }

    #[test]
    fn fixed_branches() {
        let tree = CodingTree::build(quad(0.0, 0.0), c(1.0, 0.0), 1).unwrap();
        let b = branch_limit(&tree, |_| 0, 20, 1e-12).unwrap();
        assert!(b.converged && (b.point - 1.0).norm() < 1e-15);

        let beta = (1.0 + 5f64.sqrt()) / 2.0;
        let tree = CodingTree::build(quad(-1.0, 0.0), c(beta, 0.0), 1).unwrap();
        let b = branch_limit(&tree, |_| 0, 30, 1e-12).unwrap();
        assert!(b.converged && (b.point - beta).norm() < 1e-12);
    }

    #[test]
    fn branch_matches_tree_vertices() {
        let tree = CodingTree::build(quad(-1.0, 0.0), c(2.0, 0.0), 6).unwrap();
        let word = [1, 0, 1, 1, 0, 1];
        let b = branch_limit(&tree, |j| word[j], 6, 1e-3).unwrap();
        for n in 1..=6 {
            let v = tree.vertex(&word[..n]).unwrap();
            assert!((b.vertices[n] - v).norm() < 1e-12, "level {n}");
        }
    }

    #[test]
    fn alternating_branch_converges_to_alpha() {
        let beta = (1.0 + 5f64.sqrt()) / 2.0;
        let alpha = (1.0 - 5f64.sqrt()) / 2.0;
        let tree = CodingTree::build(quad(-1.0, 0.0), c(beta, 0.0), 1).unwrap();
        let b = branch_limit(&tree, |j| j % 2, 120, 1e-6).unwrap();
        assert!(b.converged, "tail {}", b.tail_diameter);
        assert!((b.point - alpha).norm() < 1e-6);
        let b40 = branch_limit(&tree, |j| j % 2, 40, 1e-6).unwrap();
        // the inverse branch contracts by 1/|2 alpha| per step
        assert!(b40.tail_diameter > 1e-4 && b40.tail_diameter < 1e-2);
    }

    #[test]
    fn budget_is_enforced() {
        let r = CodingTree::build_with_budget(quad(-1.0, 0.0), c(2.0, 0.0), 30, 1 << 20);
        assert!(matches!(r, Err(DynamicsError::BudgetExceeded { .. })));
    }

    #[test]
    fn critical_value_root_is_rejected() {
        let r = CodingTree::build(quad(-1.0, 0.0), c(-1.0, 0.0), 2);
        assert_eq!(r.err(), Some(DynamicsError::CriticalValueHit(c(-1.0, 0.0))));
    }
}
