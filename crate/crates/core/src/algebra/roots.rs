//! Aberth–Ehrlich simultaneous root iteration.

use num_complex::Complex64;

use super::{AlgebraError, Polynomial, EPS};

pub const MAX_ROOT_ITERATIONS: usize = 500;

/// All roots of `p` repeated by multiplicity.
///
/// Starting points lie on the circle of radius `1 + max|a_i / a_d|`, which
/// encloses every root. Each sweep applies the Aberth correction in
/// Gauss–Seidel order; a root is frozen once its Horner value is below the
/// rounding-error bound. Real-coefficient inputs return a conjugate-closed set.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>, AlgebraError> {
    let d = p.degree();
    if d == 0 {
        return Err(AlgebraError::DegreeTooLow(0));
    }
    let coeffs = p.coeffs();
    // exact roots at zero
    let zeros = coeffs
        .iter()
        .take_while(|c| **c == Complex64::new(0.0, 0.0))
        .count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let q = Polynomial::new(coeffs[zeros..].to_vec());
    let n = q.degree();
    if n > 0 {
        roots.extend(aberth(&q)?);
    }
    if p.is_real() {
        symmetrize_conjugates(&mut roots);
    }
    Ok(roots)
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>, AlgebraError> {
    let n = p.degree();
    let lead = p.leading();
    let monic = p.scale(lead.inv());
    if n == 1 {
        return Ok(vec![-monic.coeffs()[0]]);
    }
    let radius = 1.0
        + monic.coeffs()[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ROOT_ITERATIONS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, dv) = monic.eval_with_derivative(z[k]);
            let bound = 4.0 * n as f64 * EPS * monic.abs_eval(z[k].norm());
            if v.norm() <= bound {
                done[k] = true;
                continue;
            }
            all_done = false;
            let ratio = v / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff != Complex64::new(0.0, 0.0) {
                        s += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                // perturb off an exact collision
                let bump = Complex64::new(EPS.sqrt(), EPS.sqrt()) * (1.0 + z[k].norm());
                z[k] += bump;
                continue;
            }
            z[k] -= w;
            if w.norm() <= EPS * z[k].norm() {
                done[k] = true;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    // accept iterates whose residual meets the published bound anyway
    let scale = monic.max_coeff_norm();
    let ok = z
        .iter()
        .all(|&r| monic.eval(r).norm() <= 1e-10 * scale * r.norm().max(1.0).powi(n as i32));
    if ok {
        Ok(z)
    } else {
        Err(AlgebraError::NoConvergence(MAX_ROOT_ITERATIONS))
    }
}

/// Make a root set of a real polynomial exactly closed under conjugation.
fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let self_gap = 2.0 * roots[i].im.abs();
        let partner = (0..n)
            .filter(|&j| !used[j])
            .map(|j| (j, (roots[i] - roots[j].conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, gap)) if gap < self_gap => {
                used[j] = true;
                let a = 0.5 * (roots[i] + roots[j].conj());
                let a = if a.im < 0.0 { a.conj() } else { a };
                roots[i] = a;
                roots[j] = a.conj();
            }
            _ => roots[i].im = 0.0,
        }
    }
}

/// Group roots closer than `tol` (relative to `max(1, |r|)`), returning the
/// cluster means with their multiplicities, in first-seen order.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut sums: Vec<Complex64> = Vec::new();
    for &r in roots {
        let hit = clusters
            .iter()
            .position(|(c, _)| (c - r).norm() <= tol * r.norm().max(1.0));
        match hit {
            Some(k) => {
                sums[k] += r;
                clusters[k].1 += 1;
                clusters[k].0 = sums[k] / clusters[k].1 as f64;
            }
            None => {
                clusters.push((r, 1));
                sums.push(r);
            }
        }
    }
    clusters
}
