//! Truncated symmetric eigendecomposition and k-means++ clustering.
//!
//! The eigensolver is a thick-restart (Krylov–Schur) Lanczos iteration with
//! full reorthogonalization. The operator is only accessed through
//! matrix-vector products, so a [`SparseGraph`] never has to be densified.

use nalgebra::{DMatrix, DMatrixView, DVector, DVectorView, DVectorViewMut, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SparseGraph;
use crate::matrix::{axpy, norm, sq_dist, RowMatrix};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("requested {requested} eigenpairs of a {n}x{n} matrix")]
    BadRank { requested: usize, n: usize },
    #[error("eigensolver did not converge after {cycles} restart cycles (worst relative residual {worst_residual:.3e})")]
    NoConvergence { cycles: usize, worst_residual: f64 },
    #[error("k = {k} exceeds the number of points ({n})")]
    TooManyClusters { k: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Eigenpairs sorted by descending absolute eigenvalue. `vectors` is
/// `n x l` with orthonormal columns.
#[derive(Debug, Clone)]
pub struct EigPairs {
    pub values: Vec<f64>,
    pub vectors: RowMatrix,
}

#[derive(Debug, Clone, Copy)]
pub struct EigOptions {
    /// Relative residual tolerance: `||A v - λ v|| <= tol * ||A||`.
    pub tol: f64,
    /// Restart cycle cap; `None` uses `10 * l * ceil(ln n)`.
    pub max_cycles: Option<usize>,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions { tol: 1e-8, max_cycles: None, seed: 0 }
    }
}

/// Top-`l` eigenpairs (by absolute value) of the adjacency matrix of `g`.
pub fn top_eigs(g: &SparseGraph, l: usize, opts: &EigOptions) -> Result<EigPairs, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::Invalid("empty graph".into()));
    }
    lanczos_top(g.n(), |x, y| g.matvec(x, y), l, opts)
}

/// Descending absolute value; magnitudes equal up to roundoff put the
/// positive value first.
pub(crate) fn magnitude_order(x: f64, y: f64, scale: f64) -> std::cmp::Ordering {
    if (x.abs() - y.abs()).abs() <= 1e-10 * scale {
        y.total_cmp(&x)
    } else {
        y.abs().total_cmp(&x.abs())
    }
}

/// Krylov basis stored column-major in one buffer so that projections
/// and restarts run as matrix-vector and matrix-matrix products.
struct Basis {
    n: usize,
    len: usize,
    data: Vec<f64>,
}

impl Basis {
    fn with_capacity(n: usize, cap: usize) -> Self {
        Basis { n, len: 0, data: vec![0.0; n * cap] }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    fn view(&self, cols: usize) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.data[..self.n * cols], self.n, cols)
    }

    fn push(&mut self, v: &[f64]) {
        let n = self.n;
        self.data[self.len * n..(self.len + 1) * n].copy_from_slice(v);
        self.len += 1;
    }

    /// Removes the components of `w` along the first `cols` basis vectors
    /// and returns the coefficients. Classical Gram-Schmidt is repeated
    /// until a pass no longer shrinks `w` by more than `1/√2`.
    fn orthogonalize(&self, cols: usize, w: &mut [f64]) -> DVector<f64> {
        let mut total = DVector::zeros(cols);
        if cols == 0 {
            return total;
        }
        let v = self.view(cols);
        let mut before = norm(w);
        for pass in 0..5 {
            let c = v.tr_mul(&DVectorView::from_slice(w, self.n));
            DVectorViewMut::from_slice(w, self.n).gemv(-1.0, &v, &c, 1.0);
            total += c;
            let after = norm(w);
            if pass >= 1 && after > std::f64::consts::FRAC_1_SQRT_2 * before {
                break;
            }
            before = after;
        }
        total
    }

    /// Replaces the basis by `V · Y` (first `Y.ncols()` columns).
    fn rotate(&mut self, y: &DMatrix<f64>) {
        let rotated = self.view(y.nrows()) * y;
        let k = y.ncols();
        self.data[..self.n * k].copy_from_slice(rotated.as_slice());
        self.len = k;
    }
}

fn random_unit_orthogonal(basis: &Basis, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    for _ in 0..5 {
        let mut v: Vec<f64> = (0..basis.n).map(|_| rng.sample(StandardNormal)).collect();
        basis.orthogonalize(basis.len, &mut v);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Top-`l` eigenpairs of a symmetric operator given by `apply(x, y)` (`y = A x`).
pub fn lanczos_top<F>(n: usize, apply: F, l: usize, opts: &EigOptions) -> Result<EigPairs, SpectralError>
where
    F: Fn(&[f64], &mut [f64]),
{
    if l == 0 || l > n {
        return Err(SpectralError::BadRank { requested: l, n });
    }
    let max_dim = n.min((3 * l).max(l + 40));
    let max_cycles = opts.max_cycles.unwrap_or_else(|| {
        let log_n = (n as f64).ln().ceil().max(1.0) as usize;
        10 * l * log_n
    });
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis = Basis::with_capacity(n, max_dim);
    let first = random_unit_orthogonal(&basis, &mut rng).expect("nonzero random vector");
    basis.push(&first);
    let mut h = DMatrix::<f64>::zeros(max_dim, max_dim);
    let mut w = vec![0.0; n];
    let mut worst = f64::INFINITY;

    for cycle in 0..max_cycles.max(1) {
        // expand the basis to max_dim vectors
        let mut residual = 0.0;
        let mut next: Option<Vec<f64>> = None;
        let start = basis.len - 1;
        for idx in start..max_dim {
            apply(basis.col(idx), &mut w);
            let c = basis.orthogonalize(idx + 1, &mut w);
            for (i, &hv) in c.iter().enumerate() {
                h[(i, idx)] = hv;
                h[(idx, i)] = hv;
            }
            let beta = norm(&w);
            let scale = h[(idx, idx)].abs().max(beta).max(1e-300);
            let broke_down = beta <= 1e-12 * scale || basis.len == n;
            if idx + 1 < max_dim {
                let v = if broke_down {
                    match random_unit_orthogonal(&basis, &mut rng) {
                        Some(v) => v,
                        None => break,
                    }
                } else {
                    w.iter().map(|x| x / beta).collect()
                };
                basis.push(&v);
            } else {
                residual = if broke_down { 0.0 } else { beta };
                if !broke_down {
                    next = Some(w.iter().map(|x| x / beta).collect());
                }
            }
        }
        let dim = basis.len;
        let hk = h.view((0, 0), (dim, dim)).into_owned();
        let eig = SymmetricEigen::new(hk);
        let anorm = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| magnitude_order(eig.eigenvalues[a], eig.eigenvalues[b], anorm));
        let exhausted = dim == n;
        worst = order[..l]
            .iter()
            .map(|&i| residual * eig.eigenvectors[(dim - 1, i)].abs() / anorm)
            .fold(0.0, f64::max);
        if exhausted || worst <= opts.tol {
            let y = DMatrix::from_fn(dim, l, |r, c| eig.eigenvectors[(r, order[c])]);
            let x = basis.view(dim) * y;
            let mut vectors = RowMatrix::zeros(n, l);
            let mut values = Vec::with_capacity(l);
            for c in 0..l {
                values.push(eig.eigenvalues[order[c]]);
                let col = x.column(c);
                let nx = col.norm();
                let pivot = col.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
                let s = if pivot < 0.0 { -1.0 } else { 1.0 } / nx;
                for (r, v) in col.iter().enumerate() {
                    vectors.set(r, c, v * s);
                }
            }
            log::debug!("lanczos converged after {} cycles (dim {dim})", cycle + 1);
            return Ok(EigPairs { values, vectors });
        }
        // thick restart: keep the most wanted Ritz vectors
        let keep = (l + (dim - l) / 2).clamp(l, dim - 1);
        let y = DMatrix::from_fn(dim, keep, |r, c| eig.eigenvectors[(r, order[c])]);
        basis.rotate(&y);
        h.fill(0.0);
        for c in 0..keep {
            h[(c, c)] = eig.eigenvalues[order[c]];
        }
        let v = match next {
            Some(mut v) => {
                // re-orthogonalize against the rotated basis to absorb drift
                basis.orthogonalize(keep, &mut v);
                let nv = norm(&v);
                v.iter_mut().for_each(|x| *x /= nv);
                v
            }
            None => random_unit_orthogonal(&basis, &mut rng).expect("basis is not full"),
        };
        basis.push(&v);
    }
    Err(SpectralError::NoConvergence { cycles: max_cycles, worst_residual: worst })
}

/// Node-to-bin assignment with per-bin centroids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub assignments: Vec<u32>,
    pub centroids: RowMatrix,
    /// Within-cluster sum of squared distances.
    pub objective: f64,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.centroids.rows()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub iters: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions { restarts: 5, iters: 100 }
    }
}

fn seed_plus_plus(points: &RowMatrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = points.rows();
    let mut chosen = Vec::with_capacity(k);
    let mut is_chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen.push(first);
    is_chosen[first] = true;
    let mut dist: Vec<f64> = (0..n).map(|i| sq_dist(points.row(i), points.row(first))).collect();
    while chosen.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in dist.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc >= target {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| dist.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            // all remaining points coincide with a center
            let free: Vec<usize> = (0..n).filter(|&i| !is_chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(pick);
        is_chosen[pick] = true;
        let c = points.row(pick);
        for (i, d) in dist.iter_mut().enumerate() {
            let nd = sq_dist(points.row(i), c);
            if nd < *d {
                *d = nd;
            }
        }
    }
    chosen
}

fn update_centroids(points: &RowMatrix, assignments: &[u32], centroids: &mut RowMatrix) -> Vec<usize> {
    let k = centroids.rows();
    let d = points.cols();
    let mut sums = RowMatrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (i, &a) in assignments.iter().enumerate() {
        counts[a as usize] += 1;
        axpy(1.0, points.row(i), sums.row_mut(a as usize));
    }
    for c in 0..k {
        if counts[c] > 0 {
            let inv = 1.0 / counts[c] as f64;
            let (src, dst) = (sums.row(c), centroids.row_mut(c));
            for (x, s) in dst.iter_mut().zip(src) {
                *x = s * inv;
            }
        }
    }
    counts
}

/// Moves, for each empty bin, the point farthest from its own centroid
/// (taken from a bin with at least two members) into the empty bin.
fn repair_empty(points: &RowMatrix, assignments: &mut [u32], centroids: &mut RowMatrix, counts: &mut [usize]) {
    for empty in 0..counts.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_d = -1.0;
        for (i, &a) in assignments.iter().enumerate() {
            if counts[a as usize] < 2 {
                continue;
            }
            let d = sq_dist(points.row(i), centroids.row(a as usize));
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let Some(i) = far else { break };
        counts[assignments[i] as usize] -= 1;
        assignments[i] = empty as u32;
        counts[empty] = 1;
        centroids.row_mut(empty).copy_from_slice(points.row(i));
    }
}

/// Distance bounds that let an assignment step skip points whose centroid
/// provably cannot change (Hamerly's method).
struct Bounds {
    /// Distance to the assigned centroid, from above.
    upper: Vec<f64>,
    /// Distance to the second-closest centroid, from below.
    lower: Vec<f64>,
}

/// Nearest and second-nearest centroid of `p`; ties go to the lower index.
fn two_nearest(p: &[f64], centroids: &RowMatrix) -> (u32, f64, f64) {
    let (mut best, mut best_d, mut second_d) = (0u32, f64::INFINITY, f64::INFINITY);
    for c in 0..centroids.rows() {
        let d = sq_dist(p, centroids.row(c));
        if d < best_d {
            second_d = best_d;
            best = c as u32;
            best_d = d;
        } else if d < second_d {
            second_d = d;
        }
    }
    (best, best_d, second_d)
}

fn full_assign(points: &RowMatrix, centroids: &RowMatrix, assignments: &mut [u32]) -> Bounds {
    let res: Vec<(u32, f64, f64)> = (0..points.rows())
        .into_par_iter()
        .with_min_len(256)
        .map(|i| two_nearest(points.row(i), centroids))
        .collect();
    let mut bounds = Bounds { upper: Vec::with_capacity(res.len()), lower: Vec::with_capacity(res.len()) };
    for (a, (c, d1, d2)) in assignments.iter_mut().zip(res) {
        *a = c;
        bounds.upper.push(d1.sqrt());
        bounds.lower.push(d2.sqrt());
    }
    bounds
}

/// One bounded assignment step after the centroids moved by `shift`.
/// Returns whether any assignment changed.
fn bounded_assign(points: &RowMatrix, centroids: &RowMatrix, shift: &[f64], assignments: &mut [u32], bounds: &mut Bounds) -> bool {
    let k = centroids.rows();
    // half the distance from each centroid to its nearest neighbor
    let half_gap: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|c| {
            let row = centroids.row(c);
            let nearest = (0..k).filter(|&o| o != c).map(|o| sq_dist(row, centroids.row(o))).fold(f64::INFINITY, f64::min);
            0.5 * nearest.sqrt()
        })
        .collect();
    let (mut top, mut top_c, mut runner) = (0.0f64, usize::MAX, 0.0f64);
    for (c, &d) in shift.iter().enumerate() {
        if d > top {
            runner = top;
            top = d;
            top_c = c;
        } else if d > runner {
            runner = d;
        }
    }
    // relative slack keeps rounding in the bounds from skipping a real change
    const SLACK: f64 = 1e-9;
    let updates: Vec<Option<(u32, f64, f64)>> = (0..points.rows())
        .into_par_iter()
        .with_min_len(256)
        .map(|i| {
            let a = assignments[i] as usize;
            let upper = bounds.upper[i] + shift[a];
            let lower = bounds.lower[i] - if a == top_c { runner } else { top };
            let limit = lower.max(half_gap[a]);
            if upper * (1.0 + SLACK) < limit {
                return Some((a as u32, upper, lower));
            }
            let exact = sq_dist(points.row(i), centroids.row(a)).sqrt();
            if exact * (1.0 + SLACK) < limit {
                return Some((a as u32, exact, lower));
            }
            let (c, d1, d2) = two_nearest(points.row(i), centroids);
            Some((c, d1.sqrt(), d2.sqrt()))
        })
        .collect();
    let mut changed = false;
    for (i, u) in updates.into_iter().enumerate() {
        let (c, up, lo) = u.expect("every point updated");
        changed |= c != assignments[i];
        assignments[i] = c;
        bounds.upper[i] = up;
        bounds.lower[i] = lo;
    }
    changed
}

fn objective(points: &RowMatrix, centroids: &RowMatrix, assignments: &[u32]) -> f64 {
    assignments.iter().enumerate().map(|(i, &a)| sq_dist(points.row(i), centroids.row(a as usize))).sum()
}

/// Lloyd iterations from the given seed rows. Returns the clustering and the
/// objective after every assignment step.
pub fn lloyd(points: &RowMatrix, seeds: &[usize], iters: usize) -> (Clustering, Vec<f64>) {
    let k = seeds.len();
    let mut centroids = RowMatrix::zeros(k, points.cols());
    for (c, &s) in seeds.iter().enumerate() {
        centroids.row_mut(c).copy_from_slice(points.row(s));
    }
    let mut assignments = vec![0u32; points.rows()];
    let mut bounds = full_assign(points, &centroids, &mut assignments);
    let mut trace = vec![objective(points, &centroids, &assignments)];
    for _ in 0..iters {
        let before = centroids.clone();
        let mut counts = update_centroids(points, &assignments, &mut centroids);
        let repaired = counts.contains(&0);
        repair_empty(points, &mut assignments, &mut centroids, &mut counts);
        let changed = if repaired {
            // the repair moved points, so bounds start over
            bounds = full_assign(points, &centroids, &mut assignments);
            true
        } else {
            let shift: Vec<f64> = (0..k).map(|c| sq_dist(before.row(c), centroids.row(c)).sqrt()).collect();
            bounded_assign(points, &centroids, &shift, &mut assignments, &mut bounds)
        };
        trace.push(objective(points, &centroids, &assignments));
        if !changed {
            break;
        }
    }
    let mut counts = update_centroids(points, &assignments, &mut centroids);
    repair_empty(points, &mut assignments, &mut centroids, &mut counts);
    let objective = objective(points, &centroids, &assignments);
    (Clustering { assignments, centroids, objective }, trace)
}

/// k-means with k-means++ seeding; the best of `restarts` runs is returned.
pub fn kmeanspp(points: &RowMatrix, k: usize, opts: &KMeansOptions, seed: u64) -> Result<Clustering, SpectralError> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(SpectralError::TooManyClusters { k, n });
    }
    if opts.restarts == 0 {
        return Err(SpectralError::Invalid("restarts must be at least 1".into()));
    }
    let mut best: Option<Clustering> = None;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(r as u64)));
        let seeds = seed_plus_plus(points, k, &mut rng);
        let (c, _) = lloyd(points, &seeds, opts.iters);
        if best.as_ref().is_none_or(|b| c.objective < b.objective) {
            best = Some(c);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Replaces every row of `u` by the centroid of its bin.
pub fn block_embed(u: &RowMatrix, clustering: &Clustering) -> Result<RowMatrix, SpectralError> {
    if u.rows() != clustering.assignments.len() || u.cols() != clustering.centroids.cols() {
        return Err(SpectralError::Dimension(format!(
            "matrix is {}x{}, clustering covers {} rows of width {}",
            u.rows(),
            u.cols(),
            clustering.assignments.len(),
            clustering.centroids.cols()
        )));
    }
    let mut out = RowMatrix::zeros(u.rows(), u.cols());
    for (i, &a) in clustering.assignments.iter().enumerate() {
        out.row_mut(i).copy_from_slice(clustering.centroids.row(a as usize));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::dot;

    fn dense_adjacency(g: &SparseGraph) -> DMatrix<f64> {
        let n = g.n();
        let mut a = DMatrix::zeros(n, n);
        for (i, j) in g.edges() {
            a[(i as usize, j as usize)] = 1.0;
            a[(j as usize, i as usize)] = 1.0;
        }
        a
    }

    #[test]
    fn cycle_top_eigenpair() {
        let g = SparseGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let e = top_eigs(&g, 1, &EigOptions::default()).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-10);
        for i in 0..4 {
            assert!((e.vectors.get(i, 0) - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn star_and_path_spectra() {
        let star = SparseGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let e = top_eigs(&star, 2, &EigOptions::default()).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-10 && (e.values[1] + 2.0).abs() < 1e-10);
        let p3 = SparseGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let e = top_eigs(&p3, 3, &EigOptions::default()).unwrap();
        let s = 2f64.sqrt();
        assert!((e.values[0] - s).abs() < 1e-10);
        assert!((e.values[1] + s).abs() < 1e-10);
        assert!(e.values[2].abs() < 1e-10);
    }

    #[test]
    fn matches_dense_on_karate() {
        let g = crate::datasets::karate();
        let dense = SymmetricEigen::new(dense_adjacency(&g));
        let mut expected: Vec<f64> = dense.eigenvalues.iter().copied().collect();
        expected.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
        let e = top_eigs(&g, 10, &EigOptions { seed: 5, ..Default::default() }).unwrap();
        for (a, b) in e.values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn larger_sparse_graph_residuals() {
        let g = crate::generate::erdos_renyi(600, 0.02, 4);
        let e = top_eigs(&g, 8, &EigOptions { tol: 1e-9, ..Default::default() }).unwrap();
        let anorm = e.values[0].abs();
        let mut y = vec![0.0; g.n()];
        for c in 0..8 {
            let v = e.vectors.column(c);
            g.matvec(&v, &mut y);
            let r: f64 = y.iter().zip(&v).map(|(a, b)| (a - e.values[c] * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-8 * anorm, "residual {r}");
            for c2 in 0..8 {
                let o = dot(&v, &e.vectors.column(c2));
                let want = if c == c2 { 1.0 } else { 0.0 };
                assert!((o - want).abs() < 1e-8);
            }
        }
        for w in e.values.windows(2) {
            assert!(w[0].abs() >= w[1].abs() - 1e-12);
        }
    }

    #[test]
    fn rejects_bad_rank() {
        let g = SparseGraph::from_edges(3, &[(0, 1)]);
        assert!(matches!(top_eigs(&g, 4, &EigOptions::default()), Err(SpectralError::BadRank { .. })));
        assert!(matches!(top_eigs(&g, 0, &EigOptions::default()), Err(SpectralError::BadRank { .. })));
    }

    fn column(vals: &[f64]) -> RowMatrix {
        RowMatrix::from_vec(vals.len(), 1, vals.to_vec())
    }

    #[test]
    fn kmeans_separated() {
        let pts = column(&[0.0, 0.0, 10.0, 10.0]);
        let c = kmeanspp(&pts, 2, &KMeansOptions::default(), 1).unwrap();
        assert_eq!(c.objective, 0.0);
        assert_eq!(c.assignments[0], c.assignments[1]);
        assert_eq!(c.assignments[2], c.assignments[3]);
        assert_ne!(c.assignments[0], c.assignments[2]);
    }

    #[test]
    fn kmeans_two_pairs() {
        // enumerating the 7 two-block partitions of {0,1,9,10} gives 1.0 as optimum
        let pts = column(&[0.0, 1.0, 9.0, 10.0]);
        let c = kmeanspp(&pts, 2, &KMeansOptions::default(), 3).unwrap();
        assert!((c.objective - 1.0).abs() < 1e-12);
        let mut cents = vec![c.centroids.get(0, 0), c.centroids.get(1, 0)];
        cents.sort_by(f64::total_cmp);
        assert_eq!(cents, vec![0.5, 9.5]);
    }

    #[test]
    fn kmeans_k_equals_n_and_errors() {
        let pts = column(&[3.0, 1.0, 4.0, 1.0, 5.0]);
        let c = kmeanspp(&pts, 5, &KMeansOptions::default(), 0).unwrap();
        assert_eq!(c.objective, 0.0);
        let mut used = [false; 5];
        c.assignments.iter().for_each(|&a| used[a as usize] = true);
        assert!(used.iter().all(|&u| u), "every bin must be used");
        assert!(matches!(
            kmeanspp(&pts, 6, &KMeansOptions::default(), 0),
            Err(SpectralError::TooManyClusters { .. })
        ));
    }

    #[test]
    fn block_embed_cases() {
        let pts = column(&[0.0, 0.0, 10.0, 10.0]);
        let c = kmeanspp(&pts, 2, &KMeansOptions::default(), 1).unwrap();
        assert_eq!(block_embed(&pts, &c).unwrap(), pts);
        let one = kmeanspp(&pts, 1, &KMeansOptions::default(), 1).unwrap();
        let e = block_embed(&pts, &one).unwrap();
        assert!((0..4).all(|i| e.get(i, 0) == 5.0));
        let wrong = RowMatrix::zeros(3, 1);
        assert!(block_embed(&wrong, &c).is_err());
    }
}
