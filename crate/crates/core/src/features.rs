//! Pairwise feature matrices: exact, low-rank and block-approximated.
//!
//! Supported features are common neighbors (CN = A²), Adamic–Adar (AA),
//! resource allocation (RAI = A D⁻¹ A), preferential attachment
//! (PA = d dᵀ) and nonnegative adjacency polynomials (POLY = Σ qᵢ Aⁱ).
//!
//! Low-rank factors come from one truncated eigendecomposition of the
//! sparse adjacency matrix; block features cluster the factor rows with
//! k-means++ and replace each row by its centroid, which makes the
//! implied matrix constant on every (bin, bin) block.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SparseGraph;
use crate::matrix::{PackedSym, RowMatrix};
use crate::spectral::{self, EigOptions, KMeansOptions, SpectralError};

pub const DEFAULT_EXACT_LIMIT: usize = 20_000;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("invalid feature spec: {0}")]
    InvalidSpec(String),
    #[error("{kind} is undefined for a graph with isolated node {node}")]
    IsolatedNode { kind: &'static str, node: usize },
    #[error("exact features need a dense {n}x{n} matrix, above the limit of {limit} nodes; use the block-approximated path")]
    TooLarge { n: usize, limit: usize },
    #[error("rank {d} requested for a graph with {n} nodes")]
    BadRank { d: usize, n: usize },
    #[error("factorization core is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    CoreNotPsd(f64),
    #[error("pair ({0}, {0}) is a self-pair")]
    SelfPair(usize),
    #[error("partitions cover different node counts ({0} vs {1})")]
    PartitionMismatch(usize, usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Cn,
    Aa,
    Rai,
    Pa,
    Poly,
}

impl FeatureKind {
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Cn => "cn",
            FeatureKind::Aa => "aa",
            FeatureKind::Rai => "rai",
            FeatureKind::Pa => "pa",
            FeatureKind::Poly => "poly",
        }
    }
}

impl std::str::FromStr for FeatureKind {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cn" => Ok(FeatureKind::Cn),
            "aa" => Ok(FeatureKind::Aa),
            "rai" => Ok(FeatureKind::Rai),
            "pa" => Ok(FeatureKind::Pa),
            "poly" => Ok(FeatureKind::Poly),
            other => Err(FeatureError::InvalidSpec(format!("unknown feature kind {other:?}"))),
        }
    }
}

/// Which pairwise matrix to build. `coeffs` are `q_1..q_p` of
/// `Σ q_i A^i` and only used by [`FeatureKind::Poly`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub kind: FeatureKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs: Vec<f64>,
}

impl FeatureSpec {
    pub fn new(kind: FeatureKind) -> Self {
        FeatureSpec { kind, coeffs: Vec::new() }
    }

    pub fn cn() -> Self {
        Self::new(FeatureKind::Cn)
    }

    pub fn rai() -> Self {
        Self::new(FeatureKind::Rai)
    }

    pub fn aa() -> Self {
        Self::new(FeatureKind::Aa)
    }

    pub fn pa() -> Self {
        Self::new(FeatureKind::Pa)
    }

    pub fn poly(coeffs: Vec<f64>) -> Result<Self, FeatureError> {
        let spec = FeatureSpec { kind: FeatureKind::Poly, coeffs };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.kind == FeatureKind::Poly {
            if self.coeffs.iter().any(|&q| !(q >= 0.0) || !q.is_finite()) {
                return Err(FeatureError::InvalidSpec("polynomial coefficients must be finite and nonnegative".into()));
            }
            if !self.coeffs.iter().any(|&q| q > 0.0) {
                return Err(FeatureError::InvalidSpec("polynomial needs at least one positive coefficient".into()));
            }
        }
        Ok(())
    }

    /// Polynomial coefficients `q_1..q_p` for CN and POLY.
    fn poly_coeffs(&self) -> Option<Vec<f64>> {
        match self.kind {
            FeatureKind::Cn => Some(vec![0.0, 1.0]),
            FeatureKind::Poly => Some(self.coeffs.clone()),
            _ => None,
        }
    }
}

fn poly_eval(q: &[f64], x: f64) -> f64 {
    // q[0] multiplies x^1
    q.iter().rev().fold(0.0, |acc, &c| (acc + c) * x)
}

/// Per-node weights of the `D⁻¹`-style diagonal used by RAI and AA.
fn inverse_degree_weights(g: &SparseGraph, kind: FeatureKind) -> Result<Vec<f64>, FeatureError> {
    let mut w = Vec::with_capacity(g.n());
    for i in 0..g.n() {
        let d = g.degree(i);
        w.push(match kind {
            FeatureKind::Rai => {
                if d == 0 {
                    return Err(FeatureError::IsolatedNode { kind: "RAI", node: i });
                }
                1.0 / d as f64
            }
            // degree-1 nodes are never a common neighbor of two other nodes
            _ => {
                if d >= 2 {
                    1.0 / (d as f64).ln()
                } else {
                    0.0
                }
            }
        });
    }
    Ok(w)
}

/// Dense exact feature matrix (packed symmetric). The diagonal is filled
/// with whatever the matrix formula gives but is never consumed.
pub fn exact_feature(g: &SparseGraph, spec: &FeatureSpec, exact_limit: usize) -> Result<PackedSym, FeatureError> {
    spec.validate()?;
    let n = g.n();
    if n > exact_limit {
        return Err(FeatureError::TooLarge { n, limit: exact_limit });
    }
    let mut out = PackedSym::zeros(n);
    match spec.kind {
        FeatureKind::Pa => {
            let d = g.degrees();
            for i in 0..n {
                for j in i..n {
                    out.set(i, j, (d[i] * d[j]) as f64);
                }
            }
        }
        FeatureKind::Rai | FeatureKind::Aa => {
            let w = inverse_degree_weights(g, spec.kind)?;
            add_weighted_two_paths(g, &w, 1.0, &mut out);
        }
        FeatureKind::Cn | FeatureKind::Poly => {
            let q = spec.poly_coeffs().expect("polynomial kind");
            let ones = vec![1.0; n];
            if let Some(&q1) = q.first() {
                if q1 != 0.0 {
                    for (i, j) in g.edges() {
                        out.add(i as usize, j as usize, q1);
                    }
                }
            }
            if q.len() >= 2 && q[1] != 0.0 {
                add_weighted_two_paths(g, &ones, q[1], &mut out);
            }
            if q.len() >= 3 {
                add_higher_powers(g, &q, &mut out);
            }
        }
    }
    Ok(out)
}

/// `out += scale * A diag(w) A`.
fn add_weighted_two_paths(g: &SparseGraph, w: &[f64], scale: f64, out: &mut PackedSym) {
    for k in 0..g.n() {
        if w[k] == 0.0 {
            continue;
        }
        let v = scale * w[k];
        let nb = g.neighbors(k);
        for (x, &a) in nb.iter().enumerate() {
            for &b in &nb[x..] {
                out.add(a as usize, b as usize, v);
            }
        }
    }
}

/// Adds `q_p A^p` for `p >= 3` using a dense running power.
fn add_higher_powers(g: &SparseGraph, q: &[f64], out: &mut PackedSym) {
    let n = g.n();
    // A^2 as a dense row-major matrix
    let mut power = vec![0.0; n * n];
    for k in 0..n {
        let nb = g.neighbors(k);
        for &a in nb {
            for &b in nb {
                power[a as usize * n + b as usize] += 1.0;
            }
        }
    }
    let mut next = vec![0.0; n * n];
    for &coef in q.iter().skip(2) {
        // next = power * A
        for i in 0..n {
            let row = &power[i * n..(i + 1) * n];
            let dst = &mut next[i * n..(i + 1) * n];
            for (j, d) in dst.iter_mut().enumerate() {
                *d = g.neighbors(j).iter().map(|&k| row[k as usize]).sum();
            }
        }
        std::mem::swap(&mut power, &mut next);
        if coef != 0.0 {
            for i in 0..n {
                for j in i..n {
                    out.add(i, j, coef * power[i * n + j]);
                }
            }
        }
    }
}

/// `factor · diag(signs) · factorᵀ` approximates the feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowRankFactor {
    pub factor: RowMatrix,
    pub signs: Vec<f64>,
}

impl LowRankFactor {
    pub fn rank(&self) -> usize {
        self.signs.len()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        signed_dot(self.factor.row(i), self.factor.row(j), &self.signs)
    }
}

#[inline]
fn signed_dot(a: &[f64], b: &[f64], signs: &[f64]) -> f64 {
    a.iter().zip(b).zip(signs).map(|((x, y), s)| x * y * s).sum()
}

/// Rank-`d` factor of a feature matrix built from the top eigenpairs of `A`.
///
/// For CN/POLY each eigenvalue `α` of `A` maps to `poly(α)` with the same
/// eigenvector. Because `|poly(α)| <= poly(|α|)`, the `d` largest rescaled
/// magnitudes are known once `d` of them exceed `poly(|α_l|)` for the
/// smallest computed `|α_l|`; `l` starts at `2d` and doubles until that holds.
pub fn lowrank_feature(
    g: &SparseGraph,
    spec: &FeatureSpec,
    d: usize,
    eig_opts: &EigOptions,
) -> Result<LowRankFactor, FeatureError> {
    spec.validate()?;
    let n = g.n();
    if d == 0 || d > n {
        return Err(FeatureError::BadRank { d, n });
    }
    match spec.kind {
        FeatureKind::Pa => {
            let degrees: Vec<f64> = g.degrees().into_iter().map(|x| x as f64).collect();
            Ok(LowRankFactor { factor: RowMatrix::from_vec(n, 1, degrees), signs: vec![1.0] })
        }
        FeatureKind::Cn | FeatureKind::Poly => {
            let q = spec.poly_coeffs().expect("polynomial kind");
            polynomial_factor(g, &q, d, eig_opts)
        }
        FeatureKind::Rai | FeatureKind::Aa => {
            let w = inverse_degree_weights(g, spec.kind)?;
            let eig = spectral::top_eigs(g, d, eig_opts)?;
            scaled_core_factor(&eig.vectors, &eig.values, &w)
        }
    }
}

fn polynomial_factor(g: &SparseGraph, q: &[f64], d: usize, eig_opts: &EigOptions) -> Result<LowRankFactor, FeatureError> {
    let n = g.n();
    // an even polynomial is monotone in |α|, so the top d by magnitude are
    // already certified and no extra eigenpairs are needed
    let even = q.iter().step_by(2).all(|&c| c == 0.0);
    let mut l = if even { d.min(n) } else { (2 * d).min(n) };
    loop {
        let eig = spectral::top_eigs(g, l, eig_opts)?;
        let rescaled: Vec<f64> = eig.values.iter().map(|&a| poly_eval(q, a)).collect();
        let top = rescaled.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by(|&a, &b| spectral::magnitude_order(rescaled[a], rescaled[b], top.max(1e-300)));
        let exhausted = l == n;
        let a_min = eig.values.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
        let bound = poly_eval(q, a_min);
        let certain = order.iter().filter(|&&i| rescaled[i].abs() >= bound).count();
        if exhausted || certain >= d {
            let negligible = 1e-12 * top.max(1e-300);
            let chosen: Vec<usize> = order.into_iter().take(d).filter(|&i| rescaled[i].abs() > negligible).collect();
            if chosen.len() < d {
                log::warn!("polynomial feature has only {} nonzero eigenvalues; using rank {}", chosen.len(), chosen.len());
            }
            let mut factor = RowMatrix::zeros(n, chosen.len());
            let mut signs = Vec::with_capacity(chosen.len());
            for (c, &i) in chosen.iter().enumerate() {
                let s = rescaled[i].abs().sqrt();
                for r in 0..n {
                    factor.set(r, c, eig.vectors.get(r, i) * s);
                }
                signs.push(if rescaled[i] < 0.0 { -1.0 } else { 1.0 });
            }
            log::debug!("polynomial factor: rank {} from l = {l} eigenpairs", chosen.len());
            return Ok(LowRankFactor { factor, signs });
        }
        l = (2 * l).min(n);
    }
}

/// `V (Λ Vᵀ W V Λ)^{1/2}` for `W = diag(w)`; its Gram matrix is
/// `(V Λ Vᵀ) W (V Λ Vᵀ)`.
fn scaled_core_factor(v: &RowMatrix, values: &[f64], w: &[f64]) -> Result<LowRankFactor, FeatureError> {
    let (n, d) = (v.rows(), v.cols());
    let mut core = DMatrix::<f64>::zeros(d, d);
    for r in 0..n {
        if w[r] == 0.0 {
            continue;
        }
        let row = v.row(r);
        for a in 0..d {
            let x = w[r] * row[a];
            for b in a..d {
                core[(a, b)] += x * row[b];
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            let val = core[(a, b)] * values[a] * values[b];
            core[(a, b)] = val;
            core[(b, a)] = val;
        }
    }
    let eig = SymmetricEigen::new(core);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let low = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if low < -1e-8 * top.max(1e-300) {
        return Err(FeatureError::CoreNotPsd(low));
    }
    let sqrt_vals = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let vd = v.to_dmatrix() * root;
    Ok(LowRankFactor { factor: RowMatrix::from_dmatrix(&vd), signs: vec![1.0; d] })
}

/// Dense assignment of nodes to bins `0..bin_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodePartition {
    pub assignment: Vec<u32>,
    pub bin_count: usize,
}

impl NodePartition {
    /// Relabels arbitrary bin ids densely in order of first appearance.
    pub fn from_labels<T: std::hash::Hash + Eq + Clone>(labels: &[T]) -> Self {
        let mut ids: HashMap<T, u32> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        NodePartition { assignment, bin_count: ids.len() }
    }

    pub fn identity(n: usize) -> Self {
        NodePartition { assignment: (0..n as u32).collect(), bin_count: n }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// Coarsest partition refining every input: two nodes share a bin iff
/// they share a bin in each input.
pub fn glb_partition(parts: &[&NodePartition]) -> Result<NodePartition, FeatureError> {
    let Some(first) = parts.first() else {
        return Err(FeatureError::InvalidSpec("no partitions given".into()));
    };
    let n = first.len();
    for p in parts {
        if p.len() != n {
            return Err(FeatureError::PartitionMismatch(n, p.len()));
        }
    }
    let keys: Vec<Vec<u32>> = (0..n).map(|i| parts.iter().map(|p| p.assignment[i]).collect()).collect();
    Ok(NodePartition::from_labels(&keys))
}

/// Block-constant feature: `f̄(i, j) = rows[b(i)] · diag(signs) · rows[b(j)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFeature {
    pub partition: NodePartition,
    pub bin_rows: RowMatrix,
    pub signs: Vec<f64>,
}

impl BlockFeature {
    pub fn k(&self) -> usize {
        self.partition.bin_count
    }

    pub fn bin_value(&self, a: usize, b: usize) -> f64 {
        signed_dot(self.bin_rows.row(a), self.bin_rows.row(b), &self.signs)
    }

    pub fn pair_value(&self, i: usize, j: usize) -> Result<f64, FeatureError> {
        if i == j {
            return Err(FeatureError::SelfPair(i));
        }
        let p = &self.partition.assignment;
        Ok(self.bin_value(p[i] as usize, p[j] as usize))
    }
}

/// Clusters the factor rows into `k` bins and replaces rows by centroids.
pub fn block_feature(f: &LowRankFactor, k: usize, km: &KMeansOptions, seed: u64) -> Result<BlockFeature, FeatureError> {
    let clustering = spectral::kmeanspp(&f.factor, k, km, seed)?;
    Ok(BlockFeature {
        partition: NodePartition { assignment: clustering.assignments, bin_count: k },
        bin_rows: clustering.centroids,
        signs: f.signs.clone(),
    })
}

/// PA binned by unique degree, which represents `d dᵀ` exactly.
pub fn degree_block_feature(g: &SparseGraph) -> BlockFeature {
    let degrees = g.degrees();
    let partition = NodePartition::from_labels(&degrees);
    let mut rows = vec![0.0; partition.bin_count];
    for (i, &b) in partition.assignment.iter().enumerate() {
        rows[b as usize] = degrees[i] as f64;
    }
    BlockFeature { bin_rows: RowMatrix::from_vec(rows.len(), 1, rows), partition, signs: vec![1.0] }
}

/// Either approximation of a feature matrix, for error diagnostics.
#[derive(Debug, Clone, Copy)]
pub enum Approximation<'a> {
    LowRank(&'a LowRankFactor),
    Block(&'a BlockFeature),
}

impl Approximation<'_> {
    fn value(&self, i: usize, j: usize) -> f64 {
        match self {
            Approximation::LowRank(f) => f.value(i, j),
            Approximation::Block(b) => {
                let p = &b.partition.assignment;
                b.bin_value(p[i] as usize, p[j] as usize)
            }
        }
    }
}

/// Frobenius norm of the off-diagonal difference between the exact
/// feature matrix and an approximation.
pub fn approximation_error(
    g: &SparseGraph,
    spec: &FeatureSpec,
    approx: Approximation<'_>,
    exact_limit: usize,
) -> Result<f64, FeatureError> {
    let exact = exact_feature(g, spec, exact_limit)?;
    let n = g.n();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r = exact.get(i, j) - approx.value(i, j);
            sum += 2.0 * r * r;
        }
    }
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SparseGraph {
        SparseGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn p3() -> SparseGraph {
        SparseGraph::from_edges(3, &[(0, 1), (1, 2)])
    }

    #[test]
    fn exact_small_cases() {
        let cn = exact_feature(&k3(), &FeatureSpec::cn(), 100).unwrap();
        let rai = exact_feature(&k3(), &FeatureSpec::rai(), 100).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(cn.get(i, j), 1.0);
            assert_eq!(rai.get(i, j), 0.5);
        }
        let pa = exact_feature(&p3(), &FeatureSpec::pa(), 100).unwrap();
        assert_eq!((pa.get(0, 1), pa.get(0, 2), pa.get(1, 2)), (2.0, 1.0, 2.0));
    }

    #[test]
    fn exact_errors() {
        let g = SparseGraph::from_edges(3, &[(0, 1)]);
        assert!(matches!(exact_feature(&g, &FeatureSpec::rai(), 100), Err(FeatureError::IsolatedNode { node: 2, .. })));
        assert!(matches!(exact_feature(&k3(), &FeatureSpec::cn(), 2), Err(FeatureError::TooLarge { .. })));
        assert!(FeatureSpec::poly(vec![0.0, 0.0]).is_err());
        assert!(FeatureSpec::poly(vec![1.0, -0.1]).is_err());
    }

    #[test]
    fn aa_skips_degree_one_neighbors() {
        // star: every leaf pair shares the hub (degree 4); leaves have degree 1
        let star = SparseGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let aa = exact_feature(&star, &FeatureSpec::aa(), 100).unwrap();
        assert!((aa.get(1, 2) - 1.0 / 4f64.ln()).abs() < 1e-15);
        assert_eq!(aa.get(0, 0), 0.0);
    }

    #[test]
    fn cubic_polynomial_matches_dense_power() {
        let g = crate::generate::erdos_renyi(12, 0.4, 2);
        let f = exact_feature(&g, &FeatureSpec::poly(vec![0.5, 0.0, 2.0]).unwrap(), 100).unwrap();
        let a = DMatrix::from_fn(12, 12, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
        let want = &a * 0.5 + &a * &a * &a * 2.0;
        for i in 0..12 {
            for j in 0..12 {
                assert!((f.get(i, j) - want[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lowrank_k3_cn() {
        let f = lowrank_feature(&k3(), &FeatureSpec::cn(), 1, &EigOptions::default()).unwrap();
        assert_eq!(f.signs, vec![1.0]);
        for i in 0..3 {
            assert!((f.factor.get(i, 0) - 2.0 / 3f64.sqrt()).abs() < 1e-10);
        }
        assert!((f.value(0, 1) - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn lowrank_p3_identity_polynomial_uses_negative_eigenvalue() {
        let f = lowrank_feature(&p3(), &FeatureSpec::poly(vec![1.0]).unwrap(), 2, &EigOptions::default()).unwrap();
        assert_eq!(f.signs, vec![1.0, -1.0]);
        let g = p3();
        for i in 0..3 {
            for j in 0..3 {
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                assert!((f.value(i, j) - a).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn lowrank_pa_is_degree_vector() {
        let g = SparseGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let f = lowrank_feature(&g, &FeatureSpec::pa(), 3, &EigOptions::default()).unwrap();
        assert_eq!(f.factor.column(0), vec![2.0; 4]);
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn block_k3_and_error() {
        let g = k3();
        let f = lowrank_feature(&g, &FeatureSpec::cn(), 1, &EigOptions::default()).unwrap();
        let b = block_feature(&f, 3, &KMeansOptions::default(), 0).unwrap();
        assert!((b.pair_value(0, 2).unwrap() - 4.0 / 3.0).abs() < 1e-10);
        assert!(matches!(b.pair_value(1, 1), Err(FeatureError::SelfPair(1))));
        let err = approximation_error(&g, &FeatureSpec::cn(), Approximation::Block(&b), 100).unwrap();
        assert!((err - (2.0f64 / 3.0).sqrt()).abs() < 1e-9, "{err}");
    }

    #[test]
    fn single_bin_is_constant() {
        let g = crate::datasets::karate();
        let f = lowrank_feature(&g, &FeatureSpec::rai(), 4, &EigOptions::default()).unwrap();
        let b = block_feature(&f, 1, &KMeansOptions::default(), 0).unwrap();
        let v = b.pair_value(0, 1).unwrap();
        assert!((b.pair_value(5, 30).unwrap() - v).abs() < 1e-12);
        assert!((b.pair_value(30, 5).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn glb_cases() {
        let a = NodePartition::from_labels(&[0, 0, 1, 1]);
        let b = NodePartition::from_labels(&[0, 1, 0, 1]);
        assert_eq!(glb_partition(&[&a]).unwrap(), a);
        assert_eq!(glb_partition(&[&a, &b]).unwrap().bin_count, 4);
        assert_eq!(glb_partition(&[&a, &a]).unwrap().bin_count, 2);
        let short = NodePartition::from_labels(&[0, 0, 1]);
        assert!(matches!(glb_partition(&[&a, &short]), Err(FeatureError::PartitionMismatch(4, 3))));
    }

    #[test]
    fn degree_blocks_reproduce_pa() {
        let g = crate::datasets::karate();
        let b = degree_block_feature(&g);
        assert_eq!(b.k(), 11);
        let err = approximation_error(&g, &FeatureSpec::pa(), Approximation::Block(&b), 100).unwrap();
        assert_eq!(err, 0.0);
    }
}
