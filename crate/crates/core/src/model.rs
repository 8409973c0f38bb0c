//! Maximum-entropy edge model with degree and global feature constraints.
//!
//! The model assigns every unordered node pair an independent Bernoulli
//! variable with log-odds `λ_{g(i)} + λ_{g(j)} + Σ_l γ_l f̄_l(i, j)`. Nodes
//! sharing a feature bin and a degree can share a multiplier without loss,
//! so the dual is optimized over node groups instead of nodes.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{self, BlockFeature, FeatureError, FeatureKind, FeatureSpec, NodePartition};
use crate::graph::SparseGraph;
use crate::matrix::PackedSym;
use crate::optimizer::{self, Objective, OptError, OptimizerOpts};
use crate::spectral::{EigOptions, KMeansOptions, SpectralError};

/// Multipliers are kept in `[-CAP, CAP]`; `σ(±40)` is within 5e-18 of 0 or 1.
pub const MULTIPLIER_CAP: f64 = 40.0;

/// Default cap on how far one optimizer iteration moves any multiplier.
/// Larger moves mostly land on the flat tails of the logistic, where the
/// dual is nearly linear and quasi-Newton progress stalls.
pub const MAX_LOGIT_STEP: f64 = 3.0;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Optimizer(#[from] OptError),
    #[error("feature {index} covers {got} nodes but the graph has {expected}")]
    NodeMismatch { index: usize, expected: usize, got: usize },
    #[error("model has no constraints: enable degrees or add a feature")]
    NoConstraints,
    #[error("expected {expected} parameters, got {got}")]
    ParameterLength { expected: usize, got: usize },
    #[error("parameters contain a non-finite value")]
    NonFinite,
    #[error("self pair ({0}, {0}) has no probability")]
    SelfPair(usize),
    #[error("node {node} out of range for a model over {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
}

/// A pairwise feature consumed by the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GlobalFeature {
    /// Block-constant approximation.
    Block(BlockFeature),
    /// Exact values for every pair; every node is its own bin.
    Dense(PackedSym),
}

impl GlobalFeature {
    pub fn node_count(&self) -> usize {
        match self {
            GlobalFeature::Block(b) => b.partition.len(),
            GlobalFeature::Dense(p) => p.n(),
        }
    }

    pub fn partition(&self) -> NodePartition {
        match self {
            GlobalFeature::Block(b) => b.partition.clone(),
            GlobalFeature::Dense(p) => NodePartition::identity(p.n()),
        }
    }

    /// Value between two nodes; the diagonal is not meaningful.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        match self {
            GlobalFeature::Block(b) => {
                let p = &b.partition.assignment;
                b.bin_value(p[i] as usize, p[j] as usize)
            }
            GlobalFeature::Dense(p) => p.get(i, j),
        }
    }

    fn bin_table(&self) -> PackedSym {
        match self {
            GlobalFeature::Block(b) => {
                let k = b.k();
                let mut t = PackedSym::zeros(k);
                for a in 0..k {
                    for c in a..k {
                        t.set(a, c, b.bin_value(a, c));
                    }
                }
                t
            }
            GlobalFeature::Dense(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ModelSpec {
    pub use_degrees: bool,
    pub features: Vec<GlobalFeature>,
    /// Overrides the feature targets, which otherwise are the feature
    /// totals over the observed edges.
    pub targets: Option<Vec<f64>>,
}

impl ModelSpec {
    pub fn degrees_only() -> Self {
        ModelSpec { use_degrees: true, ..Default::default() }
    }
}

/// How nodes are grouped into shared multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grouping {
    /// One multiplier per (bin, degree) class.
    #[default]
    Reduced,
    /// One multiplier per node.
    PerNode,
}

/// Block-constant values of one feature between groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    /// Values between feature bins.
    pub values: PackedSym,
    /// Feature bin of each group.
    pub group_bin: Vec<u32>,
}

impl FeatureTable {
    #[inline]
    fn get(&self, g: usize, h: usize) -> f64 {
        self.values.get(self.group_bin[g] as usize, self.group_bin[h] as usize)
    }
}

/// The dual problem over node groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedProblem {
    pub n: usize,
    pub use_degrees: bool,
    pub group_of: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Sum of member degrees per group.
    pub degree_targets: Vec<f64>,
    pub features: Vec<FeatureTable>,
    pub global_targets: Vec<f64>,
    /// Bins in the greatest lower bound of the feature partitions.
    pub glb_bins: usize,
    /// Nonzero entries of the adjacency matrix (twice the edge count).
    pub nnz: usize,
}

impl ReducedProblem {
    pub fn group_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    /// Number of optimization variables.
    pub fn dim(&self) -> usize {
        self.lambda_len() + self.feature_count()
    }

    fn lambda_len(&self) -> usize {
        if self.use_degrees {
            self.group_count()
        } else {
            0
        }
    }

    /// Upper bound on the group count: `√(2·k·nnz)` distinct positive
    /// degrees plus one zero-degree class per bin.
    pub fn group_bound(&self) -> f64 {
        (2.0 * self.glb_bins as f64 * self.nnz as f64).sqrt() + self.glb_bins as f64
    }

    /// Members of each group, in node order.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.group_count()];
        for (i, &g) in self.group_of.iter().enumerate() {
            out[g as usize].push(i as u32);
        }
        out
    }

    /// Number of unordered node pairs between groups `g <= h`.
    #[inline]
    pub fn pair_weight(&self, g: usize, h: usize) -> f64 {
        if g == h {
            let s = self.sizes[g] as f64;
            s * (s - 1.0) / 2.0
        } else {
            self.sizes[g] as f64 * self.sizes[h] as f64
        }
    }

    fn split<'a>(&self, x: &'a [f64]) -> Result<(&'a [f64], &'a [f64]), ModelError> {
        if x.len() != self.dim() {
            return Err(ModelError::ParameterLength { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        Ok(x.split_at(self.lambda_len()))
    }

    #[inline]
    fn logit(&self, lambda: &[f64], gamma: &[f64], g: usize, h: usize) -> f64 {
        let mut eta = if lambda.is_empty() { 0.0 } else { lambda[g] + lambda[h] };
        for (t, gl) in self.features.iter().zip(gamma) {
            eta += gl * t.get(g, h);
        }
        eta
    }

    /// Grouped sums over group pairs at `x = [λ; γ]`. Reduction order is
    /// fixed by group index.
    fn sums(&self, lambda: &[f64], gamma: &[f64]) -> Sums {
        const ROWS_PER_CHUNK: usize = 16;
        let gc = self.group_count();
        let m = self.feature_count();
        let off = self.lambda_len();
        let dim = self.dim();
        let chunks: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..gc.div_ceil(ROWS_PER_CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut value = 0.0;
                let mut acc = vec![0.0; gc + m];
                let mut curv = vec![0.0; dim];
                for g in c * ROWS_PER_CHUNK..((c + 1) * ROWS_PER_CHUNK).min(gc) {
                    for h in g..gc {
                        let w = self.pair_weight(g, h);
                        if w == 0.0 {
                            continue;
                        }
                        let eta = self.logit(lambda, gamma, g, h);
                        value += w * softplus(eta);
                        let s = sigmoid(eta);
                        let ws = w * s;
                        let c = ws * (1.0 - s);
                        acc[g] += ws;
                        acc[h] += ws;
                        if off > 0 {
                            if g == h {
                                curv[g] += 4.0 * c;
                            } else {
                                curv[g] += c;
                                curv[h] += c;
                            }
                        }
                        for (l, t) in self.features.iter().enumerate() {
                            let f = t.get(g, h);
                            acc[gc + l] += ws * f;
                            curv[off + l] += c * f * f;
                        }
                    }
                }
                (value, acc, curv)
            })
            .collect();
        let mut value = 0.0;
        let mut acc = vec![0.0; gc + m];
        let mut curvature = vec![0.0; dim];
        for (v, a, c) in chunks {
            value += v;
            acc.iter_mut().zip(&a).for_each(|(x, y)| *x += y);
            curvature.iter_mut().zip(&c).for_each(|(x, y)| *x += y);
        }
        let feature = acc.split_off(gc);
        Sums { value, degree: acc, feature, curvature }
    }

    fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>), ModelError> {
        let (lambda, gamma) = self.split(x)?;
        let sums = self.sums(lambda, gamma);
        let mut value = sums.value;
        let mut grad = Vec::with_capacity(self.dim());
        if self.use_degrees {
            for g in 0..self.group_count() {
                value -= lambda[g] * self.degree_targets[g];
                grad.push(sums.degree[g] - self.degree_targets[g]);
            }
        }
        for l in 0..self.feature_count() {
            value -= gamma[l] * self.global_targets[l];
            grad.push(sums.feature[l] - self.global_targets[l]);
        }
        Ok((value, grad, sums.curvature))
    }

    /// Dual objective and gradient at `x = [λ; γ]` (λ omitted without
    /// degree constraints).
    pub fn dual_value_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>), ModelError> {
        self.evaluate(x).map(|(v, g, _)| (v, g))
    }

    /// Diagonal of the dual Hessian.
    pub fn dual_hessian_diag(&self, x: &[f64]) -> Result<Vec<f64>, ModelError> {
        self.evaluate(x).map(|(_, _, d)| d)
    }

    /// Dense Hessian of the dual.
    pub fn dual_hessian(&self, x: &[f64]) -> Result<DMatrix<f64>, ModelError> {
        let (lambda, gamma) = self.split(x)?;
        let p = self.dim();
        let off = self.lambda_len();
        let m = self.feature_count();
        let mut h = DMatrix::<f64>::zeros(p, p);
        let mut f = vec![0.0; m];
        let gc = self.group_count();
        for g in 0..gc {
            for k in g..gc {
                let w = self.pair_weight(g, k);
                if w == 0.0 {
                    continue;
                }
                let eta = self.logit(lambda, gamma, g, k);
                let s = sigmoid(eta);
                let c = w * s * (1.0 - s);
                if c == 0.0 {
                    continue;
                }
                for (l, t) in self.features.iter().enumerate() {
                    f[l] = t.get(g, k);
                }
                if self.use_degrees {
                    if g == k {
                        h[(g, g)] += 4.0 * c;
                    } else {
                        h[(g, g)] += c;
                        h[(k, k)] += c;
                        h[(g, k)] += c;
                        h[(k, g)] += c;
                    }
                    let a = if g == k { 2.0 } else { 1.0 };
                    for l in 0..m {
                        let v = c * a * f[l];
                        h[(g, off + l)] += v;
                        h[(off + l, g)] += v;
                        if g != k {
                            h[(k, off + l)] += v;
                            h[(off + l, k)] += v;
                        }
                    }
                }
                for l in 0..m {
                    for r in l..m {
                        let v = c * f[l] * f[r];
                        h[(off + l, off + r)] += v;
                        if r != l {
                            h[(off + r, off + l)] += v;
                        }
                    }
                }
            }
        }
        Ok(h)
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Groups nodes and tabulates features and targets.
pub fn build_reduced(g: &SparseGraph, spec: &ModelSpec, grouping: Grouping) -> Result<ReducedProblem, ModelError> {
    let n = g.n();
    if !spec.use_degrees && spec.features.is_empty() {
        return Err(ModelError::NoConstraints);
    }
    for (index, f) in spec.features.iter().enumerate() {
        if f.node_count() != n {
            return Err(ModelError::NodeMismatch { index, expected: n, got: f.node_count() });
        }
    }
    let partitions: Vec<NodePartition> = spec.features.iter().map(GlobalFeature::partition).collect();
    let glb = if partitions.is_empty() {
        NodePartition { assignment: vec![0; n], bin_count: 1.min(n) }
    } else {
        features::glb_partition(&partitions.iter().collect::<Vec<_>>())?
    };
    let degrees = g.degrees();
    let groups = match grouping {
        Grouping::PerNode => NodePartition::identity(n),
        Grouping::Reduced if spec.use_degrees => {
            let keys: Vec<(u32, usize)> = (0..n).map(|i| (glb.assignment[i], degrees[i])).collect();
            NodePartition::from_labels(&keys)
        }
        Grouping::Reduced => glb.clone(),
    };
    let gc = groups.bin_count;
    let mut sizes = vec![0u64; gc];
    let mut degree_targets = vec![0.0; gc];
    let mut representative = vec![usize::MAX; gc];
    for i in 0..n {
        let grp = groups.assignment[i] as usize;
        sizes[grp] += 1;
        degree_targets[grp] += degrees[i] as f64;
        if representative[grp] == usize::MAX {
            representative[grp] = i;
        }
    }
    let tables: Vec<FeatureTable> = spec
        .features
        .iter()
        .zip(&partitions)
        .map(|(f, p)| FeatureTable {
            values: f.bin_table(),
            group_bin: representative.iter().map(|&r| p.assignment[r]).collect(),
        })
        .collect();
    let global_targets = match &spec.targets {
        Some(t) => {
            if t.len() != spec.features.len() {
                return Err(ModelError::ParameterLength { expected: spec.features.len(), got: t.len() });
            }
            if t.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::NonFinite);
            }
            t.clone()
        }
        None => spec
            .features
            .iter()
            .map(|f| g.edges().map(|(i, j)| f.value(i as usize, j as usize)).sum())
            .collect(),
    };
    Ok(ReducedProblem {
        n,
        use_degrees: spec.use_degrees,
        group_of: groups.assignment,
        sizes,
        degree_targets,
        features: tables,
        global_targets,
        glb_bins: glb.bin_count,
        nnz: g.nnz(),
    })
}

struct Sums {
    value: f64,
    degree: Vec<f64>,
    feature: Vec<f64>,
    curvature: Vec<f64>,
}

struct DualObjective<'a> {
    rp: &'a ReducedProblem,
    /// Hessian diagonal at the last evaluated point.
    last: Option<(Vec<f64>, Vec<f64>)>,
}

impl Objective for DualObjective<'_> {
    fn value_grad(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        match self.rp.evaluate(x) {
            Ok((v, g, diag)) => {
                grad.copy_from_slice(&g);
                self.last = Some((x.to_vec(), diag));
                v
            }
            Err(_) => f64::NAN,
        }
    }

    fn hessian(&mut self, x: &[f64]) -> Option<DMatrix<f64>> {
        self.rp.dual_hessian(x).ok()
    }

    fn hessian_diag(&mut self, x: &[f64]) -> Option<Vec<f64>> {
        match &self.last {
            Some((at, diag)) if at.as_slice() == x => Some(diag.clone()),
            _ => self.rp.dual_hessian_diag(x).ok(),
        }
    }
}

/// A fitted model. Probabilities depend only on the groups of the two
/// endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub reduced: ReducedProblem,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    pub converged: bool,
    pub grad_norm: f64,
    pub iters: usize,
    pub at_bound: usize,
    pub message: Option<String>,
    pub trace: Vec<optimizer::TraceRow>,
}

/// Anything that assigns independent edge probabilities to node pairs.
pub trait EdgeModel: Sync {
    fn node_count(&self) -> usize;

    /// Probability of the edge `{i, j}`; `i != j` is assumed.
    fn probability(&self, i: usize, j: usize) -> f64;

    /// Draws a graph with independent edges.
    fn sample(&self, seed: u64) -> SparseGraph;
}

impl FittedModel {
    /// Model with every multiplier at zero.
    pub fn zero(reduced: ReducedProblem) -> Self {
        let lambda = vec![0.0; reduced.lambda_len()];
        let gamma = vec![0.0; reduced.feature_count()];
        FittedModel {
            reduced,
            lambda,
            gamma,
            converged: false,
            grad_norm: f64::NAN,
            iters: 0,
            at_bound: 0,
            message: None,
            trace: Vec::new(),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        let mut x = self.lambda.clone();
        x.extend_from_slice(&self.gamma);
        x
    }

    #[inline]
    fn group_probability(&self, g: usize, h: usize) -> f64 {
        sigmoid(self.reduced.logit(&self.lambda, &self.gamma, g, h))
    }

    pub fn edge_probability(&self, i: usize, j: usize) -> Result<f64, ModelError> {
        let n = self.reduced.n;
        for node in [i, j] {
            if node >= n {
                return Err(ModelError::NodeOutOfRange { node, n });
            }
        }
        if i == j {
            return Err(ModelError::SelfPair(i));
        }
        Ok(self.probability(i, j))
    }

    /// Expected degree total per group and expected feature totals.
    pub fn expected_statistics(&self) -> ExpectedStatistics {
        let sums = self.reduced.sums(&self.lambda, &self.gamma);
        ExpectedStatistics { group_degree_totals: sums.degree, feature_totals: sums.feature }
    }

    /// Expected degree of every node.
    pub fn expected_degrees(&self) -> Vec<f64> {
        let stats = self.expected_statistics();
        let rp = &self.reduced;
        rp.group_of
            .iter()
            .map(|&g| stats.group_degree_totals[g as usize] / rp.sizes[g as usize] as f64)
            .collect()
    }

    /// `log P(g)` under the model, using grouped sums for the non-edges.
    pub fn log_likelihood(&self, g: &SparseGraph) -> Result<f64, ModelError> {
        let rp = &self.reduced;
        if g.n() != rp.n {
            return Err(ModelError::NodeMismatch { index: 0, expected: rp.n, got: g.n() });
        }
        let soft = rp.sums(&self.lambda, &self.gamma).value;
        let edges: f64 = g
            .edges()
            .map(|(i, j)| rp.logit(&self.lambda, &self.gamma, rp.group_of[i as usize] as usize, rp.group_of[j as usize] as usize))
            .sum();
        Ok(edges - soft)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedStatistics {
    pub group_degree_totals: Vec<f64>,
    pub feature_totals: Vec<f64>,
}

impl EdgeModel for FittedModel {
    fn node_count(&self) -> usize {
        self.reduced.n
    }

    fn probability(&self, i: usize, j: usize) -> f64 {
        let go = &self.reduced.group_of;
        self.group_probability(go[i] as usize, go[j] as usize)
    }

    fn sample(&self, seed: u64) -> SparseGraph {
        sample_grouped(self.reduced.n, &self.reduced.members(), |g, h| self.group_probability(g, h), seed)
    }
}

/// Samples a graph whose edge probabilities are constant between groups:
/// one binomial count per group pair, then uniformly placed pairs.
pub(crate) fn sample_grouped(n: usize, members: &[Vec<u32>], p: impl Fn(usize, usize) -> f64, seed: u64) -> SparseGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for g in 0..members.len() {
        for h in g..members.len() {
            let (a, b) = (&members[g], &members[h]);
            let pairs = if g == h { a.len() * a.len().saturating_sub(1) / 2 } else { a.len() * b.len() };
            if pairs == 0 {
                continue;
            }
            let prob = p(g, h).clamp(0.0, 1.0);
            let count = Binomial::new(pairs as u64, prob).expect("valid binomial").sample(&mut rng) as usize;
            if count == 0 {
                continue;
            }
            for t in index::sample(&mut rng, pairs, count) {
                if g == h {
                    let (x, y) = triangle_pair(t);
                    edges.push((a[x], a[y]));
                } else {
                    edges.push((a[t / b.len()], b[t % b.len()]));
                }
            }
        }
    }
    SparseGraph::from_edges(n, &edges)
}

/// Inverse of `t = y(y-1)/2 + x` for `x < y`.
fn triangle_pair(t: usize) -> (usize, usize) {
    let mut y = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0) as usize;
    while y * (y - 1) / 2 > t {
        y -= 1;
    }
    while (y + 1) * y / 2 <= t {
        y += 1;
    }
    (t - y * (y - 1) / 2, y)
}

/// Fits the model by minimizing the dual from zero. Groups of isolated or
/// fully connected nodes start at the multiplier cap instead.
///
/// Optimizer breakdowns are reported through `converged` and `message`
/// rather than as errors.
pub fn fit(g: &SparseGraph, spec: &ModelSpec, grouping: Grouping, opts: &OptimizerOpts) -> Result<FittedModel, ModelError> {
    let rp = build_reduced(g, spec, grouping)?;
    fit_reduced(rp, opts)
}

pub fn fit_reduced(rp: ReducedProblem, opts: &OptimizerOpts) -> Result<FittedModel, ModelError> {
    let mut opts = opts.clone();
    opts.bound = Some(opts.bound.unwrap_or(MULTIPLIER_CAP));
    opts.max_step = Some(opts.max_step.unwrap_or(MAX_LOGIT_STEP));
    let cap = opts.bound.unwrap();
    let mut x0 = vec![0.0; rp.dim()];
    if rp.use_degrees {
        // degree 0 or n-1 puts the optimum at infinity; start on the box
        let full = rp.n.saturating_sub(1) as f64;
        for (g, x) in x0.iter_mut().take(rp.group_count()).enumerate() {
            let size = rp.sizes[g] as f64;
            if rp.degree_targets[g] == 0.0 {
                *x = -cap;
            } else if rp.degree_targets[g] == size * full {
                *x = cap;
            }
        }
    }
    let res = optimizer::minimize(&mut DualObjective { rp: &rp, last: None }, &x0, &opts)?;
    if res.at_bound > 0 {
        log::warn!("{} multipliers reached the cap of {cap}; some probabilities are effectively 0 or 1", res.at_bound);
    }
    if !res.converged {
        log::warn!("fit did not converge: {}", res.message.as_deref().unwrap_or("unknown reason"));
    }
    let (lambda, gamma) = res.x.split_at(rp.lambda_len());
    Ok(FittedModel {
        lambda: lambda.to_vec(),
        gamma: gamma.to_vec(),
        converged: res.converged,
        grad_norm: res.grad_norm,
        iters: res.iters,
        at_bound: res.at_bound,
        message: res.message,
        trace: res.trace,
        reduced: rp,
    })
}

/// How a requested feature is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// Dense exact values; small graphs only.
    Exact,
    /// Rank-`d` factor clustered into `k` bins. PA ignores both and is
    /// binned by unique degree.
    Block { d: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRequest {
    pub spec: FeatureSpec,
    pub mode: FeatureMode,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub eigen: f64,
    pub kmeans: f64,
    pub exact: f64,
    pub optimize: f64,
}

impl PhaseTimes {
    pub fn total(&self) -> f64 {
        self.eigen + self.kmeans + self.exact + self.optimize
    }
}

/// Builds the model features for `g`, timing each phase.
pub fn build_features(
    g: &SparseGraph,
    requests: &[FeatureRequest],
    eig: &EigOptions,
    km: &KMeansOptions,
    exact_limit: usize,
    seed: u64,
) -> Result<(Vec<GlobalFeature>, PhaseTimes), ModelError> {
    let mut times = PhaseTimes::default();
    let mut out = Vec::with_capacity(requests.len());
    for (idx, req) in requests.iter().enumerate() {
        req.spec.validate()?;
        let feature = match (req.mode, req.spec.kind) {
            (FeatureMode::Block { .. }, FeatureKind::Pa) => GlobalFeature::Block(features::degree_block_feature(g)),
            (FeatureMode::Exact, _) => {
                let t = Instant::now();
                let f = features::exact_feature(g, &req.spec, exact_limit)?;
                times.exact += t.elapsed().as_secs_f64();
                GlobalFeature::Dense(f)
            }
            (FeatureMode::Block { d, k }, _) => {
                let t = Instant::now();
                let lr = features::lowrank_feature(g, &req.spec, d.min(g.n()), eig)?;
                times.eigen += t.elapsed().as_secs_f64();
                let t = Instant::now();
                let bf = features::block_feature(&lr, k.min(g.n()), km, seed.wrapping_add(idx as u64))?;
                times.kmeans += t.elapsed().as_secs_f64();
                GlobalFeature::Block(bf)
            }
        };
        out.push(feature);
    }
    Ok((out, times))
}
