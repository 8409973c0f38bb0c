//! Link-prediction and goodness-of-fit evaluation.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureSpec, NodePartition, DEFAULT_EXACT_LIMIT};
use crate::graph::{self, GraphError, SparseGraph};
use crate::model::{self, sample_grouped, EdgeModel, FeatureMode, FeatureRequest, Grouping, ModelError, ModelSpec};
use crate::optimizer::OptimizerOpts;
use crate::spectral::{EigOptions, KMeansOptions};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("score vectors must be nonempty")]
    EmptyScores,
    #[error("self pair ({0}, {0})")]
    SelfPair(usize),
    #[error("{0} needs at least {1} nodes")]
    TooSmall(&'static str, usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Area under the ROC curve as the Mann-Whitney statistic; ties count ½.
pub fn auc(pos: &[f64], neg: &[f64]) -> Result<f64, EvalError> {
    if pos.is_empty() || neg.is_empty() {
        return Err(EvalError::EmptyScores);
    }
    let mut neg_sorted = neg.to_vec();
    neg_sorted.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for &p in pos {
        let below = neg_sorted.partition_point(|&x| x < p);
        let not_above = neg_sorted.partition_point(|&x| x <= p);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (pos.len() as f64 * neg.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    Cn,
    Jc,
    Aa,
    Pa,
    Rai,
}

impl Heuristic {
    pub const ALL: [Heuristic; 5] = [Heuristic::Cn, Heuristic::Jc, Heuristic::Aa, Heuristic::Pa, Heuristic::Rai];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Cn => "CN",
            Heuristic::Jc => "JC",
            Heuristic::Aa => "AA",
            Heuristic::Pa => "PA",
            Heuristic::Rai => "RAI",
        }
    }
}

/// Classical neighborhood score of the pair `{i, j}`. Common neighbors of
/// degree 1 are skipped by AA.
pub fn heuristic_score(g: &SparseGraph, i: usize, j: usize, h: Heuristic) -> Result<f64, EvalError> {
    if i == j {
        return Err(EvalError::SelfPair(i));
    }
    let score = match h {
        Heuristic::Cn => g.common_neighbors(i, j) as f64,
        Heuristic::Jc => {
            let common = g.common_neighbors(i, j);
            let union = g.degree(i) + g.degree(j) - common;
            if union == 0 {
                0.0
            } else {
                common as f64 / union as f64
            }
        }
        Heuristic::Aa => {
            let mut s = 0.0;
            g.for_each_common_neighbor(i, j, |k| {
                let d = g.degree(k);
                if d >= 2 {
                    s += 1.0 / (d as f64).ln();
                }
            });
            s
        }
        Heuristic::Pa => (g.degree(i) * g.degree(j)) as f64,
        Heuristic::Rai => {
            let mut s = 0.0;
            g.for_each_common_neighbor(i, j, |k| s += 1.0 / g.degree(k) as f64);
            s
        }
    };
    Ok(score)
}

/// Independent edges with `p_ij = min(1, d_i d_j / 2m)`.
#[derive(Debug, Clone)]
pub struct ChungLu {
    degrees: Vec<usize>,
    total: f64,
    by_degree: NodePartition,
    class_degree: Vec<usize>,
}

impl ChungLu {
    pub fn new(g: &SparseGraph) -> Result<Self, EvalError> {
        if g.m() == 0 {
            return Err(EvalError::NoEdges);
        }
        let degrees = g.degrees();
        let by_degree = NodePartition::from_labels(&degrees);
        let mut class_degree = vec![0; by_degree.bin_count];
        for (i, &c) in by_degree.assignment.iter().enumerate() {
            class_degree[c as usize] = degrees[i];
        }
        Ok(ChungLu { degrees, total: g.nnz() as f64, by_degree, class_degree })
    }

    fn degree_probability(&self, a: usize, b: usize) -> f64 {
        ((a * b) as f64 / self.total).min(1.0)
    }

    pub fn edge_probability(&self, i: usize, j: usize) -> Result<f64, EvalError> {
        if i == j {
            return Err(EvalError::SelfPair(i));
        }
        Ok(self.probability(i, j))
    }
}

impl EdgeModel for ChungLu {
    fn node_count(&self) -> usize {
        self.degrees.len()
    }

    fn probability(&self, i: usize, j: usize) -> f64 {
        self.degree_probability(self.degrees[i], self.degrees[j])
    }

    fn sample(&self, seed: u64) -> SparseGraph {
        let mut members = vec![Vec::new(); self.by_degree.bin_count];
        for (i, &c) in self.by_degree.assignment.iter().enumerate() {
            members[c as usize].push(i as u32);
        }
        let cd = &self.class_degree;
        sample_grouped(self.degrees.len(), &members, |a, b| self.degree_probability(cd[a], cd[b]), seed)
    }
}

/// A category of a graph statistic histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Count(usize),
    /// Unreachable pairs in the geodesic distribution.
    Inf,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Count(c) => write!(f, "{c}"),
            Category::Inf => f.write_str("Inf"),
        }
    }
}

pub type Distribution = BTreeMap<Category, f64>;

fn normalize(counts: &[u64], total: f64) -> Distribution {
    counts
        .iter()
        .enumerate()
        .map(|(c, &v)| (Category::Count(c), v as f64 / total))
        .collect()
}

/// Shortest-path distances over all unordered pairs, via BFS from every
/// node. Distances beyond the diameter are absent rather than zero.
pub fn geodesic_distribution(g: &SparseGraph) -> Result<Distribution, EvalError> {
    let n = g.n();
    if n < 2 {
        return Err(EvalError::TooSmall("geodesic distribution", 2));
    }
    let per_source: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), s| {
                dist.iter_mut().for_each(|d| *d = u32::MAX);
                let mut hist = vec![0u64; 1];
                dist[s] = 0;
                queue.push_back(s as u32);
                while let Some(u) = queue.pop_front() {
                    let du = dist[u as usize];
                    for &v in g.neighbors(u as usize) {
                        if dist[v as usize] == u32::MAX {
                            let dv = du + 1;
                            dist[v as usize] = dv;
                            queue.push_back(v);
                            if v as usize > s {
                                if hist.len() <= dv as usize {
                                    hist.resize(dv as usize + 1, 0);
                                }
                                hist[dv as usize] += 1;
                            }
                        }
                    }
                }
                hist
            },
        )
        .collect();
    let mut hist = vec![0u64; 1];
    for h in per_source {
        if h.len() > hist.len() {
            hist.resize(h.len(), 0);
        }
        hist.iter_mut().zip(&h).for_each(|(a, b)| *a += b);
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let reached: u64 = hist.iter().sum();
    let total = pairs as f64;
    let mut out: Distribution = hist
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, &v)| (Category::Count(c), v as f64 / total))
        .collect();
    if reached < pairs {
        out.insert(Category::Inf, (pairs - reached) as f64 / total);
    }
    Ok(out)
}

/// Triangle count by merging sorted neighbor lists over each edge.
pub fn triangle_count(g: &SparseGraph) -> u64 {
    (0..g.n())
        .into_par_iter()
        .map(|i| {
            let ni = g.neighbors(i);
            let mut t = 0u64;
            for &j in ni.iter().filter(|&&j| j as usize > i) {
                let nj = g.neighbors(j as usize);
                // common neighbors k > j
                let (mut a, mut b) = (ni.partition_point(|&x| x <= j), nj.partition_point(|&x| x <= j));
                while a < ni.len() && b < nj.len() {
                    match ni[a].cmp(&nj[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            t += 1;
                            a += 1;
                            b += 1;
                        }
                    }
                }
            }
            t
        })
        .sum()
}

/// Raw triad counts `[0, 1, 2, 3 edges]` from degrees and triangles.
pub fn triad_counts(g: &SparseGraph) -> Result<[u64; 4], EvalError> {
    let n = g.n() as u64;
    if n < 3 {
        return Err(EvalError::TooSmall("triad census", 3));
    }
    let t3 = triangle_count(g);
    let wedges: u64 = g.degrees().iter().map(|&d| (d as u64) * (d as u64).saturating_sub(1) / 2).sum();
    let t2 = wedges - 3 * t3;
    let t1 = g.m() as u64 * (n - 2) - 2 * t2 - 3 * t3;
    let all = n * (n - 1) * (n - 2) / 6;
    Ok([all - t1 - t2 - t3, t1, t2, t3])
}

/// Distribution of edge counts among all node triples.
pub fn triad_census(g: &SparseGraph) -> Result<Distribution, EvalError> {
    let counts = triad_counts(g)?;
    let total: u64 = counts.iter().sum();
    Ok(normalize(&counts, total as f64))
}

/// Distribution over edges of the number of shared partners of the
/// endpoints.
pub fn edgewise_shared_partners(g: &SparseGraph) -> Result<Distribution, EvalError> {
    if g.m() == 0 {
        return Err(EvalError::NoEdges);
    }
    let mut hist = vec![0u64; 1];
    for (i, j) in g.edges() {
        let c = g.common_neighbors(i as usize, j as usize);
        if hist.len() <= c {
            hist.resize(c + 1, 0);
        }
        hist[c] += 1;
    }
    Ok(normalize(&hist, g.m() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    Geodesic,
    Triad,
    Esp,
}

impl Statistic {
    pub const ALL: [Statistic; 3] = [Statistic::Geodesic, Statistic::Triad, Statistic::Esp];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Geodesic => "geodesic",
            Statistic::Triad => "triad",
            Statistic::Esp => "esp",
        }
    }

    pub fn compute(self, g: &SparseGraph) -> Result<Distribution, EvalError> {
        match self {
            Statistic::Geodesic => geodesic_distribution(g),
            Statistic::Triad => triad_census(g),
            // an empty sample has no shared-partner distribution
            Statistic::Esp if g.m() == 0 => Ok(Distribution::new()),
            Statistic::Esp => edgewise_shared_partners(g),
        }
    }
}

/// Observed distribution of one statistic against sampled graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GofReport {
    pub statistic: Statistic,
    pub categories: Vec<Category>,
    pub observed: Vec<f64>,
    /// `samples[s][c]`: probability of category `c` in sample `s`.
    pub samples: Vec<Vec<f64>>,
    pub band_low: Vec<f64>,
    pub band_high: Vec<f64>,
    pub sample_mean: Vec<f64>,
}

impl GofReport {
    fn new(statistic: Statistic, observed: &Distribution, samples: &[Distribution]) -> Self {
        let mut keys: Vec<Category> = observed.keys().copied().collect();
        for s in samples {
            keys.extend(s.keys().copied());
        }
        keys.sort();
        keys.dedup();
        let lookup = |d: &Distribution, c: &Category| d.get(c).copied().unwrap_or(0.0);
        let obs: Vec<f64> = keys.iter().map(|c| lookup(observed, c)).collect();
        let per_sample: Vec<Vec<f64>> = samples.iter().map(|d| keys.iter().map(|c| lookup(d, c)).collect()).collect();
        let mut band_low = Vec::with_capacity(keys.len());
        let mut band_high = Vec::with_capacity(keys.len());
        let mut mean = Vec::with_capacity(keys.len());
        for c in 0..keys.len() {
            let mut col: Vec<f64> = per_sample.iter().map(|s| s[c]).collect();
            col.sort_by(f64::total_cmp);
            band_low.push(nearest_rank(&col, 5.0));
            band_high.push(nearest_rank(&col, 95.0));
            mean.push(col.iter().sum::<f64>() / col.len() as f64);
        }
        GofReport { statistic, categories: keys, observed: obs, samples: per_sample, band_low, band_high, sample_mean: mean }
    }

    /// Whether category `c` lies inside its band.
    pub fn inside(&self, c: usize) -> bool {
        self.band_low[c] <= self.observed[c] && self.observed[c] <= self.band_high[c]
    }

    pub fn inside_fraction(&self) -> f64 {
        if self.categories.is_empty() {
            return 1.0;
        }
        (0..self.categories.len()).filter(|&c| self.inside(c)).count() as f64 / self.categories.len() as f64
    }

    /// Rows `statistic,category,observed,band_low,band_high,sample_mean`
    /// without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for c in 0..self.categories.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.statistic.name(),
                self.categories[c],
                self.observed[c],
                self.band_low[c],
                self.band_high[c],
                self.sample_mean[c]
            ));
        }
        out
    }
}

pub const GOF_CSV_HEADER: &str = "statistic,category,observed,band_low,band_high,sample_mean";

/// CSV of several reports with a single header.
pub fn gof_csv(reports: &[GofReport]) -> String {
    let mut out = format!("{GOF_CSV_HEADER}\n");
    for r in reports {
        out.push_str(&r.csv_rows());
    }
    out
}

/// Nearest-rank percentile of sorted data; two samples give min and max
/// for the 5th and 95th percentiles.
fn nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Samples `n_samples` graphs from `model` and compares each statistic of
/// `observed` against the 5th to 95th percentile band of the samples.
pub fn gof_run(
    model: &dyn EdgeModel,
    observed: &SparseGraph,
    statistics: &[Statistic],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<GofReport>, EvalError> {
    if n_samples < 2 {
        return Err(EvalError::TooFewSamples(n_samples));
    }
    let sampled: Vec<Vec<Distribution>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|s| {
            let g = model.sample(seed.wrapping_add(s));
            statistics.iter().map(|st| st.compute(&g)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    statistics
        .iter()
        .enumerate()
        .map(|(idx, &st)| {
            let obs = st.compute(observed)?;
            let samples: Vec<Distribution> = sampled.iter().map(|s| s[idx].clone()).collect();
            Ok(GofReport::new(st, &obs, &samples))
        })
        .collect()
}

/// A link predictor compared by [`lp_pipeline`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LpMethod {
    Heuristic(Heuristic),
    MaxEnt { name: String, use_degrees: bool, features: Vec<FeatureRequest> },
    /// Scores every held-out edge 1 and every non-edge 0.
    Oracle,
    /// Uniform random scores.
    Random,
}

impl LpMethod {
    pub fn name(&self) -> String {
        match self {
            LpMethod::Heuristic(h) => h.name().to_string(),
            LpMethod::MaxEnt { name, .. } => name.clone(),
            LpMethod::Oracle => "Oracle".into(),
            LpMethod::Random => "Random".into(),
        }
    }

    /// Degrees plus exact CN, RAI and PA.
    pub fn maxent_full() -> Self {
        Self::maxent_cn_rai_pa("MaxEnt (full)".into(), FeatureMode::Exact, FeatureMode::Exact)
    }

    /// Degrees plus rank-`d`, `k`-bin CN and RAI and degree-binned PA.
    pub fn maxent_blocked(d: usize, k: usize) -> Self {
        let block = FeatureMode::Block { d, k };
        Self::maxent_cn_rai_pa(format!("MaxEnt (k={k})"), block, block)
    }

    fn maxent_cn_rai_pa(name: String, mode: FeatureMode, pa: FeatureMode) -> Self {
        let features = vec![
            FeatureRequest { spec: FeatureSpec::cn(), mode },
            FeatureRequest { spec: FeatureSpec::rai(), mode },
            FeatureRequest { spec: FeatureSpec::pa(), mode: pa },
        ];
        LpMethod::MaxEnt { name, use_degrees: true, features }
    }
}

#[derive(Debug, Clone)]
pub struct LpConfig {
    pub test_fraction: f64,
    /// Held out from the training graph and left unused.
    pub validation_fraction: Option<f64>,
    pub eig: EigOptions,
    pub kmeans: KMeansOptions,
    pub optimizer: OptimizerOpts,
    pub exact_limit: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            test_fraction: 0.5,
            validation_fraction: None,
            eig: EigOptions::default(),
            kmeans: KMeansOptions::default(),
            optimizer: OptimizerOpts::default(),
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub method: String,
    pub seed: u64,
    pub auc: f64,
    pub seconds: f64,
    /// `false` when a MaxEnt fit stopped before reaching the tolerance.
    pub converged: bool,
}

pub const LP_CSV_HEADER: &str = "method,seed,auc,seconds";

pub fn lp_csv(results: &[LpResult]) -> String {
    let mut out = format!("{LP_CSV_HEADER}\n");
    for r in results {
        out.push_str(&format!("{},{},{},{}\n", r.method, r.seed, r.auc, r.seconds));
    }
    out
}

/// One link-prediction repeat: split `g`, score held-out edges and an equal
/// number of non-edges of `g` with every method, report AUCs.
pub fn lp_pipeline(g: &SparseGraph, methods: &[LpMethod], config: &LpConfig, seed: u64) -> Result<Vec<LpResult>, EvalError> {
    let (mut train, test_pos) = graph::split_train_test(g, config.test_fraction, seed)?;
    if let Some(f) = config.validation_fraction {
        train = graph::split_train_test(&train, f, seed.wrapping_add(2))?.0;
    }
    let test_neg = graph::sample_nonedges(g, test_pos.len(), seed.wrapping_add(1))?;
    let mut out = Vec::with_capacity(methods.len());
    for method in methods {
        let start = Instant::now();
        let mut converged = true;
        let (pos, neg): (Vec<f64>, Vec<f64>) = match method {
            LpMethod::Heuristic(h) => {
                let score = |&(i, j): &(u32, u32)| heuristic_score(&train, i as usize, j as usize, *h);
                (
                    test_pos.pairs.iter().map(score).collect::<Result<_, _>>()?,
                    test_neg.pairs.iter().map(score).collect::<Result<_, _>>()?,
                )
            }
            LpMethod::Oracle => (vec![1.0; test_pos.len()], vec![0.0; test_neg.len()]),
            LpMethod::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
                let pos = (0..test_pos.len()).map(|_| rng.random::<f64>()).collect();
                let neg = (0..test_neg.len()).map(|_| rng.random::<f64>()).collect();
                (pos, neg)
            }
            LpMethod::MaxEnt { use_degrees, features, .. } => {
                let (feats, _) = model::build_features(&train, features, &config.eig, &config.kmeans, config.exact_limit, seed)?;
                let spec = ModelSpec { use_degrees: *use_degrees, features: feats, targets: None };
                let fitted = model::fit(&train, &spec, Grouping::Reduced, &config.optimizer)?;
                converged = fitted.converged;
                let score = |&(i, j): &(u32, u32)| fitted.probability(i as usize, j as usize);
                (test_pos.pairs.iter().map(score).collect(), test_neg.pairs.iter().map(score).collect())
            }
        };
        let auc = auc(&pos, &neg)?;
        out.push(LpResult { method: method.name(), seed, auc, seconds: start.elapsed().as_secs_f64(), converged });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::erdos_renyi;

    fn graph(n: usize, edges: &[(u32, u32)]) -> SparseGraph {
        SparseGraph::from_edges(n, edges)
    }

    fn k3() -> SparseGraph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn p3() -> SparseGraph {
        graph(3, &[(0, 1), (1, 2)])
    }

    fn star4() -> SparseGraph {
        graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    fn dist(pairs: &[(Category, f64)]) -> Distribution {
        pairs.iter().copied().collect()
    }

    fn close(a: &Distribution, b: &Distribution) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|((ka, va), (kb, vb))| ka == kb && (va - vb).abs() < 1e-12)
    }

    use Category::{Count as C, Inf};

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[2.0, 3.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(auc(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert_eq!(auc(&[1.0, 3.0], &[2.0, 4.0]).unwrap(), 0.25);
        assert!(matches!(auc(&[], &[1.0]), Err(EvalError::EmptyScores)));
    }

    #[test]
    fn auc_matches_pair_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let pos: Vec<f64> = (0..30).map(|_| rng.random_range(0..6) as f64).collect();
            let neg: Vec<f64> = (0..25).map(|_| rng.random_range(0..6) as f64).collect();
            let mut brute = 0.0;
            for p in &pos {
                for q in &neg {
                    brute += if p > q { 1.0 } else if p == q { 0.5 } else { 0.0 };
                }
            }
            brute /= (pos.len() * neg.len()) as f64;
            assert!((auc(&pos, &neg).unwrap() - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn heuristic_examples() {
        let g = k3();
        assert_eq!(heuristic_score(&g, 0, 1, Heuristic::Cn).unwrap(), 1.0);
        assert_eq!(heuristic_score(&g, 0, 1, Heuristic::Rai).unwrap(), 0.5);
        assert_eq!(heuristic_score(&g, 0, 1, Heuristic::Pa).unwrap(), 4.0);
        assert!((heuristic_score(&g, 0, 1, Heuristic::Jc).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let s = star4();
        assert_eq!(heuristic_score(&s, 1, 2, Heuristic::Cn).unwrap(), 1.0);
        assert_eq!(heuristic_score(&s, 1, 2, Heuristic::Rai).unwrap(), 0.25);
        assert!((heuristic_score(&s, 1, 2, Heuristic::Aa).unwrap() - 1.0 / 4f64.ln()).abs() < 1e-15);
        let two = graph(4, &[(0, 1), (2, 3)]);
        for h in [Heuristic::Cn, Heuristic::Aa, Heuristic::Rai] {
            assert_eq!(heuristic_score(&two, 0, 2, h).unwrap(), 0.0);
        }
        assert!(matches!(heuristic_score(&g, 1, 1, Heuristic::Cn), Err(EvalError::SelfPair(1))));
    }

    #[test]
    fn chung_lu_examples() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let cl = ChungLu::new(&c4).unwrap();
        assert_eq!(cl.edge_probability(0, 2).unwrap(), 0.5);
        let cl = ChungLu::new(&star4()).unwrap();
        assert_eq!(cl.edge_probability(0, 3).unwrap(), 0.5);
        assert_eq!(cl.edge_probability(1, 3).unwrap(), 1.0 / 8.0);
        // two hubs of degree 10 and 2m = 50
        let mut edges: Vec<(u32, u32)> = (2..12).map(|v| (0, v)).chain((12..22).map(|v| (1, v))).collect();
        edges.extend((0..5).map(|e| (22 + 2 * e, 23 + 2 * e)));
        let g = graph(32, &edges);
        assert_eq!(g.nnz(), 50);
        assert_eq!(ChungLu::new(&g).unwrap().edge_probability(0, 1).unwrap(), 1.0);
    }

    #[test]
    fn geodesic_examples() {
        assert!(close(&geodesic_distribution(&k3()).unwrap(), &dist(&[(C(1), 1.0)])));
        assert!(close(&geodesic_distribution(&p3()).unwrap(), &dist(&[(C(1), 2.0 / 3.0), (C(2), 1.0 / 3.0)])));
        let two = graph(4, &[(0, 1), (2, 3)]);
        assert!(close(&geodesic_distribution(&two).unwrap(), &dist(&[(C(1), 2.0 / 6.0), (Inf, 4.0 / 6.0)])));
    }

    #[test]
    fn triad_examples() {
        assert!(close(&triad_census(&k3()).unwrap(), &normalize(&[0, 0, 0, 1], 1.0)));
        assert!(close(&triad_census(&p3()).unwrap(), &normalize(&[0, 0, 1, 0], 1.0)));
        // leaf-only triples are empty
        assert!(close(&triad_census(&star4()).unwrap(), &normalize(&[4, 0, 6, 0], 10.0)));
        assert!(matches!(triad_census(&graph(2, &[(0, 1)])), Err(EvalError::TooSmall(..))));
    }

    #[test]
    fn triad_counts_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.random_range(3..=12);
            let g = erdos_renyi(n, rng.random_range(0.0..1.0), rng.random());
            let mut brute = [0u64; 4];
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let e = g.has_edge(a, b) as usize + g.has_edge(a, c) as usize + g.has_edge(b, c) as usize;
                        brute[e] += 1;
                    }
                }
            }
            assert_eq!(triad_counts(&g).unwrap(), brute);
        }
    }

    #[test]
    fn esp_examples() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(close(&edgewise_shared_partners(&k3()).unwrap(), &dist(&[(C(0), 0.0), (C(1), 1.0)])));
        assert!(close(&edgewise_shared_partners(&p3()).unwrap(), &dist(&[(C(0), 1.0)])));
        assert_eq!(edgewise_shared_partners(&k4).unwrap()[&C(2)], 1.0);
    }

    #[test]
    fn distributions_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = erdos_renyi(rng.random_range(3..40), 0.15, rng.random());
            for st in Statistic::ALL {
                let d = st.compute(&g).unwrap();
                if g.m() > 0 || st != Statistic::Esp {
                    assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-9, "{st:?}");
                }
            }
        }
    }

    #[test]
    fn two_samples_give_the_envelope() {
        let g = erdos_renyi(30, 0.2, 1);
        let cl = ChungLu::new(&g).unwrap();
        let reports = gof_run(&cl, &g, &Statistic::ALL, 2, 9).unwrap();
        for r in &reports {
            for c in 0..r.categories.len() {
                let (a, b) = (r.samples[0][c], r.samples[1][c]);
                assert_eq!(r.band_low[c], a.min(b));
                assert_eq!(r.band_high[c], a.max(b));
            }
        }
        assert!(gof_csv(&reports).starts_with(GOF_CSV_HEADER));
        assert!(matches!(gof_run(&cl, &g, &Statistic::ALL, 1, 0), Err(EvalError::TooFewSamples(1))));
    }

    #[test]
    fn oracle_and_random_scorers() {
        let g = erdos_renyi(200, 0.05, 3).largest_component();
        let res = lp_pipeline(&g, &[LpMethod::Oracle, LpMethod::Random], &LpConfig::default(), 5).unwrap();
        assert_eq!(res[0].auc, 1.0);
        assert!((res[1].auc - 0.5).abs() < 0.1);
        assert!(lp_csv(&res).starts_with("method,seed,auc,seconds\n"));
    }
}
