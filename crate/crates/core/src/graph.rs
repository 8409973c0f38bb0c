//! Sparse undirected graphs, edge-list I/O and link-prediction splits.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has no edges")]
    Empty,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("assortativity undefined: endpoint degrees have zero variance")]
    UndefinedAssortativity,
    #[error("graph is disconnected ({components} components); extract the largest connected component first")]
    Disconnected { components: usize },
    #[error("cannot remove {requested} edges while staying connected (at most {available} are removable)")]
    InfeasibleFraction { requested: usize, available: usize },
    #[error("requested {requested} non-edges but only {available} exist")]
    TooManyNonEdges { requested: usize, available: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Node ids are dense `0..n`. `labels[i]` is the external id node `i` had
/// in the input (identity for generated graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    labels: Vec<u64>,
}

impl SparseGraph {
    /// Builds a graph over nodes `0..n` from an arbitrary list of pairs.
    /// Self-loops and duplicates (in either orientation) are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let labels = (0..n as u64).collect();
        Self::from_edges_labeled(labels, edges)
    }

    pub fn from_edges_labeled(labels: Vec<u64>, edges: &[(u32, u32)]) -> Self {
        let n = labels.len();
        let mut deg = vec![0usize; n];
        for &(a, b) in edges {
            assert!((a as usize) < n && (b as usize) < n, "edge endpoint out of range");
            if a != b {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(a, b) in edges {
            if a != b {
                neighbors[fill[a as usize]] = b;
                fill[a as usize] += 1;
                neighbors[fill[b as usize]] = a;
                fill[b as usize] += 1;
            }
        }
        // sort and dedup each row, then compact
        let mut compact = Vec::with_capacity(neighbors.len());
        let mut new_offsets = vec![0usize; n + 1];
        for i in 0..n {
            let row = &mut neighbors[offsets[i]..offsets[i + 1]];
            row.sort_unstable();
            let mut last = None;
            for &v in row.iter() {
                if last != Some(v) {
                    compact.push(v);
                    last = Some(v);
                }
            }
            new_offsets[i + 1] = compact.len();
        }
        compact.shrink_to_fit();
        SparseGraph { offsets: new_offsets, neighbors: compact, labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Stored nonzeros of the symmetric adjacency matrix (`2m`).
    pub fn nnz(&self) -> usize {
        self.neighbors.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// Sorted neighbor list of `i`.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    /// Map from external id to internal node index.
    pub fn label_index(&self) -> HashMap<u64, usize> {
        self.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect()
    }

    /// Undirected edges as `(i, j)` with `i < j`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(move |&&j| (j as usize) > i)
                .map(move |&j| (i as u32, j))
        })
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.neighbors(i).iter().map(|&j| x[j as usize]).sum();
        }
    }

    /// Number of common neighbors of `i` and `j` (sorted-list intersection).
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        let mut count = 0;
        for_each_common(self.neighbors(i), self.neighbors(j), |_| count += 1);
        count
    }

    /// Calls `f` on every common neighbor of `i` and `j`.
    pub fn for_each_common_neighbor(&self, i: usize, j: usize, f: impl FnMut(usize)) {
        for_each_common(self.neighbors(i), self.neighbors(j), f)
    }

    /// Connected component id of every node and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = count;
                        queue.push_back(v as usize);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().1 == 1
    }

    /// Induced subgraph on the largest connected component; labels are kept.
    pub fn largest_component(&self) -> SparseGraph {
        let (comp, count) = self.components();
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap_or(0);
        let mut map = vec![u32::MAX; self.n()];
        let mut labels = Vec::new();
        for i in 0..self.n() {
            if comp[i] == best {
                map[i] = labels.len() as u32;
                labels.push(self.labels[i]);
            }
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(a, _)| comp[a as usize] == best)
            .map(|(a, b)| (map[a as usize], map[b as usize]))
            .collect();
        SparseGraph::from_edges_labeled(labels, &edges)
    }

    /// Edge-list text with external ids, one edge per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[a as usize], self.labels[b as usize]);
        }
        out
    }
}

fn for_each_common(a: &[u32], b: &[u32], mut f: impl FnMut(usize)) {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                f(a[x] as usize);
                x += 1;
                y += 1;
            }
        }
    }
}

/// Parses whitespace-separated edge-list text. Lines starting with `#` and
/// blank lines are skipped; extra tokens after the first two are ignored.
/// Node ids are relabeled densely in order of first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<SparseGraph, GraphError> {
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut ids = [0u32; 2];
        for slot in ids.iter_mut() {
            let tok = tokens.next().ok_or_else(|| GraphError::Parse {
                line: lineno + 1,
                msg: "expected two node ids".into(),
            })?;
            let id: u64 = tok.parse().map_err(|_| GraphError::Parse {
                line: lineno + 1,
                msg: format!("invalid node id {tok:?}"),
            })?;
            *slot = *index.entry(id).or_insert_with(|| {
                labels.push(id);
                (labels.len() - 1) as u32
            });
        }
        edges.push((ids[0], ids[1]));
    }
    let g = SparseGraph::from_edges_labeled(labels, &edges);
    if g.m() == 0 {
        return Err(GraphError::Empty);
    }
    Ok(g)
}

pub fn parse_edge_list_str(text: &str) -> Result<SparseGraph, GraphError> {
    parse_edge_list(text.as_bytes())
}

/// Newman's degree assortativity: the Pearson correlation of endpoint
/// degrees over edges, each edge counted in both orientations.
pub fn assortativity_coefficient(g: &SparseGraph) -> Result<f64, GraphError> {
    if g.m() < 1 {
        return Err(GraphError::Empty);
    }
    let (mut sxy, mut sx, mut sxx) = (0.0, 0.0, 0.0);
    for (a, b) in g.edges() {
        let x = g.degree(a as usize) as f64;
        let y = g.degree(b as usize) as f64;
        sxy += x * y;
        sx += 0.5 * (x + y);
        sxx += 0.5 * (x * x + y * y);
    }
    let m = g.m() as f64;
    let mean = sx / m;
    let var = sxx / m - mean * mean;
    if var.abs() <= 1e-12 * (sxx / m).max(1.0) {
        return Err(GraphError::UndefinedAssortativity);
    }
    Ok((sxy / m - mean * mean) / var)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeLabel {
    Positive,
    Negative,
}

impl EdgeLabel {
    fn as_int(self) -> u8 {
        match self {
            EdgeLabel::Positive => 1,
            EdgeLabel::Negative => 0,
        }
    }
}

/// Unique unordered node pairs (`i < j`) sharing one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    pub pairs: Vec<(u32, u32)>,
    pub label: EdgeLabel,
}

impl EdgeSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// CSV with header `src,dst,label`, ids mapped through `g`'s labels.
    pub fn to_csv(&self, g: &SparseGraph) -> String {
        let mut out = String::from("src,dst,label\n");
        for &(a, b) in &self.pairs {
            let _ = writeln!(
                out,
                "{},{},{}",
                g.label(a as usize),
                g.label(b as usize),
                self.label.as_int()
            );
        }
        out
    }
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
        true
    }
}

/// Removes a `test_fraction` share of the edges while keeping the graph
/// connected. A random spanning tree (Kruskal over shuffled edges) is
/// protected and test edges are drawn uniformly from the remaining edges.
pub fn split_train_test(
    g: &SparseGraph,
    test_fraction: f64,
    seed: u64,
) -> Result<(SparseGraph, EdgeSet), GraphError> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(GraphError::Invalid(format!("test fraction {test_fraction} not in [0, 1)")));
    }
    let (_, components) = g.components();
    if components != 1 {
        return Err(GraphError::Disconnected { components });
    }
    let m = g.m();
    let n = g.n();
    let train_count = ((1.0 - test_fraction) * m as f64 - 1e-9).ceil().max(0.0) as usize;
    let removed = m - train_count.min(m);
    let available = m + 1 - n;
    if removed > available {
        return Err(GraphError::InfeasibleFraction { requested: removed, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    edges.shuffle(&mut rng);
    let mut uf = UnionFind::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    let mut rest = Vec::with_capacity(available);
    for e in edges {
        if uf.union(e.0, e.1) {
            tree.push(e);
        } else {
            rest.push(e);
        }
    }
    rest.shuffle(&mut rng);
    let mut test: Vec<(u32, u32)> = rest.drain(..removed).collect();
    test.sort_unstable();
    tree.extend(rest);
    let train = SparseGraph::from_edges_labeled(g.labels.clone(), &tree);
    Ok((train, EdgeSet { pairs: test, label: EdgeLabel::Positive }))
}

/// Draws `count` distinct non-edges of `g` uniformly at random.
pub fn sample_nonedges(g: &SparseGraph, count: usize, seed: u64) -> Result<EdgeSet, GraphError> {
    let n = g.n() as u64;
    let total = n * n.saturating_sub(1) / 2;
    let available = (total - g.m() as u64) as usize;
    if count > available {
        return Err(GraphError::TooManyNonEdges { requested: count, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u32, u32)>;
    if count * 3 <= available {
        let mut seen = HashSet::with_capacity(count);
        pairs = Vec::with_capacity(count);
        while pairs.len() < count {
            let a = rng.random_range(0..n) as u32;
            let b = rng.random_range(0..n) as u32;
            if a == b {
                continue;
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if g.has_edge(a as usize, b as usize) || !seen.insert((a, b)) {
                continue;
            }
            pairs.push((a, b));
        }
    } else {
        let mut all = Vec::with_capacity(available);
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if !g.has_edge(a as usize, b as usize) {
                    all.push((a, b));
                }
            }
        }
        pairs = rand::seq::index::sample(&mut rng, all.len(), count)
            .into_iter()
            .map(|k| all[k])
            .collect();
    }
    Ok(EdgeSet { pairs, label: EdgeLabel::Negative })
}
