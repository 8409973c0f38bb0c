//! Random graph generators used by benchmarks and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::SparseGraph;

/// Erdős–Rényi `G(n, p)` by geometric skipping over the pair index, so the
/// cost is proportional to the number of edges drawn. Isolated nodes are
/// kept.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> SparseGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if n >= 2 && p > 0.0 {
        if p >= 1.0 {
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    edges.push((a, b));
                }
            }
        } else {
            let log_q = (1.0 - p).ln();
            // Batagelj & Brandes: walk the strictly lower triangle row by row.
            let (mut v, mut w) = (1i64, -1i64);
            let n = n as i64;
            while v < n {
                let r: f64 = 1.0 - rng.random::<f64>();
                w += 1 + (r.ln() / log_q).floor() as i64;
                while w >= v && v < n {
                    w -= v;
                    v += 1;
                }
                if v < n {
                    edges.push((w as u32, v as u32));
                }
            }
        }
    }
    SparseGraph::from_edges(n, &edges)
}

/// `G(n, p)` with `p` chosen so the expected edge count is `avg_edges_per_node * n`.
pub fn erdos_renyi_edges_per_node(n: usize, avg_edges_per_node: f64, seed: u64) -> SparseGraph {
    let p = (2.0 * avg_edges_per_node / (n.max(2) - 1) as f64).min(1.0);
    erdos_renyi(n, p, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_count_near_expectation() {
        let g = erdos_renyi_edges_per_node(5000, 10.0, 3);
        let m = g.m() as f64;
        // sd ~ sqrt(5e4)
        assert!((m - 50_000.0).abs() < 5.0 * 224.0, "{m}");
    }

    #[test]
    fn extremes() {
        assert_eq!(erdos_renyi(10, 0.0, 1).m(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 1).m(), 45);
        assert_eq!(erdos_renyi(1, 0.5, 1).n(), 1);
    }

    #[test]
    fn deterministic() {
        assert_eq!(erdos_renyi(300, 0.05, 9), erdos_renyi(300, 0.05, 9));
    }
}
