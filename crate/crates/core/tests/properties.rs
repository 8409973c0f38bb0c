use std::collections::BTreeSet;

use maxent_core::eval::auc;
use maxent_core::graph::split_train_test;
use maxent_core::spectral::lloyd;
use maxent_core::{fit, Grouping, ModelSpec, OptimizerOpts, RowMatrix, SparseGraph};
use proptest::prelude::*;

fn pairs(n: u32, max: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0..n, 0..n), 0..max)
}

/// Plain Lloyd: nearest centroid with ties to the lower index, then means.
fn naive_lloyd(points: &RowMatrix, seeds: &[usize], iters: usize) -> Option<Vec<u32>> {
    let (n, d, k) = (points.rows(), points.cols(), seeds.len());
    let mut cents: Vec<Vec<f64>> = seeds.iter().map(|&s| points.row(s).to_vec()).collect();
    let nearest = |cents: &[Vec<f64>], p: &[f64]| {
        let dist = |c: &Vec<f64>| c.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        (0..k).fold(0, |best, c| if dist(&cents[c]) < dist(&cents[best]) { c } else { best }) as u32
    };
    let mut assign: Vec<u32> = (0..n).map(|i| nearest(&cents, points.row(i))).collect();
    for _ in 0..iters {
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (i, &a) in assign.iter().enumerate() {
            counts[a as usize] += 1;
            sums[a as usize].iter_mut().zip(points.row(i)).for_each(|(s, x)| *s += x);
        }
        if counts.contains(&0) {
            return None;
        }
        for c in 0..k {
            cents[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
        }
        let next: Vec<u32> = (0..n).map(|i| nearest(&cents, points.row(i))).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    Some(assign)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_construction_is_canonical(edges in pairs(30, 120)) {
        let g = SparseGraph::from_edges(30, &edges);
        let unique: BTreeSet<(u32, u32)> =
            edges.iter().filter(|(a, b)| a != b).map(|&(a, b)| (a.min(b), a.max(b))).collect();
        prop_assert_eq!(g.m(), unique.len());
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
        prop_assert_eq!(g.edges().collect::<BTreeSet<_>>(), unique.clone());
        for &(a, b) in &unique {
            prop_assert!(g.has_edge(a as usize, b as usize) && g.has_edge(b as usize, a as usize));
        }
    }

    #[test]
    fn auc_is_antisymmetric(pos in prop::collection::vec(-5i32..5, 1..20), neg in prop::collection::vec(-5i32..5, 1..20)) {
        let pos: Vec<f64> = pos.into_iter().map(f64::from).collect();
        let neg: Vec<f64> = neg.into_iter().map(f64::from).collect();
        let a = auc(&pos, &neg).unwrap();
        let b = auc(&neg, &pos).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_keeps_connectivity(seed in 0u64..1000, fraction in 0.0f64..0.4) {
        let g = maxent_core::generate::erdos_renyi(40, 0.2, seed).largest_component();
        prop_assume!(g.n() > 2);
        if let Ok((train, test)) = split_train_test(&g, fraction, seed) {
            prop_assert!(train.is_connected());
            prop_assert_eq!(train.m() + test.len(), g.m());
            for &(a, b) in &test.pairs {
                prop_assert!(g.has_edge(a as usize, b as usize));
                prop_assert!(!train.has_edge(a as usize, b as usize));
            }
        }
    }

    #[test]
    fn lloyd_matches_plain_iteration(data in prop::collection::vec(-10.0f64..10.0, 60..240), k in 2usize..6) {
        let d = 3;
        let n = data.len() / d;
        let points = RowMatrix::from_vec(n, d, data[..n * d].to_vec());
        let seeds: Vec<usize> = (0..k).map(|c| c * n / k).collect();
        let (clustering, trace) = lloyd(&points, &seeds, 50);
        for w in trace.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
        }
        if let Some(expected) = naive_lloyd(&points, &seeds, 50) {
            prop_assert_eq!(clustering.assignments, expected);
        }
    }

    #[test]
    fn degree_fit_matches_degrees(seed in 0u64..1000) {
        let g = maxent_core::generate::erdos_renyi(25, 0.25, seed);
        let model = fit(&g, &ModelSpec::degrees_only(), Grouping::Reduced, &OptimizerOpts::default()).unwrap();
        prop_assert!(model.converged);
        for (i, e) in model.expected_degrees().iter().enumerate() {
            let d = g.degree(i) as f64;
            prop_assert!((e - d).abs() < 1e-2, "node {} expected {} observed {}", i, e, d);
        }
        for j in 1..g.n() {
            let p = model.edge_probability(0, j).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
