//! Fixtures shared by the criterion benchmarks.

use maxent_core::generate;
use maxent_core::model::{self, FeatureMode, FeatureRequest, ModelSpec, ReducedProblem};
use maxent_core::{EigOptions, FeatureSpec, Grouping, KMeansOptions, SparseGraph};

/// Erdos-Renyi graph with about ten edges per node.
pub fn er_graph(n: usize, seed: u64) -> SparseGraph {
    generate::erdos_renyi_edges_per_node(n, 10.0, seed)
}

/// Degree plus blocked common-neighbor problem, ready for the optimizer.
pub fn reduced_cn(g: &SparseGraph, d: usize, k: usize) -> ReducedProblem {
    let request = [FeatureRequest { spec: FeatureSpec::cn(), mode: FeatureMode::Block { d, k } }];
    let (features, _) =
        model::build_features(g, &request, &EigOptions::default(), &KMeansOptions::default(), 0, 0).expect("features");
    let spec = ModelSpec { use_degrees: true, features, targets: None };
    model::build_reduced(g, &spec, Grouping::Reduced).expect("reduced problem")
}
