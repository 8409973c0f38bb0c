//! Maximum-entropy random graph models for large sparse undirected graphs.
//!
//! Pairwise features (common neighbors, resource allocation, Adamic-Adar,
//! preferential attachment, adjacency polynomials) are approximated by
//! block-constant matrices built from a truncated eigendecomposition and
//! k-means. Nodes that share a bin and a degree then share a multiplier,
//! which shrinks the convex dual to a few thousand variables even for
//! graphs with millions of nodes.
//!
//! ```
//! use maxent_core::{datasets, fit, Grouping, ModelSpec, OptimizerOpts};
//!
//! let g = datasets::karate();
//! let model = fit(&g, &ModelSpec::degrees_only(), Grouping::Reduced, &OptimizerOpts::default()).unwrap();
//! assert!(model.converged);
//! let p = model.edge_probability(0, 33).unwrap();
//! assert!(p > 0.0 && p < 1.0);
//! ```

pub mod datasets;
pub mod eval;
pub mod features;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod model;
pub mod modelfile;
pub mod optimizer;
pub mod spectral;

pub use eval::{ChungLu, EvalError, GofReport, Heuristic, LpConfig, LpMethod, LpResult, Statistic};
pub use features::{BlockFeature, FeatureError, FeatureKind, FeatureSpec, LowRankFactor, NodePartition};
pub use graph::{EdgeLabel, EdgeSet, GraphError, SparseGraph};
pub use matrix::{PackedSym, RowMatrix};
pub use model::{
    build_reduced, fit, EdgeModel, FeatureMode, FeatureRequest, FittedModel, GlobalFeature, Grouping, ModelError,
    ModelSpec, PhaseTimes, ReducedProblem,
};
pub use modelfile::{ModelFile, ModelFileError};
pub use optimizer::{Method, OptResult, OptimizerOpts};
pub use spectral::{Clustering, EigOptions, EigPairs, KMeansOptions, SpectralError};
