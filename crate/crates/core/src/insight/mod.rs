//! Node comparison insights: split the validated indicators into comparison,
//! grouping and unused sets, cluster the nodes, and rank same-cluster node
//! pairs by how much they differ on the comparison indicators.

mod fcmdd;
mod insights;
mod laplacian;
mod objective;
mod partition;
mod search;

pub use fcmdd::{memberships_from_costs, Clusterer, FuzzyCMedoids};
pub use insights::{extract_insights, rank_pairs, ClusterInsights, Insight, InsightResult};
pub use laplacian::{
    coefficient_of_variation, elbow_cut, laplacian_heuristic, laplacian_score, KnnGraph,
    LaplacianConfig,
};
pub use objective::{objective_score, significance, sq_distance, term_weights, Clustering};
pub use partition::{Role, ThreePartition, ROLES};
pub use search::{
    evaluate, exponential_search, laplacian_search, local_search, random_baseline,
    random_restart_search, run_strategy, SearchConfig, SearchResult, Strategy,
};
