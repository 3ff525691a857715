//! Exact reference solvers, smoothness estimation and rank aggregation.

mod brute;
mod epsilon;
mod rank;

pub use brute::{brute_force_k_center, brute_force_opt, optimal_radius, ClusteringReport, BRUTE_FORCE_CAP};
pub use epsilon::{
    epsilon_ij, epsilon_pairwise, epsilon_pairwise_curves, epsilon_percentiles, lipschitz_check, lipschitz_check_curves,
    min_ratio, nearest_rank, value_ratio, EpsilonReport, DEFAULT_ALPHAS,
};
pub use rank::{average_ranks, mean_rank, incumbent_at, RankTable, RunRecord};
