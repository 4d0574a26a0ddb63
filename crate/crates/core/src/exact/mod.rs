//! Ground truth and exact low-tree-width inference.

mod brute;
mod forest;
mod junction;
mod treewidth;

pub use brute::{
    brute_force_hop_min_marginals, brute_force_map, brute_force_min_marginal, local_minima_by_count,
    BRUTE_MAP_LIMIT, BRUTE_MARGINAL_LIMIT,
};
pub use forest::{build_junction_forest, JunctionForest};
pub use junction::{clique_potentials, junction_min, JunctionMin, MinSumJunction};
pub use treewidth::{induced_width, treewidth_upper_bound, EliminationOrder};
