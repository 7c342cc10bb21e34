//! Channel assignment algorithms.

pub mod baseline;
pub mod brute;
pub mod edges;
pub mod fair;
pub mod greedy;

pub use baseline::round_robin;
pub use brute::{brute_force_all, brute_force_optimal, Objective, Optima, DEFAULT_BRUTE_FORCE_CAP};
pub use edges::{parse_edges, read_edges, render_edges, write_edges, EdgeKind};
pub use fair::{
    algorithm3_fair, algorithm4_fair, combinations, search_potential, search_potential_traced,
    FairResult, SearchTrace,
};
pub use greedy::{
    algorithm1, algorithm1_traced, algorithm2, nonoverlap_throughputs, GreedyConfig, GreedyStats,
    OverlapResult, TieBreak,
};
