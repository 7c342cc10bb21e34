//! Closed-form throughput, contention and overhead analysis.

pub mod contention;
pub mod estimate;
pub mod imperfect;
pub mod nonoverlap;
pub mod perfect;
pub mod report;
pub mod subsets;

pub use contention::{
    collision_prob_exhaustive, collision_prob_given_m, contend_probability,
    contenders_distribution, first_collision_prob, mac_overhead, select_window,
    select_window_for_profile, ContentionProfile,
};
pub use estimate::{estimate_overlap_gain, estimate_overlap_gain_with_count};
pub use imperfect::{sensing_access_probs, user_throughput, user_throughput_imperfect};
pub use nonoverlap::{marginal_gain_nonoverlap, user_throughput_nonoverlap};
pub use perfect::user_throughput_perfect;
pub use report::{
    analysis_error_bound, network_throughput, network_throughput_at, SensingMode, ThroughputReport,
};
