//! Channel assignment for hardware-constrained cognitive radio networks.
//!
//! Each secondary user can transmit on at most one channel per cycle. The
//! crate covers the data model ([`model`]), the closed-form throughput and
//! contention engine ([`analytics`]), greedy, fair and exhaustive assignment
//! algorithms ([`assign`]), a cycle-level MAC simulator ([`sim`]) and an
//! experiment harness ([`experiment`]).

pub mod analytics;
pub mod assign;
pub mod error;
pub mod experiment;
pub mod model;
pub mod scenario;
pub mod set;
pub mod sim;
pub mod timing;

pub use error::{AnalysisError, AssignError, ExperimentError, FormatError, ModelError, SimError};
pub use model::{
    derive_views, Assignment, AssignmentViews, AvailabilityModel, BinaryAssignmentMatrix, Sensing,
    SensingModel,
};
pub use scenario::{parse_scenario, read_scenario, render_scenario, validate_scenario, Scenario};
pub use set::IndexSet;
pub use timing::MacTiming;
