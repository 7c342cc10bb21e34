//! Error types. Indices in messages are 1-based, matching the external formats.

use thiserror::Error;

/// A scenario, assignment or timing block violates one of its invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what}: dimension mismatch, expected {expected_rows}x{expected_cols}, found {found_rows}x{found_cols}")]
    DimensionMismatch {
        what: &'static str,
        expected_rows: usize,
        expected_cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("{what}: probability out of range at ({user},{channel}): {value}")]
    ProbabilityOutOfRange {
        what: &'static str,
        user: usize,
        channel: usize,
        value: f64,
    },
    #[error("network must have at least one user and one channel (got {users} users, {channels} channels)")]
    EmptyNetwork { users: usize, channels: usize },
    #[error("at most {limit} users and {limit} channels are supported (got {users} users, {channels} channels)")]
    TooLarge {
        users: usize,
        channels: usize,
        limit: usize,
    },
    #[error("assignment: channel {channel} of user {user} is out of range 1..={channels}")]
    ChannelOutOfRange {
        user: usize,
        channel: usize,
        channels: usize,
    },
    #[error("assignment: user {user} is out of range 1..={users}")]
    UserOutOfRange { user: usize, users: usize },
    #[error("assignment: exclusive-set overlap, channel {channel} is exclusive to both user {first} and user {second}")]
    ExclusiveOverlap {
        channel: usize,
        first: usize,
        second: usize,
    },
    #[error("assignment: channel {channel} is both exclusive and shared for user {user}")]
    ExclusiveAndShared { user: usize, channel: usize },
    #[error("assignment: shared-channel-in-exclusive-set conflict, channel {channel} is exclusive to user {owner} but shared by user {sharer}")]
    SharedConflict {
        channel: usize,
        owner: usize,
        sharer: usize,
    },
    #[error("assignment: shared channel {channel} has a single sharer (user {user}); shared channels need at least two")]
    LoneSharer { channel: usize, user: usize },
    #[error("timing: {0}")]
    Timing(String),
    #[error("generator: {0}")]
    Generator(String),
}

/// Failures of the closed-form engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("contention window must be at least {min} (got {window})")]
    InvalidWindow { window: u32, min: u32 },
    #[error("window cap exceeded: no W <= {max_window} reaches first-collision probability {target} (P_c({max_window}) = {reached})")]
    WindowCapExceeded {
        max_window: u32,
        target: f64,
        reached: f64,
    },
    #[error("MAC overhead {overhead} >= 1 at W = {window}: cycle too short")]
    OverheadTooLarge { window: u32, overhead: f64 },
    #[error("channel {channel} is already held by user {user}")]
    ChannelAlreadyHeld { user: usize, channel: usize },
    #[error("overhead must lie in [0, 1] (got {0})")]
    InvalidOverhead(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failures of the assignment algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssignError {
    #[error("brute-force search limited to M*N <= {cap} (got {users}*{channels} = {})", users * channels)]
    CapExceeded {
        users: usize,
        channels: usize,
        cap: usize,
    },
    #[error("brute-force search found no feasible assignment")]
    NoFeasibleAssignment,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors reading scenario files, assignment edge lists and experiment specs.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("serialization error: {0}")]
    TomlSer(#[from] toml::ser::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Failures of the Monte Carlo simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failures of the experiment harness.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Assign(#[from] AssignError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
