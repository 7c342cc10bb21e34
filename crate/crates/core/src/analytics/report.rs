//! Network-level evaluation.

use std::fmt;

use crate::error::AnalysisError;
use crate::model::{Assignment, AvailabilityModel, Sensing};
use crate::timing::MacTiming;

use super::contention::{mac_overhead, select_window_for_profile, ContentionProfile};
use super::imperfect::user_throughput;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SensingMode {
    Perfect,
    Imperfect,
}

impl fmt::Display for SensingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SensingMode::Perfect => "perfect",
            SensingMode::Imperfect => "imperfect",
        })
    }
}

/// Analytic evaluation of one assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct ThroughputReport {
    pub channels: usize,
    pub per_user: Vec<f64>,
    pub total: f64,
    pub overhead: f64,
    pub window: u32,
    /// Bound on the error from ignoring contention collisions.
    pub error_bound: f64,
    /// First-collision probability at `window`.
    pub collision_prob: f64,
    pub mode: SensingMode,
}

impl ThroughputReport {
    pub fn users(&self) -> usize {
        self.per_user.len()
    }

    pub fn min(&self) -> f64 {
        self.per_user.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn csv_header(users: usize) -> String {
        let mut cols = vec![
            "scenario".to_string(),
            "users".into(),
            "channels".into(),
            "window".into(),
            "overhead".into(),
        ];
        cols.extend((1..=users).map(|i| format!("t_{i}")));
        cols.extend(["total".into(), "error_bound".into(), "mode".into()]);
        cols.join(",")
    }

    pub fn csv_row(&self, scenario: &str) -> String {
        let mut cols = vec![
            scenario.to_string(),
            self.users().to_string(),
            self.channels.to_string(),
            self.window.to_string(),
            self.overhead.to_string(),
        ];
        cols.extend(self.per_user.iter().map(f64::to_string));
        cols.extend([
            self.total.to_string(),
            self.error_bound.to_string(),
            self.mode.to_string(),
        ]);
        cols.join(",")
    }
}

/// `ε_P · Σ_i Π_{S_i} p̄ · (1 − Π_{S_i^com} p̄)`.
pub fn analysis_error_bound(
    model: &AvailabilityModel,
    assignment: &Assignment,
    target: f64,
) -> f64 {
    target
        * ContentionProfile::new(model, assignment)
            .contend
            .iter()
            .sum::<f64>()
}

/// Selects the window, derives the overhead and evaluates every user.
pub fn network_throughput(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
    sensing: &Sensing,
) -> Result<ThroughputReport, AnalysisError> {
    let access = sensing.access_model(model);
    let profile = ContentionProfile::new(&access, assignment);
    let window = select_window_for_profile(&profile, timing)?;
    evaluate(model, assignment, timing, sensing, &profile, window)
}

/// As [`network_throughput`] with a fixed window.
pub fn network_throughput_at(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
    sensing: &Sensing,
    window: u32,
) -> Result<ThroughputReport, AnalysisError> {
    let access = sensing.access_model(model);
    let profile = ContentionProfile::new(&access, assignment);
    evaluate(model, assignment, timing, sensing, &profile, window)
}

fn evaluate(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
    sensing: &Sensing,
    profile: &ContentionProfile,
    window: u32,
) -> Result<ThroughputReport, AnalysisError> {
    let overhead = mac_overhead(timing, window)?;
    let per_user = (0..assignment.users())
        .map(|i| user_throughput(model, assignment, sensing, i, overhead))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ThroughputReport {
        channels: assignment.channels(),
        total: per_user.iter().sum(),
        per_user,
        overhead,
        window,
        error_bound: timing.target_collision * profile.contend.iter().sum::<f64>(),
        collision_prob: profile.first_collision(window)?,
        mode: if sensing.model().is_some() {
            SensingMode::Imperfect
        } else {
            SensingMode::Perfect
        },
    })
}
