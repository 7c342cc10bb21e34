//! Validated scenarios and the TOML scenario file format.
//!
//! ```toml
//! users = 2
//! channels = 2
//! availability = [[0.9, 0.5], [0.6, 0.8]]
//! detection = [[0.9, 0.9], [0.9, 0.9]]      # optional, needs false_alarm too
//! false_alarm = [[0.1, 0.1], [0.1, 0.1]]    # optional
//!
//! [timing]                                  # optional, defaults to paper-2012
//! cycle_us = 3000.0
//!
//! [assignment]                              # optional, 1-based channels
//! exclusive = [[1], [2]]
//! shared = [[], []]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, ModelError};
use crate::model::{Assignment, AvailabilityModel, Sensing, SensingModel};
use crate::timing::MacTiming;

/// A scenario whose parts have been checked against each other.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub model: AvailabilityModel,
    pub timing: MacTiming,
    pub sensing: Sensing,
    pub assignment: Option<Assignment>,
}

impl Scenario {
    pub fn users(&self) -> usize {
        self.model.users()
    }

    pub fn channels(&self) -> usize {
        self.model.channels()
    }
}

/// Checks that the parts of a scenario agree and each satisfies its own invariants.
pub fn validate_scenario(
    model: AvailabilityModel,
    assignment: Option<Assignment>,
    timing: MacTiming,
    sensing: Sensing,
) -> Result<Scenario, ModelError> {
    let (m, n) = (model.users(), model.channels());
    if let Some(a) = &assignment {
        if a.users() != m || a.channels() != n {
            return Err(ModelError::DimensionMismatch {
                what: "assignment",
                expected_rows: m,
                expected_cols: n,
                found_rows: a.users(),
                found_cols: a.channels(),
            });
        }
        a.validate()?;
    }
    if let Sensing::Imperfect(s) = &sensing {
        if s.users() != m || s.channels() != n {
            return Err(ModelError::DimensionMismatch {
                what: "sensing",
                expected_rows: m,
                expected_cols: n,
                found_rows: s.users(),
                found_cols: s.channels(),
            });
        }
    }
    timing.validate()?;
    Ok(Scenario {
        model,
        timing,
        sensing,
        assignment,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    users: usize,
    channels: usize,
    availability: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detection: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    false_alarm: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    timing: MacTiming,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assignment: Option<AssignmentBlock>,
}

/// The `[assignment]` block: per-user 1-based channel lists.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentBlock {
    #[serde(default)]
    pub exclusive: Vec<Vec<usize>>,
    #[serde(default)]
    pub shared: Vec<Vec<usize>>,
}

impl AssignmentBlock {
    pub fn from_assignment(a: &Assignment) -> Self {
        let (exclusive, shared) = a.to_one_based();
        AssignmentBlock { exclusive, shared }
    }

    pub fn to_assignment(&self, users: usize, channels: usize) -> Result<Assignment, ModelError> {
        let listed = self.exclusive.len().max(self.shared.len());
        if listed > users {
            return Err(ModelError::UserOutOfRange {
                user: listed,
                users,
            });
        }
        let pad = |lists: &[Vec<usize>]| {
            let mut v = lists.to_vec();
            v.resize(users, Vec::new());
            v
        };
        Assignment::from_one_based(channels, &pad(&self.exclusive), &pad(&self.shared))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, FormatError> {
    let file: ScenarioFile = toml::from_str(text)?;
    let model = AvailabilityModel::with_dimensions(file.users, file.channels, file.availability)?;
    let sensing = match (file.detection, file.false_alarm) {
        (None, None) => Sensing::Perfect,
        (detection, false_alarm) => {
            let (m, n) = (file.users, file.channels);
            let detection = detection.unwrap_or_else(|| vec![vec![1.0; n]; m]);
            let false_alarm = false_alarm.unwrap_or_else(|| vec![vec![0.0; n]; m]);
            Sensing::Imperfect(SensingModel::new(detection, false_alarm)?)
        }
    };
    let assignment = file
        .assignment
        .map(|b| b.to_assignment(file.users, file.channels))
        .transpose()?;
    Ok(validate_scenario(model, assignment, file.timing, sensing)?)
}

pub fn read_scenario(path: &Path) -> Result<Scenario, FormatError> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

/// Renders a scenario in the format accepted by [`parse_scenario`].
pub fn render_scenario(scenario: &Scenario) -> Result<String, FormatError> {
    let (detection, false_alarm) = match scenario.sensing.model() {
        Some(s) => (Some(s.detection_rows()), Some(s.false_alarm_rows())),
        None => (None, None),
    };
    let file = ScenarioFile {
        users: scenario.users(),
        channels: scenario.channels(),
        availability: scenario.model.rows(),
        detection,
        false_alarm,
        timing: scenario.timing,
        assignment: scenario
            .assignment
            .as_ref()
            .map(AssignmentBlock::from_assignment),
    };
    Ok(toml::to_string(&file)?)
}
