//! MAC timing parameters.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Durations are in microseconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MacTiming {
    /// Backoff slot length `θ`.
    pub slot_us: f64,
    pub rts_us: f64,
    pub cts_us: f64,
    pub sifs_us: f64,
    /// Sensing phase at the start of each cycle.
    pub sensing_us: f64,
    /// Synchronization phase at the start of each cycle.
    pub sync_us: f64,
    pub cycle_us: f64,
    /// Target first-collision probability `ε_P`.
    pub target_collision: f64,
    /// Largest contention window the window search will try.
    pub max_window: u32,
}

impl Default for MacTiming {
    fn default() -> Self {
        Self::preset_2012()
    }
}

impl MacTiming {
    pub const PRESET_NAME: &'static str = "paper-2012";

    /// The reference parameter block: 20 µs slots, 48/40/28 µs RTS/CTS/SIFS,
    /// a 3 ms cycle and a 3% collision target.
    pub const fn preset_2012() -> Self {
        MacTiming {
            slot_us: 20.0,
            rts_us: 48.0,
            cts_us: 40.0,
            sifs_us: 28.0,
            sensing_us: 0.0,
            sync_us: 0.0,
            cycle_us: 3000.0,
            target_collision: 0.03,
            max_window: 1024,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        (name == Self::PRESET_NAME).then(Self::preset_2012)
    }

    pub fn with_target(mut self, target_collision: f64) -> Self {
        self.target_collision = target_collision;
        self
    }

    /// One RTS/CTS handshake: `t_RTS + t_CTS + 3 t_SIFS`.
    pub fn exchange_us(&self) -> f64 {
        self.rts_us + self.cts_us + 3.0 * self.sifs_us
    }

    /// Fixed per-cycle time before any contention: `t_SEN + t_SYN`.
    pub fn preamble_us(&self) -> f64 {
        self.sensing_us + self.sync_us
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let durations = [
            ("slot", self.slot_us),
            ("rts", self.rts_us),
            ("cts", self.cts_us),
            ("sifs", self.sifs_us),
            ("sensing", self.sensing_us),
            ("sync", self.sync_us),
        ];
        for (name, value) in durations {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ModelError::Timing(format!(
                    "{name} duration must be finite and >= 0 (got {value})"
                )));
            }
        }
        let fixed = self.preamble_us() + self.exchange_us();
        if !(self.cycle_us.is_finite() && self.cycle_us > fixed) {
            return Err(ModelError::Timing(format!(
                "cycle length {} must exceed sensing + sync + handshake time {fixed}",
                self.cycle_us
            )));
        }
        if !(self.target_collision > 0.0 && self.target_collision < 1.0) {
            return Err(ModelError::Timing(format!(
                "target collision probability must lie in (0, 1) (got {})",
                self.target_collision
            )));
        }
        if self.max_window < 2 {
            return Err(ModelError::Timing(format!(
                "maximum window must be at least 2 (got {})",
                self.max_window
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_is_valid() {
        assert!(MacTiming::preset_2012().validate().is_ok());
        assert_eq!(
            MacTiming::preset("paper-2012"),
            Some(MacTiming::preset_2012())
        );
        assert_eq!(MacTiming::preset("other"), None);
    }

    #[test]
    fn rejects_short_cycle() {
        let t = MacTiming {
            cycle_us: 100.0,
            ..MacTiming::preset_2012()
        };
        assert!(t.validate().is_err());
    }

    #[test]
    fn rejects_bad_target_and_window() {
        assert!(MacTiming::preset_2012()
            .with_target(0.0)
            .validate()
            .is_err());
        assert!(MacTiming::preset_2012()
            .with_target(1.0)
            .validate()
            .is_err());
        let t = MacTiming {
            max_window: 1,
            ..MacTiming::preset_2012()
        };
        assert!(t.validate().is_err());
        let t = MacTiming {
            slot_us: -1.0,
            ..MacTiming::preset_2012()
        };
        assert!(t.validate().is_err());
    }
}
