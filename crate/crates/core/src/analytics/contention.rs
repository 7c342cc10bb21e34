//! Contention on the control channel: who contends, how likely the first
//! backoff slot collides, the contention window and the MAC overhead.

use crate::error::AnalysisError;
use crate::model::{Assignment, AvailabilityModel};
use crate::timing::MacTiming;

use super::subsets::poisson_binomial;

/// Probability that `user` finds every exclusive channel busy and at least
/// one shared channel idle, and therefore contends.
pub fn contend_probability(model: &AvailabilityModel, assignment: &Assignment, user: usize) -> f64 {
    let shared = assignment.shared(user);
    if shared.is_empty() {
        return 0.0;
    }
    model.all_busy(user, assignment.exclusive(user)) * (1.0 - model.all_busy(user, shared))
}

/// Per-user contention probabilities and the resulting contender-count law.
#[derive(Clone, Debug, PartialEq)]
pub struct ContentionProfile {
    pub contend: Vec<f64>,
    /// `distribution[m]` = Pr{m users contend}, `m = 0..=M`.
    pub distribution: Vec<f64>,
}

impl ContentionProfile {
    pub fn new(model: &AvailabilityModel, assignment: &Assignment) -> Self {
        let contend: Vec<f64> = (0..assignment.users())
            .map(|i| contend_probability(model, assignment, i))
            .collect();
        let distribution = poisson_binomial(&contend);
        ContentionProfile {
            contend,
            distribution,
        }
    }

    /// First-collision probability at window `window`.
    pub fn first_collision(&self, window: u32) -> Result<f64, AnalysisError> {
        let table = CollisionTable::new(window, self.distribution.len().saturating_sub(1))?;
        Ok(self
            .distribution
            .iter()
            .enumerate()
            .skip(2)
            .map(|(m, &pr)| pr * table.given(m))
            .sum())
    }

    pub fn has_contention(&self) -> bool {
        self.contend.iter().filter(|&&c| c > 0.0).count() >= 2
    }
}

/// Pr{m users contend} for `m = 0..=M`.
pub fn contenders_distribution(model: &AvailabilityModel, assignment: &Assignment) -> Vec<f64> {
    ContentionProfile::new(model, assignment).distribution
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn check_window(window: u32) -> Result<(), AnalysisError> {
    if window < 2 {
        return Err(AnalysisError::InvalidWindow { window, min: 2 });
    }
    Ok(())
}

/// Conditional first-collision probability with `m` contenders:
/// `Σ_{j=2..m} Σ_{i=0..W−2} C(m,j) W^−j ((W−i−1)/W)^(m−j)`.
///
/// The inner sum stops at `W−2`, so the event that every contender draws
/// the last backoff value is not counted. See [`collision_prob_exhaustive`].
pub fn collision_prob_given_m(window: u32, m: usize) -> Result<f64, AnalysisError> {
    check_window(window)?;
    if m < 2 {
        return Ok(0.0);
    }
    let w = f64::from(window);
    let mut total = 0.0;
    for j in 2..=m {
        let c = binomial(m, j) * w.powi(-(j as i32));
        for i in 0..=window - 2 {
            total += c * ((w - f64::from(i) - 1.0) / w).powi((m - j) as i32);
        }
    }
    Ok(total)
}

/// Exact probability that the smallest of `m` uniform backoffs on
/// `{0..W−1}` is drawn by two or more contenders.
pub fn collision_prob_exhaustive(window: u32, m: usize) -> Result<f64, AnalysisError> {
    check_window(window)?;
    if m < 2 {
        return Ok(0.0);
    }
    let w = f64::from(window);
    let mut total = 0.0;
    for b in 0..window {
        let above = (w - f64::from(b) - 1.0) / w;
        for j in 2..=m {
            total += binomial(m, j) * w.powi(-(j as i32)) * above.powi((m - j) as i32);
        }
    }
    Ok(total)
}

/// [`collision_prob_given_m`] for every `m ≤ max_users` at one window, with
/// the two sums interchanged so each window costs `O(W·M + M²)`.
struct CollisionTable {
    given: Vec<f64>,
}

impl CollisionTable {
    fn new(window: u32, max_users: usize) -> Result<Self, AnalysisError> {
        check_window(window)?;
        let w = f64::from(window);
        // power[k] = Σ_{r=1}^{W−1} (r/W)^k, the inner sum with r = W−1−i.
        let mut power = vec![0.0; max_users + 1];
        for r in 1..window {
            let x = f64::from(r) / w;
            let mut term = 1.0;
            for slot in power.iter_mut() {
                *slot += term;
                term *= x;
            }
        }
        let given = (0..=max_users)
            .map(|m| {
                (2..=m)
                    .map(|j| binomial(m, j) * w.powi(-(j as i32)) * power[m - j])
                    .sum()
            })
            .collect();
        Ok(CollisionTable { given })
    }

    fn given(&self, m: usize) -> f64 {
        self.given[m]
    }
}

/// `Σ_{m≥2} P_c^(m)(W) · Pr{m contend}`.
pub fn first_collision_prob(
    model: &AvailabilityModel,
    assignment: &Assignment,
    window: u32,
) -> Result<f64, AnalysisError> {
    ContentionProfile::new(model, assignment).first_collision(window)
}

/// Smallest `W` in `[2, W_max]` whose first-collision probability is at most `ε_P`.
pub fn select_window(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
) -> Result<u32, AnalysisError> {
    select_window_for_profile(&ContentionProfile::new(model, assignment), timing)
}

pub fn select_window_for_profile(
    profile: &ContentionProfile,
    timing: &MacTiming,
) -> Result<u32, AnalysisError> {
    let target = timing.target_collision;
    if !profile.has_contention() {
        return Ok(2);
    }
    let mut reached = f64::NAN;
    for window in 2..=timing.max_window.max(2) {
        reached = profile.first_collision(window)?;
        if reached <= target {
            return Ok(window);
        }
    }
    Err(AnalysisError::WindowCapExceeded {
        max_window: timing.max_window,
        target,
        reached,
    })
}

/// Average fraction of a cycle spent on sensing, synchronization, backoff
/// and one RTS/CTS handshake.
pub fn mac_overhead(timing: &MacTiming, window: u32) -> Result<f64, AnalysisError> {
    if window < 1 {
        return Err(AnalysisError::InvalidWindow { window, min: 1 });
    }
    let backoff = f64::from(window - 1) * timing.slot_us / 2.0;
    let overhead = (backoff + timing.exchange_us() + timing.preamble_us()) / timing.cycle_us;
    if !(0.0..1.0).contains(&overhead) {
        return Err(AnalysisError::OverheadTooLarge { window, overhead });
    }
    Ok(overhead)
}
