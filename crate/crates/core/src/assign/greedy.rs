//! Throughput-maximizing greedy assignment.

use crate::analytics::{
    estimate_overlap_gain_with_count, mac_overhead, marginal_gain_nonoverlap, select_window,
    user_throughput_nonoverlap,
};
use crate::error::AssignError;
use crate::model::{Assignment, AvailabilityModel};
use crate::set::IndexSet;
use crate::timing::MacTiming;

/// Tie-breaking rule shared by every algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lowest user index first, then lowest channel index.
    #[default]
    LowestIndex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyConfig {
    /// Stop once the best estimated gain is at most this.
    pub epsilon: f64,
    /// Re-estimate gains when a grant moves the overhead by more than this.
    pub epsilon_delta: f64,
    pub tie_break: TieBreak,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            epsilon: 1e-3,
            epsilon_delta: 5e-3,
            tie_break: TieBreak::LowestIndex,
        }
    }
}

impl GreedyConfig {
    pub fn validate(&self) -> Result<(), AssignError> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(AssignError::Config(format!(
                "epsilon must be > 0 (got {})",
                self.epsilon
            )));
        }
        if self.epsilon_delta.is_nan() || self.epsilon_delta <= 0.0 {
            return Err(AssignError::Config(format!(
                "epsilon_delta must be > 0 (got {})",
                self.epsilon_delta
            )));
        }
        Ok(())
    }
}

/// Non-overlapping greedy: repeatedly give the best remaining channel of the
/// user with the largest marginal gain. Every channel ends up assigned.
pub fn algorithm1(model: &AvailabilityModel) -> Assignment {
    algorithm1_traced(model).0
}

/// As [`algorithm1`], also returning the number of grant iterations.
pub fn algorithm1_traced(model: &AvailabilityModel) -> (Assignment, usize) {
    let (m, n) = (model.users(), model.channels());
    let mut a = Assignment::empty(m, n);
    let mut available = IndexSet::full(n);
    let mut iterations = 0;
    while !available.is_empty() {
        iterations += 1;
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..m {
            let Some(j) = best_channel(model, i, available) else {
                continue;
            };
            let gain = marginal_gain_nonoverlap(model, a.exclusive(i), i, j)
                .expect("available channels are never held");
            if best.map_or(true, |(g, _, _)| gain > g) {
                best = Some((gain, i, j));
            }
        }
        let (_, i, j) = best.expect("a channel is available");
        a.assign_exclusive(i, j);
        available.remove(j);
    }
    (a, iterations)
}

/// `argmax_{j ∈ available} p_ij`, lowest index on ties.
fn best_channel(model: &AvailabilityModel, user: usize, available: IndexSet) -> Option<usize> {
    available.iter().fold(None, |best, j| match best {
        Some(b) if model.idle(user, b) >= model.idle(user, j) => Some(b),
        _ => Some(j),
    })
}

/// Non-overlapping throughput of every user.
pub fn nonoverlap_throughputs(model: &AvailabilityModel, a: &Assignment) -> Vec<f64> {
    (0..a.users())
        .map(|i| user_throughput_nonoverlap(model, a.exclusive(i), i))
        .collect()
}

/// Output of the overlapping greedy.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapResult {
    pub assignment: Assignment,
    pub window: u32,
    pub overhead: f64,
    pub stats: GreedyStats,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GreedyStats {
    /// `(h, candidate evaluations)` for every sweep over a sharing group.
    pub sweeps: Vec<(usize, usize)>,
    pub grants: usize,
    pub refreshes: usize,
}

/// Overlapping greedy. Starts from [`algorithm1`] and, for growing sharing
/// levels `h`, adds users to channels currently held by `h` users while the
/// estimated gain exceeds `ε`. Every user keeps at least one exclusive channel.
pub fn algorithm2(
    model: &AvailabilityModel,
    timing: &MacTiming,
    config: &GreedyConfig,
) -> Result<OverlapResult, AssignError> {
    config.validate()?;
    timing.validate()?;
    let m = model.users();
    let mut a = algorithm1(model);
    let mut stats = GreedyStats::default();
    let committed_overhead = |a: &Assignment| -> Result<f64, AssignError> {
        Ok(mac_overhead(timing, select_window(model, a, timing)?)?)
    };
    let mut delta0 = committed_overhead(&a)?;

    for h in 1..m {
        let mut refreshed = false;
        loop {
            let (best, evaluations) = best_candidate(model, &a, h, delta0);
            stats.sweeps.push((h, evaluations));
            let Some((gain, user, channel)) = best else {
                break;
            };
            if gain <= config.epsilon {
                break;
            }
            let mut tentative = a.clone();
            tentative.add_holder(user, channel);
            let delta = committed_overhead(&tentative)?;
            if (delta - delta0).abs() > config.epsilon_delta && !refreshed {
                delta0 = delta;
                refreshed = true;
                stats.refreshes += 1;
                continue;
            }
            a = tentative;
            delta0 = delta;
            refreshed = false;
            stats.grants += 1;
        }
        delta0 = committed_overhead(&a)?;
    }

    let window = select_window(model, &a, timing)?;
    Ok(OverlapResult {
        overhead: mac_overhead(timing, window)?,
        window,
        assignment: a,
        stats,
    })
}

/// Best `(gain, user, channel)` over channels held by exactly `h` users and
/// users not yet holding them, with the number of gains evaluated.
fn best_candidate(
    model: &AvailabilityModel,
    a: &Assignment,
    h: usize,
    overhead: f64,
) -> (Option<(f64, usize, usize)>, usize) {
    let views = a.views();
    let group = views.group(h);
    let mut best: Option<(f64, usize, usize)> = None;
    let mut evaluations = 0;
    for user in 0..a.users() {
        for channel in group {
            let holders = views.holders[channel];
            if holders.contains(user) {
                continue;
            }
            if let Some(owner) = a.owner(channel) {
                if a.exclusive(owner).len() <= 1 {
                    continue;
                }
            }
            evaluations += 1;
            let gain = estimate_overlap_gain_with_count(
                model,
                a,
                user,
                channel,
                holders,
                (holders.len() + 1).max(2),
                overhead,
            )
            .expect("candidate user does not hold the channel");
            if best.map_or(true, |(g, _, _)| gain > g) {
                best = Some((gain, user, channel));
            }
        }
    }
    (best, evaluations)
}
