//! High-availability estimate of the gain from adding a user to a channel's
//! holders. Used by the overlapping greedy assignment.

use crate::error::AnalysisError;
use crate::model::{Assignment, AvailabilityModel};
use crate::set::IndexSet;

/// Estimated throughput gain for `user` if it joins `holders` on `channel`.
/// The sharing count `MS` is `|holders|`.
pub fn estimate_overlap_gain(
    model: &AvailabilityModel,
    assignment: &Assignment,
    user: usize,
    channel: usize,
    holders: IndexSet,
    overhead: f64,
) -> Result<f64, AnalysisError> {
    estimate_overlap_gain_with_count(
        model,
        assignment,
        user,
        channel,
        holders,
        holders.len().max(1),
        overhead,
    )
}

/// As [`estimate_overlap_gain`] with an explicit sharing count in the
/// `1 − 1/MS` factors.
pub fn estimate_overlap_gain_with_count(
    model: &AvailabilityModel,
    assignment: &Assignment,
    user: usize,
    channel: usize,
    holders: IndexSet,
    sharing_count: usize,
    overhead: f64,
) -> Result<f64, AnalysisError> {
    if assignment.total(user).contains(channel) || holders.contains(user) {
        return Err(AnalysisError::ChannelAlreadyHeld {
            user: user + 1,
            channel: channel + 1,
        });
    }
    if !(0.0..=1.0).contains(&overhead) {
        return Err(AnalysisError::InvalidOverhead(overhead));
    }
    let ms = sharing_count.max(1) as f64;
    let split = 1.0 - 1.0 / ms;
    let base = (1.0 - overhead)
        * model.idle(user, channel)
        * model.all_busy(user, assignment.exclusive(user));
    let com_busy = model.all_busy(user, assignment.shared(user));

    let all_idle: f64 = holders.iter().map(|q| model.idle(q, channel)).product();
    let one_busy: f64 = holders
        .iter()
        .map(|k| {
            model.busy(k, channel)
                * holders
                    .without(k)
                    .iter()
                    .map(|q| model.idle(q, channel))
                    .product::<f64>()
        })
        .sum();
    let all_direct: f64 = holders
        .iter()
        .map(|q| 1.0 - model.all_busy(q, assignment.exclusive(q)))
        .product();

    let first = split * base * (1.0 - com_busy) * one_busy;
    let second = base * com_busy * all_idle * all_direct;
    let third = split * base * (1.0 - com_busy) * all_idle * all_direct;
    Ok(first + second + third)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_holder_hand_value() {
        let model = AvailabilityModel::constant(2, 2, 0.8).unwrap();
        let a = Assignment::from_one_based(2, &[vec![1], vec![2]], &[vec![], vec![]]).unwrap();
        let g = estimate_overlap_gain(&model, &a, 0, 1, IndexSet::singleton(1), 0.1).unwrap();
        assert!((g - 0.9 * 0.8 * 0.2 * 0.8 * 0.8).abs() < 1e-15);
    }

    #[test]
    fn single_holder_collapses_to_middle_term() {
        let model =
            AvailabilityModel::new(vec![vec![0.7, 0.9, 0.6], vec![0.85, 0.75, 0.65]]).unwrap();
        let a = Assignment::from_one_based(3, &[vec![1], vec![2, 3]], &[vec![], vec![]]).unwrap();
        let delta = 0.2;
        let g = estimate_overlap_gain(&model, &a, 0, 1, IndexSet::singleton(1), delta).unwrap();
        let expected = (1.0 - delta) * 0.9 * 0.3 * 0.75 * (1.0 - 0.25 * 0.35);
        assert!((g - expected).abs() < 1e-15);
    }

    #[test]
    fn full_overhead_gives_zero() {
        let model = AvailabilityModel::constant(3, 3, 0.8).unwrap();
        let a =
            Assignment::from_one_based(3, &[vec![1], vec![], vec![]], &[vec![], vec![2], vec![2]])
                .unwrap();
        let g = estimate_overlap_gain(&model, &a, 0, 1, a.sharers(1), 1.0).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn rejects_held_channel() {
        let model = AvailabilityModel::constant(2, 2, 0.8).unwrap();
        let a = Assignment::from_one_based(2, &[vec![1], vec![2]], &[vec![], vec![]]).unwrap();
        assert!(estimate_overlap_gain(&model, &a, 0, 0, IndexSet::singleton(1), 0.1).is_err());
    }
}
