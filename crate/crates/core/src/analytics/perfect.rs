//! Exact per-user throughput when contention is collision-free.
//!
//! A user first tries its exclusive channels. If all are busy it picks one
//! of its idle shared channels uniformly and contends; among the users that
//! picked the same channel the winner is uniform. Direct transmissions earn
//! a full cycle and contention wins earn `1 − δ`.

use crate::error::AnalysisError;
use crate::model::{Assignment, AvailabilityModel};

use super::subsets::{contention_share, expected_share, GroupWeights};

pub(crate) fn check_overhead(overhead: f64) -> Result<(), AnalysisError> {
    if !(0.0..=1.0).contains(&overhead) {
        return Err(AnalysisError::InvalidOverhead(overhead));
    }
    Ok(())
}

/// Probability that `user` picks `channel` from its sensed-idle shared
/// channels, with all its exclusive channels sensed busy. `success` is the
/// probability that the channel is sensed idle and usable.
pub(crate) fn choose_probability(
    access: &AvailabilityModel,
    assignment: &Assignment,
    user: usize,
    channel: usize,
    success: f64,
) -> f64 {
    let others: Vec<f64> = assignment
        .shared(user)
        .without(channel)
        .iter()
        .map(|h| access.idle(user, h))
        .collect();
    access.all_busy(user, assignment.exclusive(user)) * success * expected_share(&others)
}

/// Weights of the four groups another sharer `other` of `channel` can fall into.
pub(crate) fn group_weights(
    access: &AvailabilityModel,
    assignment: &Assignment,
    other: usize,
    channel: usize,
) -> GroupWeights {
    let idle = access.idle(other, channel);
    let exclusive_busy = access.all_busy(other, assignment.exclusive(other));
    let contends = idle * exclusive_busy;
    let competing = choose_probability(access, assignment, other, channel, idle);
    GroupWeights {
        direct: idle * (1.0 - exclusive_busy),
        blocked: 1.0 - idle,
        elsewhere: contends - competing,
        competing,
    }
}

/// Expected contention payoff of `user` before the `1 − δ` factor, summed
/// over its shared channels. `success(j)` is the chance that `j` is sensed
/// idle by `user` and actually usable.
pub(crate) fn contention_term(
    access: &AvailabilityModel,
    assignment: &Assignment,
    user: usize,
    success: impl Fn(usize) -> f64,
) -> f64 {
    assignment
        .shared(user)
        .iter()
        .map(|j| {
            let theta = choose_probability(access, assignment, user, j, success(j));
            if theta == 0.0 {
                return 0.0;
            }
            let groups: Vec<GroupWeights> = assignment
                .sharers(j)
                .without(user)
                .iter()
                .map(|k| group_weights(access, assignment, k, j))
                .collect();
            theta * contention_share(&groups)
        })
        .sum()
}

/// Expected throughput of `user` under perfect sensing.
pub fn user_throughput_perfect(
    model: &AvailabilityModel,
    assignment: &Assignment,
    user: usize,
    overhead: f64,
) -> Result<f64, AnalysisError> {
    check_overhead(overhead)?;
    let direct = 1.0 - model.all_busy(user, assignment.exclusive(user));
    let contended = contention_term(model, assignment, user, |j| model.idle(user, j));
    Ok(direct + (1.0 - overhead) * contended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::contention::contend_probability;
    use proptest::prelude::*;

    fn three_user_fixture() -> Assignment {
        Assignment::from_one_based(
            6,
            &[vec![1], vec![2], vec![3]],
            &[vec![4, 6], vec![4, 5, 6], vec![5, 6]],
        )
        .unwrap()
    }

    #[test]
    fn no_shared_channels_is_direct_only() {
        let model = AvailabilityModel::constant(3, 6, 0.8).unwrap();
        let a =
            Assignment::from_one_based(6, &[vec![1], vec![2], vec![3]], &[vec![], vec![], vec![]])
                .unwrap();
        let t = user_throughput_perfect(&model, &a, 0, 0.1).unwrap();
        assert!((t - 0.8).abs() < 1e-15);
    }

    #[test]
    fn full_overhead_leaves_direct_only() {
        let model = AvailabilityModel::constant(3, 6, 0.8).unwrap();
        let t = user_throughput_perfect(&model, &three_user_fixture(), 1, 1.0).unwrap();
        assert!((t - 0.8).abs() < 1e-15);
    }

    #[test]
    fn two_users_one_shared_channel() {
        // Both always contend for the same idle channel and split it.
        let model = AvailabilityModel::constant(2, 1, 1.0).unwrap();
        let a = Assignment::from_one_based(1, &[vec![], vec![]], &[vec![1], vec![1]]).unwrap();
        let t = user_throughput_perfect(&model, &a, 0, 0.2).unwrap();
        assert!((t - 0.4).abs() < 1e-15);
    }

    #[test]
    fn hand_value_for_lone_contender() {
        // User 1 holds {1} and shares {2} with user 2, who holds {3}.
        let model = AvailabilityModel::new(vec![vec![0.6, 0.7, 0.0], vec![0.0, 0.5, 0.9]]).unwrap();
        let a = Assignment::from_one_based(3, &[vec![1], vec![3]], &[vec![2], vec![2]]).unwrap();
        let delta = 0.1;
        let t = user_throughput_perfect(&model, &a, 0, delta).unwrap();
        // User 2 competes only when channel 3 is busy and channel 2 is idle.
        let rival = 0.5 * 0.1;
        let expected = 0.6 + (1.0 - delta) * 0.4 * 0.7 * (1.0 - rival + rival / 2.0);
        assert!((t - expected).abs() < 1e-15);
    }

    #[test]
    fn group_weights_sum_to_one() {
        let model = AvailabilityModel::new(vec![
            vec![0.7, 0.8, 0.9, 0.75, 0.85, 0.6],
            vec![0.72, 0.81, 0.93, 0.7, 0.88, 0.65],
            vec![0.71, 0.83, 0.79, 0.77, 0.82, 0.9],
        ])
        .unwrap();
        let a = three_user_fixture();
        for j in 3..6 {
            for k in a.sharers(j) {
                let g = group_weights(&model, &a, k, j);
                let s = g.direct + g.blocked + g.elsewhere + g.competing;
                assert!((s - 1.0).abs() < 1e-15);
                assert!(g.elsewhere >= 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn bounded_by_direct_and_contention(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 5), 3),
            delta in 0.0f64..1.0,
        ) {
            let model = AvailabilityModel::new(rows).unwrap();
            let a = Assignment::from_one_based(
                5,
                &[vec![1], vec![2], vec![]],
                &[vec![3, 4], vec![3, 5], vec![4, 5]],
            )
            .unwrap();
            for i in 0..3 {
                let t = user_throughput_perfect(&model, &a, i, delta).unwrap();
                let direct = 1.0 - model.all_busy(i, a.exclusive(i));
                prop_assert!((0.0..=1.0 + 1e-12).contains(&t));
                prop_assert!(t >= direct - 1e-12);
                prop_assert!(t <= direct + (1.0 - delta) * contend_probability(&model, &a, i) + 1e-12);
            }
        }
    }
}
