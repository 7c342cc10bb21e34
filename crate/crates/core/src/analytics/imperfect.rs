//! Exact per-user throughput with sensing errors.
//!
//! Users act on sensed states. A false alarm hides an idle channel; a missed
//! detection makes a busy channel look idle, and transmitting on it earns
//! nothing. Contention is decided on sensed states, so a winner whose
//! channel is actually busy still blocks the other claimants.

use crate::error::AnalysisError;
use crate::model::{Assignment, AvailabilityModel, Sensing};

use super::perfect::{check_overhead, contention_term, user_throughput_perfect};
use super::subsets::{pick_success, SenseWeights};

/// `(P_idle, P_busy)`: the chance that `user` senses `channel` idle or busy.
pub fn sensing_access_probs(
    model: &AvailabilityModel,
    sensing: &Sensing,
    user: usize,
    channel: usize,
) -> (f64, f64) {
    let idle = sensing.sensed_idle(model, user, channel);
    (idle, 1.0 - idle)
}

/// Expected throughput of `user` acting on imperfect sensing outcomes.
pub fn user_throughput_imperfect(
    model: &AvailabilityModel,
    assignment: &Assignment,
    sensing: &Sensing,
    user: usize,
    overhead: f64,
) -> Result<f64, AnalysisError> {
    check_overhead(overhead)?;
    let Some(s) = sensing.model() else {
        return user_throughput_perfect(model, assignment, user, overhead);
    };
    let own: Vec<SenseWeights> = assignment
        .exclusive(user)
        .iter()
        .map(|j| SenseWeights {
            hit: model.idle(user, j) * (1.0 - s.false_alarm(user, j)),
            miss: model.busy(user, j) * (1.0 - s.detection(user, j)),
        })
        .collect();
    let direct = pick_success(&own);
    let access = sensing.access_model(model);
    let contended = contention_term(&access, assignment, user, |j| {
        model.idle(user, j) * (1.0 - s.false_alarm(user, j))
    });
    Ok(direct + (1.0 - overhead) * contended)
}

/// Dispatches on the sensing mode.
pub fn user_throughput(
    model: &AvailabilityModel,
    assignment: &Assignment,
    sensing: &Sensing,
    user: usize,
    overhead: f64,
) -> Result<f64, AnalysisError> {
    match sensing {
        Sensing::Perfect => user_throughput_perfect(model, assignment, user, overhead),
        Sensing::Imperfect(_) => {
            user_throughput_imperfect(model, assignment, sensing, user, overhead)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SensingModel;
    use proptest::prelude::*;

    fn imperfect(m: usize, n: usize, pd: f64, pf: f64) -> Sensing {
        Sensing::Imperfect(SensingModel::uniform(m, n, pd, pf).unwrap())
    }

    #[test]
    fn access_probability_examples() {
        let model = AvailabilityModel::constant(1, 1, 0.8).unwrap();
        let (idle, busy) = sensing_access_probs(&model, &imperfect(1, 1, 1.0, 0.0), 0, 0);
        assert_eq!((idle, busy), (0.8, 1.0 - 0.8));
        let (idle, _) = sensing_access_probs(&model, &imperfect(1, 1, 1.0, 1.0), 0, 0);
        assert_eq!(idle, 0.0);
        let (idle, _) = sensing_access_probs(&model, &imperfect(1, 1, 0.9, 0.1), 0, 0);
        assert!((idle - 0.74).abs() < 1e-15);
    }

    #[test]
    fn constant_false_alarm_blocks_everything() {
        let model = AvailabilityModel::constant(3, 6, 0.8).unwrap();
        let a = Assignment::from_one_based(
            6,
            &[vec![1], vec![2], vec![3]],
            &[vec![4, 6], vec![4, 5, 6], vec![5, 6]],
        )
        .unwrap();
        for i in 0..3 {
            let t =
                user_throughput_imperfect(&model, &a, &imperfect(3, 6, 0.9, 1.0), i, 0.1).unwrap();
            assert_eq!(t, 0.0);
        }
    }

    #[test]
    fn single_exclusive_channel() {
        let model = AvailabilityModel::constant(1, 1, 0.8).unwrap();
        let a = Assignment::from_one_based(1, &[vec![1]], &[vec![]]).unwrap();
        let t = user_throughput_imperfect(&model, &a, &imperfect(1, 1, 0.9, 0.1), 0, 0.1).unwrap();
        assert!((t - 0.72).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn perfect_sensing_reduces_to_perfect_model(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 4), 3),
            delta in 0.0f64..1.0,
        ) {
            let model = AvailabilityModel::new(rows).unwrap();
            let a = Assignment::from_one_based(
                4,
                &[vec![1], vec![], vec![2]],
                &[vec![3, 4], vec![3, 4], vec![4]],
            )
            .unwrap();
            let s = imperfect(3, 4, 1.0, 0.0);
            for i in 0..3 {
                let x = user_throughput_imperfect(&model, &a, &s, i, delta).unwrap();
                let y = user_throughput_perfect(&model, &a, i, delta).unwrap();
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
