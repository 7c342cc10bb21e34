//! Throughput of users that hold only exclusive channels.

use crate::error::AnalysisError;
use crate::model::AvailabilityModel;
use crate::set::IndexSet;

/// `1 − Π_{j∈S} p̄_ij`: the chance that at least one of `channels` is idle at `user`.
pub fn user_throughput_nonoverlap(
    model: &AvailabilityModel,
    channels: IndexSet,
    user: usize,
) -> f64 {
    1.0 - model.all_busy(user, channels)
}

/// Throughput gained by adding `candidate` to `channels`: `p_ij* · Π_{j∈S} p̄_ij`.
pub fn marginal_gain_nonoverlap(
    model: &AvailabilityModel,
    channels: IndexSet,
    user: usize,
    candidate: usize,
) -> Result<f64, AnalysisError> {
    if channels.contains(candidate) {
        return Err(AnalysisError::ChannelAlreadyHeld {
            user: user + 1,
            channel: candidate + 1,
        });
    }
    Ok(model.idle(user, candidate) * model.all_busy(user, channels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let m = AvailabilityModel::new(vec![vec![0.8, 0.8, 0.8]]).unwrap();
        assert_eq!(user_throughput_nonoverlap(&m, IndexSet::empty(), 0), 0.0);
        assert!((user_throughput_nonoverlap(&m, IndexSet::full(3), 0) - 0.992).abs() < 1e-12);
        let m = AvailabilityModel::new(vec![vec![0.7, 0.8]]).unwrap();
        assert_eq!(
            user_throughput_nonoverlap(&m, IndexSet::singleton(0), 0),
            0.7
        );
        assert_eq!(
            marginal_gain_nonoverlap(&m, IndexSet::empty(), 0, 0).unwrap(),
            0.7
        );
        let gain = marginal_gain_nonoverlap(&m, IndexSet::singleton(1), 0, 0).unwrap();
        assert!((gain - 0.14).abs() < 1e-12);
        assert!(matches!(
            marginal_gain_nonoverlap(&m, IndexSet::singleton(1), 0, 1),
            Err(AnalysisError::ChannelAlreadyHeld {
                user: 1,
                channel: 2
            })
        ));
    }

    proptest! {
        #[test]
        fn gain_is_throughput_difference(
            row in prop::collection::vec(0.0f64..=1.0, 1..=10),
            bits in any::<u64>(),
            pick in any::<prop::sample::Index>(),
        ) {
            let n = row.len();
            let model = AvailabilityModel::new(vec![row]).unwrap();
            let candidate = pick.index(n);
            let set = IndexSet::from_bits(bits).intersection(IndexSet::full(n)).without(candidate);
            let gain = marginal_gain_nonoverlap(&model, set, 0, candidate).unwrap();
            let diff = user_throughput_nonoverlap(&model, set.with(candidate), 0)
                - user_throughput_nonoverlap(&model, set, 0);
            prop_assert!((gain - diff).abs() < 1e-12);
        }
    }
}
