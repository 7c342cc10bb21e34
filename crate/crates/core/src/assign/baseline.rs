//! Availability-blind round-robin baselines.

use crate::model::Assignment;
use crate::set::IndexSet;

/// Channel `j` goes to users `j·k, j·k + 1, …, j·k + k − 1` (mod `M`), so each
/// channel has `min(k, M)` holders. `k = 1` is the plain round-robin.
pub fn round_robin(users: usize, channels: usize, k_share: usize) -> Assignment {
    assert!(k_share >= 1, "k_share must be at least 1");
    let mut a = Assignment::empty(users, channels);
    for j in 0..channels {
        let holders: IndexSet = (0..k_share).map(|t| (j * k_share + t) % users).collect();
        a.set_holders(j, holders);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_gives_diagonal() {
        let a = round_robin(4, 4, 1);
        for i in 0..4 {
            assert_eq!(a.exclusive(i), IndexSet::singleton(i));
        }
    }

    #[test]
    fn modular_layout() {
        let a = round_robin(3, 6, 1);
        let (exclusive, _) = a.to_one_based();
        assert_eq!(exclusive, vec![vec![1, 4], vec![2, 5], vec![3, 6]]);
    }

    #[test]
    fn five_sharers_per_channel() {
        for m in 5..9 {
            let a = round_robin(m, 11, 5);
            assert!(a.validate().is_ok());
            for j in 0..11 {
                assert_eq!(a.sharers(j).len(), 5);
            }
        }
    }

    #[test]
    fn fewer_users_than_k() {
        let a = round_robin(3, 2, 5);
        assert_eq!(a.sharers(0).len(), 3);
    }
}
