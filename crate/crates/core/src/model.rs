//! Scenario data model: channel availability, assignments and sensing quality.
//!
//! Users and channels are 0-based everywhere in the API. External formats and
//! error messages use 1-based indices.

use crate::error::ModelError;
use crate::set::IndexSet;

/// Largest number of users or channels a scenario may have.
pub const MAX_DIMENSION: usize = IndexSet::CAPACITY;

fn check_dimensions(users: usize, channels: usize) -> Result<(), ModelError> {
    if users == 0 || channels == 0 {
        return Err(ModelError::EmptyNetwork { users, channels });
    }
    if users > MAX_DIMENSION || channels > MAX_DIMENSION {
        return Err(ModelError::TooLarge {
            users,
            channels,
            limit: MAX_DIMENSION,
        });
    }
    Ok(())
}

fn flatten_matrix(
    what: &'static str,
    rows: &[Vec<f64>],
    users: usize,
    channels: usize,
) -> Result<Vec<f64>, ModelError> {
    let found_cols = rows.first().map_or(0, Vec::len);
    if rows.len() != users || rows.iter().any(|r| r.len() != channels) {
        return Err(ModelError::DimensionMismatch {
            what,
            expected_rows: users,
            expected_cols: channels,
            found_rows: rows.len(),
            found_cols: rows
                .iter()
                .map(Vec::len)
                .find(|&c| c != channels)
                .unwrap_or(found_cols),
        });
    }
    let mut flat = Vec::with_capacity(users * channels);
    for (i, row) in rows.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::ProbabilityOutOfRange {
                    what,
                    user: i + 1,
                    channel: j + 1,
                    value,
                });
            }
            flat.push(value);
        }
    }
    Ok(flat)
}

/// Per-(user, channel) probability that a channel is free of primary activity
/// during a cycle. Entries are independent across users and channels.
#[derive(Clone, Debug, PartialEq)]
pub struct AvailabilityModel {
    users: usize,
    channels: usize,
    p: Vec<f64>,
}

impl AvailabilityModel {
    /// Builds a model from `users` rows of `channels` probabilities.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let users = rows.len();
        let channels = rows.first().map_or(0, Vec::len);
        check_dimensions(users, channels)?;
        let p = flatten_matrix("availability", &rows, users, channels)?;
        Ok(AvailabilityModel { users, channels, p })
    }

    pub fn with_dimensions(
        users: usize,
        channels: usize,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        check_dimensions(users, channels)?;
        let p = flatten_matrix("availability", &rows, users, channels)?;
        Ok(AvailabilityModel { users, channels, p })
    }

    pub fn constant(users: usize, channels: usize, p: f64) -> Result<Self, ModelError> {
        Self::with_dimensions(users, channels, vec![vec![p; channels]; users])
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Probability that `channel` is idle at `user`.
    #[inline]
    pub fn idle(&self, user: usize, channel: usize) -> f64 {
        self.p[user * self.channels + channel]
    }

    /// Probability that `channel` is busy at `user`.
    #[inline]
    pub fn busy(&self, user: usize, channel: usize) -> f64 {
        1.0 - self.idle(user, channel)
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.p[user * self.channels..(user + 1) * self.channels]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.users).map(|i| self.row(i).to_vec()).collect()
    }

    /// Product of busy probabilities over `set` for `user`; 1 for the empty set.
    pub fn all_busy(&self, user: usize, set: IndexSet) -> f64 {
        set.iter().map(|j| self.busy(user, j)).product()
    }
}

/// Per-user exclusive and shared channel sets.
///
/// Each channel is in one of three states: unassigned, exclusive to one
/// user, or shared by two or more users. Mutations go through
/// [`Assignment::set_holders`], which keeps that invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    users: usize,
    channels: usize,
    exclusive: Vec<IndexSet>,
    shared: Vec<IndexSet>,
}

impl Assignment {
    /// An assignment with every channel unassigned.
    pub fn empty(users: usize, channels: usize) -> Self {
        assert!(users <= MAX_DIMENSION && channels <= MAX_DIMENSION);
        Assignment {
            users,
            channels,
            exclusive: vec![IndexSet::empty(); users],
            shared: vec![IndexSet::empty(); users],
        }
    }

    /// Builds an assignment from explicit 0-based sets and validates it.
    pub fn from_sets(
        users: usize,
        channels: usize,
        exclusive: Vec<IndexSet>,
        shared: Vec<IndexSet>,
    ) -> Result<Self, ModelError> {
        check_dimensions(users, channels)?;
        if exclusive.len() != users || shared.len() != users {
            return Err(ModelError::DimensionMismatch {
                what: "assignment",
                expected_rows: users,
                expected_cols: 2,
                found_rows: exclusive.len().max(shared.len()),
                found_cols: 2,
            });
        }
        let a = Assignment {
            users,
            channels,
            exclusive,
            shared,
        };
        a.validate()?;
        Ok(a)
    }

    /// Builds an assignment from 1-based channel lists, one list per user.
    pub fn from_one_based(
        channels: usize,
        exclusive: &[Vec<usize>],
        shared: &[Vec<usize>],
    ) -> Result<Self, ModelError> {
        let users = exclusive.len().max(shared.len());
        check_dimensions(users, channels)?;
        let convert = |lists: &[Vec<usize>]| -> Result<Vec<IndexSet>, ModelError> {
            let mut out = vec![IndexSet::empty(); users];
            for (i, list) in lists.iter().enumerate() {
                for &c in list {
                    if c == 0 || c > channels {
                        return Err(ModelError::ChannelOutOfRange {
                            user: i + 1,
                            channel: c,
                            channels,
                        });
                    }
                    out[i].insert(c - 1);
                }
            }
            Ok(out)
        };
        let exclusive = convert(exclusive)?;
        let shared = convert(shared)?;
        Self::from_sets(users, channels, exclusive, shared)
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let limit = IndexSet::full(self.channels);
        for i in 0..self.users {
            for set in [self.exclusive[i], self.shared[i]] {
                if let Some(c) = set.difference(limit).first() {
                    return Err(ModelError::ChannelOutOfRange {
                        user: i + 1,
                        channel: c + 1,
                        channels: self.channels,
                    });
                }
            }
            if let Some(c) = self.exclusive[i].intersection(self.shared[i]).first() {
                return Err(ModelError::ExclusiveAndShared {
                    user: i + 1,
                    channel: c + 1,
                });
            }
        }
        for i in 0..self.users {
            for k in i + 1..self.users {
                if let Some(c) = self.exclusive[i].intersection(self.exclusive[k]).first() {
                    return Err(ModelError::ExclusiveOverlap {
                        channel: c + 1,
                        first: i + 1,
                        second: k + 1,
                    });
                }
            }
        }
        for i in 0..self.users {
            for k in 0..self.users {
                if i == k {
                    continue;
                }
                if let Some(c) = self.exclusive[i].intersection(self.shared[k]).first() {
                    return Err(ModelError::SharedConflict {
                        channel: c + 1,
                        owner: i + 1,
                        sharer: k + 1,
                    });
                }
            }
        }
        for j in 0..self.channels {
            let sharers = self.sharers(j);
            if sharers.len() == 1 {
                return Err(ModelError::LoneSharer {
                    channel: j + 1,
                    user: sharers.first().unwrap_or(0) + 1,
                });
            }
        }
        Ok(())
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `S_i`: channels held by `user` alone.
    pub fn exclusive(&self, user: usize) -> IndexSet {
        self.exclusive[user]
    }

    /// `S_i^com`: channels `user` shares with at least one other user.
    pub fn shared(&self, user: usize) -> IndexSet {
        self.shared[user]
    }

    /// `S_i^tot`.
    pub fn total(&self, user: usize) -> IndexSet {
        self.exclusive[user].union(self.shared[user])
    }

    /// Users holding `channel` through their shared sets.
    pub fn sharers(&self, channel: usize) -> IndexSet {
        (0..self.users)
            .filter(|&i| self.shared[i].contains(channel))
            .collect()
    }

    /// The user holding `channel` exclusively, if any.
    pub fn owner(&self, channel: usize) -> Option<usize> {
        (0..self.users).find(|&i| self.exclusive[i].contains(channel))
    }

    /// Every user holding `channel`, exclusively or shared.
    pub fn holders(&self, channel: usize) -> IndexSet {
        (0..self.users)
            .filter(|&i| self.total(i).contains(channel))
            .collect()
    }

    /// Reassigns `channel` to exactly `holders`: nobody (unassigned), a
    /// single owner (exclusive) or a sharing group.
    pub fn set_holders(&mut self, channel: usize, holders: IndexSet) {
        assert!(channel < self.channels, "channel index out of range");
        assert!(
            holders.is_subset(IndexSet::full(self.users)),
            "user index out of range"
        );
        for i in 0..self.users {
            self.exclusive[i].remove(channel);
            self.shared[i].remove(channel);
        }
        match holders.len() {
            0 => {}
            1 => {
                self.exclusive[holders.first().unwrap()].insert(channel);
            }
            _ => {
                for i in holders {
                    self.shared[i].insert(channel);
                }
            }
        }
    }

    /// Gives `channel` to `user` alone.
    pub fn assign_exclusive(&mut self, user: usize, channel: usize) {
        self.set_holders(channel, IndexSet::singleton(user));
    }

    /// Adds `user` to the holders of `channel`, turning an exclusive channel
    /// into a shared one.
    pub fn add_holder(&mut self, user: usize, channel: usize) {
        let holders = self.holders(channel).with(user);
        self.set_holders(channel, holders);
    }

    /// Channels held by at least two users.
    pub fn shared_channels(&self) -> IndexSet {
        self.shared
            .iter()
            .fold(IndexSet::empty(), |acc, s| acc.union(*s))
    }

    /// Channels held by anyone.
    pub fn assigned_channels(&self) -> IndexSet {
        (0..self.users).fold(IndexSet::empty(), |acc, i| acc.union(self.total(i)))
    }

    pub fn is_non_overlapping(&self) -> bool {
        self.shared.iter().all(|s| s.is_empty())
    }

    pub fn views(&self) -> AssignmentViews {
        derive_views(self)
    }

    /// Per-user `(exclusive, shared)` channel lists, 1-based.
    pub fn to_one_based(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let conv = |sets: &[IndexSet]| -> Vec<Vec<usize>> {
            sets.iter()
                .map(|s| s.iter().map(|c| c + 1).collect())
                .collect()
        };
        (conv(&self.exclusive), conv(&self.shared))
    }
}

/// Derived per-channel and per-group views of an [`Assignment`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentViews {
    /// `U_j`: sharers of each channel; exclusive channels map to their owner.
    pub holders: Vec<IndexSet>,
    /// `G_l` for `l = 0..=M`. `G_1` holds the exclusive channels; shared
    /// channels appear only in groups with `l >= 2`.
    pub groups: Vec<IndexSet>,
    /// `S_i^tot` per user.
    pub totals: Vec<IndexSet>,
}

impl AssignmentViews {
    pub fn group(&self, sharers: usize) -> IndexSet {
        self.groups.get(sharers).copied().unwrap_or_default()
    }
}

/// Recomputes `U_j`, `G_l` and `S_i^tot` from the per-user sets.
pub fn derive_views(assignment: &Assignment) -> AssignmentViews {
    let users = assignment.users();
    let mut holders = vec![IndexSet::empty(); assignment.channels()];
    let mut groups = vec![IndexSet::empty(); users + 1];
    for (j, slot) in holders.iter_mut().enumerate() {
        let sharers = assignment.sharers(j);
        *slot = if sharers.is_empty() {
            assignment
                .owner(j)
                .map(IndexSet::singleton)
                .unwrap_or_default()
        } else {
            sharers
        };
        if !slot.is_empty() {
            groups[slot.len()].insert(j);
        }
    }
    let totals = (0..users).map(|i| assignment.total(i)).collect();
    AssignmentViews {
        holders,
        groups,
        totals,
    }
}

/// The `x_ij` inclusion matrix of an assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryAssignmentMatrix {
    users: usize,
    channels: usize,
    x: Vec<bool>,
}

impl BinaryAssignmentMatrix {
    pub fn zeros(users: usize, channels: usize) -> Self {
        BinaryAssignmentMatrix {
            users,
            channels,
            x: vec![false; users * channels],
        }
    }

    /// Decodes the bit mask used by the brute-force search: bit `i*N + j` is `x_ij`.
    pub fn from_mask(users: usize, channels: usize, mask: u128) -> Self {
        let mut m = Self::zeros(users, channels);
        for (k, slot) in m.x.iter_mut().enumerate() {
            *slot = (mask >> k) & 1 == 1;
        }
        m
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn get(&self, user: usize, channel: usize) -> bool {
        self.x[user * self.channels + channel]
    }

    pub fn set(&mut self, user: usize, channel: usize, value: bool) {
        self.x[user * self.channels + channel] = value;
    }

    pub fn column(&self, channel: usize) -> IndexSet {
        (0..self.users).filter(|&i| self.get(i, channel)).collect()
    }

    /// Every assigned channel has exactly one owner.
    pub fn is_non_overlapping(&self) -> bool {
        (0..self.channels).all(|j| self.column(j).len() <= 1)
    }

    /// The full non-overlapping constraint: every channel has exactly one owner.
    pub fn is_partition(&self) -> bool {
        (0..self.channels).all(|j| self.column(j).len() == 1)
    }

    /// Columns with one holder become exclusive channels and columns with
    /// several holders become shared channels.
    pub fn to_assignment(&self) -> Assignment {
        let mut a = Assignment::empty(self.users, self.channels);
        for j in 0..self.channels {
            a.set_holders(j, self.column(j));
        }
        a
    }
}

impl From<&Assignment> for BinaryAssignmentMatrix {
    fn from(a: &Assignment) -> Self {
        let mut m = Self::zeros(a.users(), a.channels());
        for i in 0..a.users() {
            for j in a.total(i) {
                m.set(i, j, true);
            }
        }
        m
    }
}

/// Per-(user, channel) detection and false-alarm probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct SensingModel {
    users: usize,
    channels: usize,
    detection: Vec<f64>,
    false_alarm: Vec<f64>,
}

impl SensingModel {
    pub fn new(detection: Vec<Vec<f64>>, false_alarm: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let users = detection.len();
        let channels = detection.first().map_or(0, Vec::len);
        check_dimensions(users, channels)?;
        let detection = flatten_matrix("detection", &detection, users, channels)?;
        let false_alarm = flatten_matrix("false_alarm", &false_alarm, users, channels)?;
        Ok(SensingModel {
            users,
            channels,
            detection,
            false_alarm,
        })
    }

    pub fn uniform(
        users: usize,
        channels: usize,
        detection: f64,
        false_alarm: f64,
    ) -> Result<Self, ModelError> {
        Self::new(
            vec![vec![detection; channels]; users],
            vec![vec![false_alarm; channels]; users],
        )
    }

    /// `P_d = 1`, `P_f = 0` everywhere.
    pub fn perfect(users: usize, channels: usize) -> Result<Self, ModelError> {
        Self::uniform(users, channels, 1.0, 0.0)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn detection(&self, user: usize, channel: usize) -> f64 {
        self.detection[user * self.channels + channel]
    }

    #[inline]
    pub fn false_alarm(&self, user: usize, channel: usize) -> f64 {
        self.false_alarm[user * self.channels + channel]
    }

    pub fn detection_rows(&self) -> Vec<Vec<f64>> {
        self.detection
            .chunks(self.channels)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn false_alarm_rows(&self) -> Vec<Vec<f64>> {
        self.false_alarm
            .chunks(self.channels)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn is_perfect(&self) -> bool {
        self.detection.iter().all(|&d| d == 1.0) && self.false_alarm.iter().all(|&f| f == 0.0)
    }
}

/// How users sense their channels.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Sensing {
    #[default]
    Perfect,
    Imperfect(SensingModel),
}

impl Sensing {
    pub fn is_perfect(&self) -> bool {
        match self {
            Sensing::Perfect => true,
            Sensing::Imperfect(s) => s.is_perfect(),
        }
    }

    pub fn model(&self) -> Option<&SensingModel> {
        match self {
            Sensing::Perfect => None,
            Sensing::Imperfect(s) => Some(s),
        }
    }

    /// The matrix of sensed-idle probabilities, which governs who transmits
    /// and who contends. Equal to `model` under perfect sensing.
    pub fn access_model(&self, model: &AvailabilityModel) -> AvailabilityModel {
        match self {
            Sensing::Perfect => model.clone(),
            Sensing::Imperfect(_) => {
                let mut out = model.clone();
                for i in 0..model.users() {
                    for j in 0..model.channels() {
                        out.p[i * model.channels() + j] = self.sensed_idle(model, i, j);
                    }
                }
                out
            }
        }
    }

    /// Probability that `user` senses `channel` idle and may access it.
    #[inline]
    pub fn sensed_idle(&self, model: &AvailabilityModel, user: usize, channel: usize) -> f64 {
        match self {
            Sensing::Perfect => model.idle(user, channel),
            Sensing::Imperfect(s) => {
                let p = model.idle(user, channel);
                (1.0 - s.false_alarm(user, channel)) * p
                    + (1.0 - s.detection(user, channel)) * (1.0 - p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn three_user_fixture() -> Assignment {
        Assignment::from_one_based(
            6,
            &[vec![1], vec![2], vec![3]],
            &[vec![4, 6], vec![4, 5, 6], vec![5, 6]],
        )
        .unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        v.iter().map(|c| c - 1).collect()
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let err = AvailabilityModel::new(vec![vec![0.5, 1.2]]).unwrap_err();
        assert_eq!(
            err.to_string(),
            "availability: probability out of range at (1,2): 1.2"
        );
    }

    #[test]
    fn rejects_ragged_matrix() {
        let err = AvailabilityModel::new(vec![vec![0.5, 0.5], vec![0.5]]).unwrap_err();
        assert!(matches!(err, ModelError::DimensionMismatch { .. }));
    }

    #[test]
    fn rejects_nan() {
        assert!(AvailabilityModel::new(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn smallest_scenario_is_valid() {
        let a = Assignment::from_one_based(1, &[vec![1]], &[vec![]]).unwrap();
        assert_eq!(a.exclusive(0), IndexSet::singleton(0));
    }

    #[test]
    fn three_user_fixture_views() {
        let v = three_user_fixture().views();
        assert_eq!(v.holders[3], set(&[1, 2]));
        assert_eq!(v.holders[4], set(&[2, 3]));
        assert_eq!(v.holders[5], set(&[1, 2, 3]));
        assert_eq!(v.holders[0], set(&[1]));
        assert_eq!(v.group(2), set(&[4, 5]));
        assert_eq!(v.group(3), set(&[6]));
        assert_eq!(v.group(1), set(&[1, 2, 3]));
        assert_eq!(v.totals[1], set(&[2, 4, 5, 6]));
    }

    #[test]
    fn all_exclusive_has_no_shared_groups() {
        let a = Assignment::from_one_based(3, &[vec![1, 2], vec![3]], &[vec![], vec![]]).unwrap();
        let v = a.views();
        assert!(v.groups.iter().skip(2).all(|g| g.is_empty()));
    }

    #[test]
    fn single_shared_channel() {
        let a = Assignment::from_one_based(1, &[vec![], vec![]], &[vec![1], vec![1]]).unwrap();
        let v = a.views();
        assert_eq!(v.holders[0], set(&[1, 2]));
        assert_eq!(v.group(2), set(&[1]));
    }

    #[test]
    fn validation_errors_name_the_violation() {
        let overlap = Assignment::from_one_based(2, &[vec![1], vec![1]], &[vec![], vec![]]);
        assert!(matches!(
            overlap,
            Err(ModelError::ExclusiveOverlap {
                channel: 1,
                first: 1,
                second: 2
            })
        ));
        let conflict = Assignment::from_one_based(2, &[vec![1], vec![]], &[vec![2], vec![1, 2]]);
        assert!(matches!(
            conflict,
            Err(ModelError::SharedConflict {
                channel: 1,
                owner: 1,
                sharer: 2
            })
        ));
        let lone = Assignment::from_one_based(2, &[vec![1], vec![]], &[vec![], vec![2]]);
        assert!(matches!(
            lone,
            Err(ModelError::LoneSharer {
                channel: 2,
                user: 2
            })
        ));
        let both = Assignment::from_one_based(2, &[vec![1]], &[vec![1]]);
        assert!(matches!(both, Err(ModelError::ExclusiveAndShared { .. })));
        let range = Assignment::from_one_based(2, &[vec![3]], &[vec![]]);
        assert!(matches!(range, Err(ModelError::ChannelOutOfRange { .. })));
    }

    #[test]
    fn set_holders_moves_between_states() {
        let mut a = Assignment::empty(3, 2);
        a.assign_exclusive(0, 1);
        assert_eq!(a.owner(1), Some(0));
        a.add_holder(2, 1);
        assert_eq!(a.owner(1), None);
        assert_eq!(a.sharers(1), [0, 2].into_iter().collect());
        a.set_holders(1, IndexSet::singleton(2));
        assert_eq!(a.owner(1), Some(2));
        assert!(a.validate().is_ok());
        a.set_holders(1, IndexSet::empty());
        assert!(a.assigned_channels().is_empty());
    }

    #[test]
    fn matrix_round_trip() {
        let a = three_user_fixture();
        let m = BinaryAssignmentMatrix::from(&a);
        assert!(!m.is_non_overlapping());
        assert_eq!(m.to_assignment(), a);
    }

    #[test]
    fn sensing_idle_probability() {
        let model = AvailabilityModel::constant(1, 1, 0.8).unwrap();
        let s = Sensing::Imperfect(SensingModel::uniform(1, 1, 0.9, 0.1).unwrap());
        assert!((s.sensed_idle(&model, 0, 0) - 0.74).abs() < 1e-15);
        assert_eq!(Sensing::Perfect.sensed_idle(&model, 0, 0), 0.8);
    }
}
