//! Max-min fair assignment.

use crate::analytics::{network_throughput, user_throughput_nonoverlap, ThroughputReport};
use crate::error::{AnalysisError, AssignError};
use crate::model::{Assignment, AvailabilityModel, Sensing};
use crate::set::IndexSet;
use crate::timing::MacTiming;

use super::greedy::GreedyConfig;

/// Fair non-overlapping greedy: the minimum-throughput users take turns
/// claiming the channel that raises their throughput most.
pub fn algorithm3_fair(model: &AvailabilityModel) -> Assignment {
    let (m, n) = (model.users(), model.channels());
    let mut a = Assignment::empty(m, n);
    let mut pools = vec![IndexSet::full(n); m];
    loop {
        let current: Vec<f64> = (0..m)
            .map(|i| user_throughput_nonoverlap(model, a.exclusive(i), i))
            .collect();
        let lowest = current.iter().copied().fold(f64::INFINITY, f64::min);
        let minimum: Vec<usize> = (0..m).filter(|&i| current[i] == lowest).collect();
        if minimum.iter().all(|&i| pools[i].is_empty()) {
            break;
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for &i in &minimum {
            for j in pools[i] {
                let gain =
                    user_throughput_nonoverlap(model, a.exclusive(i).with(j), i) - current[i];
                if best.map_or(true, |(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("some minimum user has a channel left");
        a.assign_exclusive(i, j);
        for pool in &mut pools {
            pool.remove(j);
        }
    }
    a
}

fn evaluate(
    model: &AvailabilityModel,
    a: &Assignment,
    timing: &MacTiming,
) -> Result<Option<ThroughputReport>, AnalysisError> {
    match network_throughput(model, a, timing, &Sensing::Perfect) {
        Ok(r) => Ok(Some(r)),
        Err(AnalysisError::WindowCapExceeded { .. } | AnalysisError::OverheadTooLarge { .. }) => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Every `size`-subset of `set`, in lexicographic order.
pub fn combinations(set: IndexSet, size: usize) -> Vec<IndexSet> {
    fn rec(items: &[usize], size: usize, acc: IndexSet, out: &mut Vec<IndexSet>) {
        if size == 0 {
            out.push(acc);
            return;
        }
        for (k, &x) in items.iter().enumerate() {
            if items.len() - k < size {
                break;
            }
            rec(&items[k + 1..], size - 1, acc.with(x), out);
        }
    }
    let mut out = Vec::new();
    rec(&set.to_vec(), size, IndexSet::empty(), &mut out);
    out
}

/// Candidates tried by one search, in scan order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchTrace {
    /// `(channel, holders)` for each candidate evaluated.
    pub tried: Vec<(usize, IndexSet)>,
    /// Indices into `tried` of each accepted improvement.
    pub accepted: Vec<usize>,
}

/// Looks for one channel to share with `target` that lifts every involved
/// user above `floor`. Tries converting other users' exclusive channels,
/// then joining existing shared channels, each with every set of additional
/// sharers. Returns the best candidate found.
pub fn search_potential(
    model: &AvailabilityModel,
    a: &Assignment,
    target: usize,
    floor: f64,
    timing: &MacTiming,
) -> Result<Option<Assignment>, AssignError> {
    Ok(search_potential_traced(model, a, target, floor, timing)?.0)
}

pub fn search_potential_traced(
    model: &AvailabilityModel,
    a: &Assignment,
    target: usize,
    floor: f64,
    timing: &MacTiming,
) -> Result<(Option<Assignment>, SearchTrace), AssignError> {
    let m = a.users();
    let everyone = IndexSet::full(m);
    let mut floor = floor;
    let mut best = None;
    let mut trace = SearchTrace::default();

    let mut consider = |holders: IndexSet,
                        channel: usize,
                        involved: IndexSet,
                        best: &mut Option<Assignment>,
                        floor: &mut f64|
     -> Result<(), AssignError> {
        let mut temp = a.clone();
        temp.set_holders(channel, holders);
        trace.tried.push((channel, holders));
        let Some(r) = evaluate(model, &temp, timing)? else {
            return Ok(());
        };
        let low = involved
            .iter()
            .map(|i| r.per_user[i])
            .fold(f64::INFINITY, f64::min);
        if low > *floor {
            *floor = low;
            *best = Some(temp);
            trace.accepted.push(trace.tried.len() - 1);
        }
        Ok(())
    };

    let separate = (0..m)
        .filter(|&i| i != target)
        .fold(IndexSet::empty(), |acc, i| acc.union(a.exclusive(i)));
    for channel in separate {
        let owner = a.owner(channel).expect("separate channels have an owner");
        let pair = IndexSet::singleton(target).with(owner);
        let free = everyone.difference(pair);
        let extra_max = m.saturating_sub(2);
        for size in 0..=extra_max {
            for extra in combinations(free, size) {
                let holders = pair.union(extra);
                consider(holders, channel, holders, &mut best, &mut floor)?;
            }
        }
    }

    let joined = (0..m)
        .fold(IndexSet::empty(), |acc, i| acc.union(a.shared(i)))
        .difference(a.shared(target));
    for channel in joined {
        let using = a.sharers(channel).without(target);
        let free = everyone.difference(using).without(target);
        for size in 0..=free.len() {
            for extra in combinations(free, size) {
                let holders = using.union(extra).with(target);
                consider(holders, channel, holders, &mut best, &mut floor)?;
            }
        }
    }
    Ok((best, trace))
}

/// Output of the fair overlapping greedy.
#[derive(Clone, Debug, PartialEq)]
pub struct FairResult {
    pub assignment: Assignment,
    pub report: ThroughputReport,
    /// Minimum throughput after phase one and after every committed step.
    pub minimums: Vec<f64>,
}

/// Fair overlapping greedy: starting from [`algorithm3_fair`], repeatedly
/// shares a channel with the minimum-throughput user while that raises the
/// network's minimum throughput.
pub fn algorithm4_fair(
    model: &AvailabilityModel,
    timing: &MacTiming,
    config: &GreedyConfig,
) -> Result<FairResult, AssignError> {
    config.validate()?;
    timing.validate()?;
    let mut a = algorithm3_fair(model);
    let mut report = network_throughput(model, &a, timing, &Sensing::Perfect)?;
    let mut minimums = vec![report.min()];
    loop {
        let lowest = report.min();
        let target = report
            .per_user
            .iter()
            .position(|&t| t == lowest)
            .expect("at least one user");
        let Some(candidate) = search_potential(model, &a, target, lowest, timing)? else {
            break;
        };
        let Some(next) = evaluate(model, &candidate, timing)? else {
            break;
        };
        if next.min() <= lowest {
            break;
        }
        a = candidate;
        report = next;
        minimums.push(report.min());
    }
    Ok(FairResult {
        assignment: a,
        report,
        minimums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_pair_gets_one_each() {
        let model = AvailabilityModel::constant(2, 2, 0.8).unwrap();
        let a = algorithm3_fair(&model);
        assert_eq!(a.exclusive(0).len(), 1);
        assert_eq!(a.exclusive(1).len(), 1);
    }

    #[test]
    fn single_user_takes_everything() {
        let model = AvailabilityModel::new(vec![vec![0.2, 0.7, 0.5]]).unwrap();
        assert_eq!(algorithm3_fair(&model).exclusive(0), IndexSet::full(3));
        let r =
            algorithm4_fair(&model, &MacTiming::preset_2012(), &GreedyConfig::default()).unwrap();
        assert_eq!(r.assignment, algorithm3_fair(&model));
    }

    #[test]
    fn hand_trace() {
        // Both start at zero; user 1's 0.9 is the largest gain. User 2 is then
        // the minimum and takes channel 2, reaching 0.6 < 0.9, then channel 3.
        let model = AvailabilityModel::new(vec![vec![0.9, 0.9, 0.5], vec![0.6, 0.6, 0.6]]).unwrap();
        let a = algorithm3_fair(&model);
        assert_eq!(a.exclusive(0), IndexSet::singleton(0));
        assert_eq!(a.exclusive(1), [1, 2].into_iter().collect());
    }

    #[test]
    fn fair_overlap_does_not_lower_minimum() {
        let model = AvailabilityModel::new(vec![vec![0.9, 0.9], vec![0.5, 0.5]]).unwrap();
        let timing = MacTiming::preset_2012();
        let base = network_throughput(&model, &algorithm3_fair(&model), &timing, &Sensing::Perfect)
            .unwrap()
            .min();
        let r = algorithm4_fair(&model, &timing, &GreedyConfig::default()).unwrap();
        assert!(r.report.min() >= base);
        assert!(r.minimums.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn two_user_search_tries_pairs_only() {
        let model = AvailabilityModel::new(vec![vec![0.9, 0.9], vec![0.5, 0.5]]).unwrap();
        let a = algorithm3_fair(&model);
        let (_, trace) =
            search_potential_traced(&model, &a, 1, 0.5, &MacTiming::preset_2012()).unwrap();
        assert!(!trace.tried.is_empty());
        assert!(trace.tried.iter().all(|(_, h)| h.len() == 2));
    }

    #[test]
    fn nothing_passes_an_unreachable_floor() {
        let model = AvailabilityModel::constant(3, 3, 0.8).unwrap();
        let a = algorithm3_fair(&model);
        let r = search_potential(&model, &a, 0, 1.0, &MacTiming::preset_2012()).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn three_user_scan_order() {
        // Users 1 and 2 own channels 1 and 2; user 3 owns channel 3 and is
        // the minimum. Separate channels are scanned first, each with no
        // extra sharer and then with the remaining user.
        let model = AvailabilityModel::new(vec![
            vec![0.9, 0.2, 0.2],
            vec![0.2, 0.9, 0.2],
            vec![0.6, 0.6, 0.5],
        ])
        .unwrap();
        let a =
            Assignment::from_one_based(3, &[vec![1], vec![2], vec![3]], &[vec![], vec![], vec![]])
                .unwrap();
        let (found, trace) =
            search_potential_traced(&model, &a, 2, 0.5, &MacTiming::preset_2012()).unwrap();
        let set = |v: &[usize]| v.iter().copied().collect::<IndexSet>();
        assert_eq!(
            trace.tried,
            vec![
                (0, set(&[0, 2])),
                (0, set(&[0, 1, 2])),
                (1, set(&[1, 2])),
                (1, set(&[0, 1, 2]))
            ]
        );
        let found = found.unwrap();
        let last = *trace.accepted.last().unwrap();
        let (channel, holders) = trace.tried[last];
        assert_eq!(found.holders(channel), holders);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let s: IndexSet = [1, 3, 4].into_iter().collect();
        let c: Vec<Vec<usize>> = combinations(s, 2)
            .into_iter()
            .map(IndexSet::to_vec)
            .collect();
        assert_eq!(c, vec![vec![1, 3], vec![1, 4], vec![3, 4]]);
        assert_eq!(combinations(s, 0), vec![IndexSet::empty()]);
        assert!(combinations(s, 4).is_empty());
    }

    proptest! {
        #[test]
        fn algorithm4_minimum_strictly_increases(
            rows in prop::collection::vec(prop::collection::vec(0.5f64..=0.95, 3), 2..=3),
        ) {
            let model = AvailabilityModel::new(rows).unwrap();
            let r = algorithm4_fair(&model, &MacTiming::preset_2012(), &GreedyConfig::default()).unwrap();
            prop_assert!(r.minimums.windows(2).all(|w| w[1] > w[0]));
            prop_assert!(r.assignment.validate().is_ok());
        }

        #[test]
        fn algorithm3_is_non_overlapping(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 4), 1..=4),
        ) {
            let model = AvailabilityModel::new(rows).unwrap();
            let a = algorithm3_fair(&model);
            prop_assert!(a.is_non_overlapping());
            prop_assert!(a.validate().is_ok());
        }
    }
}
