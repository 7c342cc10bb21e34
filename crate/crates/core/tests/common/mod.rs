//! Exhaustive reference computations shared by the integration tests.

#![allow(dead_code)]

use chanalloc::{Assignment, AvailabilityModel, IndexSet, SensingModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Visits every combination of one choice per contending user, calling
/// `f(choices, weight)` with the uniform weight of that combination.
fn for_each_choice(options: &[Vec<usize>], f: &mut impl FnMut(&[Option<usize>], f64)) {
    fn rec(
        options: &[Vec<usize>],
        at: usize,
        picked: &mut Vec<Option<usize>>,
        weight: f64,
        f: &mut impl FnMut(&[Option<usize>], f64),
    ) {
        if at == options.len() {
            f(picked, weight);
            return;
        }
        if options[at].is_empty() {
            picked.push(None);
            rec(options, at + 1, picked, weight, f);
            picked.pop();
            return;
        }
        let share = weight / options[at].len() as f64;
        for &c in &options[at] {
            picked.push(Some(c));
            rec(options, at + 1, picked, share, f);
            picked.pop();
        }
    }
    rec(options, 0, &mut Vec::new(), 1.0, f);
}

fn state_weight(probs: impl Iterator<Item = (f64, bool)>) -> f64 {
    probs.map(|(p, on)| if on { p } else { 1.0 - p }).product()
}

/// Expected per-user throughput over every joint availability state and
/// every uniform channel choice, with collision-free contention and a
/// uniform winner among the users that picked the same channel.
pub fn oracle_perfect(model: &AvailabilityModel, a: &Assignment, overhead: f64) -> Vec<f64> {
    let (m, n) = (model.users(), model.channels());
    let mut out = vec![0.0; m];
    for mask in 0u64..1 << (m * n) {
        let idle = |i: usize, j: usize| mask >> (i * n + j) & 1 == 1;
        let weight = state_weight(
            (0..m)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| (model.idle(i, j), idle(i, j))),
        );
        if weight == 0.0 {
            continue;
        }
        let mut options = vec![Vec::new(); m];
        for i in 0..m {
            if a.exclusive(i).iter().any(|j| idle(i, j)) {
                out[i] += weight;
            } else {
                options[i] = a.shared(i).iter().filter(|&j| idle(i, j)).collect();
            }
        }
        for_each_choice(&options, &mut |picked, w| {
            for (i, c) in picked.iter().enumerate() {
                if let Some(c) = c {
                    let claimants = picked.iter().filter(|x| **x == Some(*c)).count();
                    out[i] += weight * w * (1.0 - overhead) / claimants as f64;
                }
            }
        });
    }
    out
}

/// As [`oracle_perfect`], also enumerating every sensing outcome. Users act
/// on sensed states and earn only on truly idle channels.
pub fn oracle_imperfect(
    model: &AvailabilityModel,
    sensing: &SensingModel,
    a: &Assignment,
    overhead: f64,
) -> Vec<f64> {
    let (m, n) = (model.users(), model.channels());
    let cells = m * n;
    let mut out = vec![0.0; m];
    for truth in 0u64..1 << cells {
        for sensed in 0u64..1 << cells {
            let idle = |i: usize, j: usize| truth >> (i * n + j) & 1 == 1;
            let seen = |i: usize, j: usize| sensed >> (i * n + j) & 1 == 1;
            let mut weight = 1.0;
            for i in 0..m {
                for j in 0..n {
                    let p = model.idle(i, j);
                    weight *= if idle(i, j) { p } else { 1.0 - p };
                    let see_idle = if idle(i, j) {
                        1.0 - sensing.false_alarm(i, j)
                    } else {
                        1.0 - sensing.detection(i, j)
                    };
                    weight *= if seen(i, j) { see_idle } else { 1.0 - see_idle };
                }
            }
            if weight == 0.0 {
                continue;
            }
            let mut options = vec![Vec::new(); m];
            for i in 0..m {
                let visible: Vec<usize> = a.exclusive(i).iter().filter(|&j| seen(i, j)).collect();
                if !visible.is_empty() {
                    let good = visible.iter().filter(|&&j| idle(i, j)).count();
                    out[i] += weight * good as f64 / visible.len() as f64;
                } else {
                    options[i] = a.shared(i).iter().filter(|&j| seen(i, j)).collect();
                }
            }
            for_each_choice(&options, &mut |picked, w| {
                for (i, c) in picked.iter().enumerate() {
                    if let Some(c) = *c {
                        if idle(i, c) {
                            let claimants = picked.iter().filter(|x| **x == Some(c)).count();
                            out[i] += weight * w * (1.0 - overhead) / claimants as f64;
                        }
                    }
                }
            });
        }
    }
    out
}

pub fn three_user_fixture() -> Assignment {
    Assignment::from_one_based(
        6,
        &[vec![1], vec![2], vec![3]],
        &[vec![4, 6], vec![4, 5, 6], vec![5, 6]],
    )
    .unwrap()
}

pub fn random_model(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    low: f64,
    high: f64,
) -> AvailabilityModel {
    let rows = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(low..=high)).collect())
        .collect();
    AvailabilityModel::new(rows).unwrap()
}

/// A random valid assignment: each channel gets a uniformly random holder set.
pub fn random_assignment(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Assignment {
    let mut a = Assignment::empty(m, n);
    for j in 0..n {
        let holders = IndexSet::from_bits(rng.gen_range(0..1u64 << m));
        a.set_holders(j, holders);
    }
    a
}

/// A random assignment with at least one shared channel.
pub fn random_shared_assignment(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Assignment {
    assert!(m >= 2);
    loop {
        let a = random_assignment(rng, m, n);
        if !a.shared_channels().is_empty() {
            return a;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
