//! Sums over subset families of independent events.
//!
//! Each quantity has a direct enumeration, used for small inputs, and a
//! count-distribution dynamic program used above the enumeration limits.
//! Tests check that the two paths agree.

/// Largest binary family enumerated subset by subset.
pub const BINARY_DIRECT_LIMIT: usize = 12;
/// Largest number of users enumerated group by group (`4^K` partitions).
pub const GROUP_DIRECT_LIMIT: usize = 6;
/// Largest ternary family enumerated outcome by outcome (`3^n` outcomes).
pub const TERNARY_DIRECT_LIMIT: usize = 8;

/// Distribution of the number of successes among independent trials.
pub fn poisson_binomial(probs: &[f64]) -> Vec<f64> {
    let mut dist = vec![0.0; probs.len() + 1];
    dist[0] = 1.0;
    for (n, &p) in probs.iter().enumerate() {
        for k in (0..=n + 1).rev() {
            let stay = dist[k] * (1.0 - p);
            let moved = if k > 0 { dist[k - 1] * p } else { 0.0 };
            dist[k] = stay + moved;
        }
    }
    dist
}

/// `E[1/(1+X)]` where `X` counts successes among independent trials with
/// the given probabilities: the chance of being picked uniformly among
/// `1 + X` candidates.
pub fn expected_share(probs: &[f64]) -> f64 {
    if probs.len() <= BINARY_DIRECT_LIMIT {
        expected_share_direct(probs)
    } else {
        expected_share_dp(probs)
    }
}

pub fn expected_share_direct(probs: &[f64]) -> f64 {
    let n = probs.len();
    (0u64..1 << n)
        .map(|mask| {
            let weight: f64 = probs
                .iter()
                .enumerate()
                .map(|(k, &p)| if mask >> k & 1 == 1 { p } else { 1.0 - p })
                .product();
            weight / f64::from(mask.count_ones() + 1)
        })
        .sum()
}

pub fn expected_share_dp(probs: &[f64]) -> f64 {
    poisson_binomial(probs)
        .iter()
        .enumerate()
        .map(|(k, &w)| w / (k + 1) as f64)
        .sum()
}

/// Per-user weights of the four mutually exclusive groups another sharer
/// of a channel can fall into. Only the last group competes for the channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupWeights {
    /// Transmits on one of its own exclusive channels.
    pub direct: f64,
    /// Cannot use the channel.
    pub blocked: f64,
    /// Contends, but for a different shared channel.
    pub elsewhere: f64,
    /// Contends for this channel.
    pub competing: f64,
}

impl GroupWeights {
    fn as_array(self) -> [f64; 4] {
        [self.direct, self.blocked, self.elsewhere, self.competing]
    }
}

/// Sum over every assignment of the other sharers to the four groups of the
/// product of their weights times `1/(1 + #competing)`.
pub fn contention_share(groups: &[GroupWeights]) -> f64 {
    if groups.len() <= GROUP_DIRECT_LIMIT {
        contention_share_direct(groups)
    } else {
        contention_share_dp(groups)
    }
}

pub fn contention_share_direct(groups: &[GroupWeights]) -> f64 {
    let k = groups.len();
    let weights: Vec<[f64; 4]> = groups.iter().map(|g| g.as_array()).collect();
    let mut total = 0.0;
    for code in 0..4usize.pow(k as u32) {
        let mut c = code;
        let mut product = 1.0;
        let mut competing = 0u32;
        for w in &weights {
            let g = c % 4;
            c /= 4;
            product *= w[g];
            if g == 3 {
                competing += 1;
            }
        }
        total += product / f64::from(competing + 1);
    }
    total
}

pub fn contention_share_dp(groups: &[GroupWeights]) -> f64 {
    let mut dist = vec![0.0; groups.len() + 1];
    dist[0] = 1.0;
    for (n, g) in groups.iter().enumerate() {
        let rest = g.direct + g.blocked + g.elsewhere;
        for k in (0..=n + 1).rev() {
            let stay = dist[k] * rest;
            let moved = if k > 0 {
                dist[k - 1] * g.competing
            } else {
                0.0
            };
            dist[k] = stay + moved;
        }
    }
    dist.iter()
        .enumerate()
        .map(|(k, &w)| w / (k + 1) as f64)
        .sum()
}

/// Per-channel outcome weights for a user's own channels under imperfect
/// sensing: `hit` is idle and sensed idle, `miss` is busy but sensed idle.
/// Any remaining mass is sensed busy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SenseWeights {
    pub hit: f64,
    pub miss: f64,
}

/// `E[k2/(k2+k3)]` over the sensed-idle channels, where `k2` counts hits and
/// `k3` counts misses; outcomes with nothing sensed idle contribute zero.
pub fn pick_success(channels: &[SenseWeights]) -> f64 {
    if channels.len() <= TERNARY_DIRECT_LIMIT {
        pick_success_direct(channels)
    } else {
        pick_success_dp(channels)
    }
}

pub fn pick_success_direct(channels: &[SenseWeights]) -> f64 {
    let n = channels.len();
    let mut total = 0.0;
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let (mut hits, mut misses, mut product) = (0u32, 0u32, 1.0);
        for w in channels {
            match c % 3 {
                0 => product *= 1.0 - w.hit - w.miss,
                1 => {
                    product *= w.hit;
                    hits += 1;
                }
                _ => {
                    product *= w.miss;
                    misses += 1;
                }
            }
            c /= 3;
        }
        if hits > 0 {
            total += product * f64::from(hits) / f64::from(hits + misses);
        }
    }
    total
}

pub fn pick_success_dp(channels: &[SenseWeights]) -> f64 {
    let n = channels.len();
    // dist[h][m]: probability of h hits and m misses so far.
    let mut dist = vec![vec![0.0; n + 1]; n + 1];
    dist[0][0] = 1.0;
    for (step, w) in channels.iter().enumerate() {
        let quiet = 1.0 - w.hit - w.miss;
        for h in (0..=step + 1).rev() {
            for m in (0..=step + 1 - h).rev() {
                let mut v = dist[h][m] * quiet;
                if h > 0 {
                    v += dist[h - 1][m] * w.hit;
                }
                if m > 0 {
                    v += dist[h][m - 1] * w.miss;
                }
                dist[h][m] = v;
            }
        }
    }
    let mut total = 0.0;
    for (h, row) in dist.iter().enumerate().skip(1) {
        for (m, &w) in row.iter().enumerate() {
            total += w * h as f64 / (h + m) as f64;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn groups(raw: &[(f64, f64, f64)]) -> Vec<GroupWeights> {
        raw.iter()
            .map(|&(p, a, b)| {
                let competing = p * a * b;
                GroupWeights {
                    direct: p * (1.0 - a),
                    blocked: 1.0 - p,
                    elsewhere: p * a - competing,
                    competing,
                }
            })
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(expected_share(&[]), 1.0);
        assert!((expected_share(&[1.0]) - 0.5).abs() < 1e-15);
        assert!((expected_share(&[0.5, 0.5]) - (0.25 + 0.5 * 0.5 + 0.25 / 3.0)).abs() < 1e-15);
        assert_eq!(pick_success(&[]), 0.0);
        let one = SenseWeights {
            hit: 0.72,
            miss: 0.02,
        };
        assert!((pick_success(&[one]) - 0.72).abs() < 1e-15);
    }

    #[test]
    fn poisson_binomial_sums_to_one() {
        let d = poisson_binomial(&[0.1, 0.5, 0.9, 0.3]);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn share_paths_agree(probs in prop::collection::vec(0.0f64..=1.0, 0..=10)) {
            let a = expected_share_direct(&probs);
            let b = expected_share_dp(&probs);
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn group_paths_agree(raw in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0), 0..=5)) {
            let g = groups(&raw);
            let a = contention_share_direct(&g);
            let b = contention_share_dp(&g);
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn ternary_paths_agree(raw in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0), 0..=6)) {
            let w: Vec<SenseWeights> = raw
                .iter()
                .map(|&(p, pd, pf)| SenseWeights { hit: p * (1.0 - pf), miss: (1.0 - p) * (1.0 - pd) })
                .collect();
            let a = pick_success_direct(&w);
            let b = pick_success_dp(&w);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
