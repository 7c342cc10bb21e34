//! Cycle-level Monte Carlo simulation of the synchronized MAC protocol.
//!
//! Each cycle draws channel availability, lets users sense, sends users with
//! a sensed-idle exclusive channel straight to transmission and runs a
//! backoff contention on the control channel for the rest.
//!
//! Cycle `c` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, in
//! a fixed order: availability for every (user, channel), then sensing
//! outcomes if sensing is imperfect, then each user's channel pick and
//! backoff in user order. Cycles run in fixed-size chunks that are reduced
//! in chunk order, so reports are bit-identical for a given seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{mac_overhead, select_window};
use crate::error::SimError;
use crate::model::{Assignment, AvailabilityModel, Sensing};
use crate::set::IndexSet;
use crate::timing::MacTiming;

const CHUNK: u64 = 8192;

/// How a successful transmission is credited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OverheadMode {
    /// Direct transmissions earn a full cycle; contention winners earn `1 − δ(W)`.
    #[default]
    Analytic,
    /// Each transmitter earns the part of the cycle left after sensing,
    /// synchronization, its backoff and every handshake up to its own.
    /// This accounting is an extension with no closed-form counterpart.
    Timed,
}

impl fmt::Display for OverheadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OverheadMode::Analytic => "analytic",
            OverheadMode::Timed => "timed",
        })
    }
}

impl FromStr for OverheadMode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(OverheadMode::Analytic),
            "timed" => Ok(OverheadMode::Timed),
            other => Err(SimError::Config(format!("unknown overhead mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub cycles: u64,
    pub seed: u64,
    pub overhead_mode: OverheadMode,
    pub sensing: Sensing,
    /// Overrides the window chosen by the collision target.
    pub window: Option<u32>,
}

impl SimConfig {
    pub fn new(cycles: u64, seed: u64) -> Self {
        SimConfig {
            cycles,
            seed,
            overhead_mode: OverheadMode::Analytic,
            sensing: Sensing::Perfect,
            window: None,
        }
    }

    pub fn with_sensing(mut self, sensing: Sensing) -> Self {
        self.sensing = sensing;
        self
    }

    pub fn with_window(mut self, window: u32) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_mode(mut self, mode: OverheadMode) -> Self {
        self.overhead_mode = mode;
        self
    }
}

/// Credit earned per successful transmission.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CreditRule {
    Analytic { overhead: f64 },
    Timed(MacTiming),
}

impl CreditRule {
    fn direct(&self) -> f64 {
        match self {
            CreditRule::Analytic { .. } => 1.0,
            CreditRule::Timed(t) => (1.0 - t.preamble_us() / t.cycle_us).max(0.0),
        }
    }

    /// `exchanges` counts handshakes and collisions up to and including the winner's.
    fn contention(&self, backoff: u32, exchanges: u32) -> f64 {
        match self {
            CreditRule::Analytic { overhead } => 1.0 - overhead,
            CreditRule::Timed(t) => {
                let elapsed = t.preamble_us()
                    + f64::from(backoff) * t.slot_us
                    + f64::from(exchanges) * t.exchange_us();
                (1.0 - elapsed / t.cycle_us).max(0.0)
            }
        }
    }
}

/// What a user did in one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// Nothing sensed idle.
    Silent,
    /// Transmitted on an exclusive channel.
    Direct { channel: usize, success: bool },
    /// Won the contention and transmitted.
    Won {
        channel: usize,
        backoff: u32,
        success: bool,
    },
    /// Drew the same smallest active backoff as another contender.
    Collided { channel: usize, backoff: u32 },
    /// Overheard another user claiming its channel and quit.
    Yielded { channel: usize },
}

impl Action {
    pub fn transmitted_on(&self) -> Option<usize> {
        match *self {
            Action::Direct { channel, .. } | Action::Won { channel, .. } => Some(channel),
            _ => None,
        }
    }

    pub fn succeeded(&self) -> bool {
        matches!(
            self,
            Action::Direct { success: true, .. } | Action::Won { success: true, .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleOutcome {
    pub idle: Vec<IndexSet>,
    pub actions: Vec<Action>,
    pub credit: Vec<f64>,
    pub contenders: usize,
    /// The first contention event was a collision.
    pub first_collision: bool,
}

/// Simulates one cycle.
pub fn simulate_cycle(
    model: &AvailabilityModel,
    assignment: &Assignment,
    window: u32,
    rule: &CreditRule,
    sensing: &Sensing,
    rng: &mut impl Rng,
) -> CycleOutcome {
    let (m, n) = (model.users(), model.channels());
    let mut idle = vec![IndexSet::empty(); m];
    for (i, slot) in idle.iter_mut().enumerate() {
        for j in 0..n {
            if rng.gen::<f64>() < model.idle(i, j) {
                slot.insert(j);
            }
        }
    }
    let seen = match sensing.model() {
        None => idle.clone(),
        Some(s) => (0..m)
            .map(|i| {
                (0..n)
                    .filter(|&j| {
                        let pass = if idle[i].contains(j) {
                            1.0 - s.false_alarm(i, j)
                        } else {
                            1.0 - s.detection(i, j)
                        };
                        rng.gen::<f64>() < pass
                    })
                    .collect()
            })
            .collect(),
    };

    let mut actions = vec![Action::Silent; m];
    let mut credit = vec![0.0; m];
    let mut contenders: Vec<(u32, usize, usize)> = Vec::new();
    for i in 0..m {
        let direct = assignment.exclusive(i).intersection(seen[i]);
        if !direct.is_empty() {
            let channel = pick(direct, rng);
            let success = idle[i].contains(channel);
            actions[i] = Action::Direct { channel, success };
            if success {
                credit[i] = rule.direct();
            }
            continue;
        }
        let shared = assignment.shared(i).intersection(seen[i]);
        if !shared.is_empty() {
            let channel = pick(shared, rng);
            let backoff = rng.gen_range(0..window);
            contenders.push((backoff, i, channel));
            actions[i] = Action::Yielded { channel };
        }
    }

    contenders.sort_unstable();
    let mut claimed = IndexSet::empty();
    let mut exchanges = 0u32;
    let mut first_collision = false;
    let mut start = 0;
    while start < contenders.len() {
        let backoff = contenders[start].0;
        let end = start
            + contenders[start..]
                .iter()
                .take_while(|c| c.0 == backoff)
                .count();
        let active: Vec<(usize, usize)> = contenders[start..end]
            .iter()
            .filter(|c| !claimed.contains(c.2))
            .map(|c| (c.1, c.2))
            .collect();
        start = end;
        if active.is_empty() {
            continue;
        }
        exchanges += 1;
        if exchanges == 1 {
            first_collision = active.len() >= 2;
        }
        if active.len() >= 2 {
            for (i, channel) in active {
                actions[i] = Action::Collided { channel, backoff };
            }
            continue;
        }
        let (i, channel) = active[0];
        claimed.insert(channel);
        let success = idle[i].contains(channel);
        actions[i] = Action::Won {
            channel,
            backoff,
            success,
        };
        if success {
            credit[i] = rule.contention(backoff, exchanges);
        }
    }

    CycleOutcome {
        idle,
        actions,
        credit,
        contenders: contenders.len(),
        first_collision,
    }
}

fn pick(set: IndexSet, rng: &mut impl Rng) -> usize {
    let k = rng.gen_range(0..set.len());
    set.iter().nth(k).expect("index below set size")
}

/// Per-cycle generator for cycle `cycle`.
pub fn cycle_rng(seed: u64, cycle: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cycle);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub cycles: u64,
    pub seed: u64,
    pub window: u32,
    pub overhead: f64,
    pub mode: OverheadMode,
    pub per_user: Vec<f64>,
    pub per_user_se: Vec<f64>,
    pub total: f64,
    pub total_se: f64,
    pub first_collision_rate: f64,
    pub first_collision_se: f64,
    /// `histogram[m]` counts cycles with `m` contenders.
    pub histogram: Vec<u64>,
}

impl SimReport {
    /// One row per user plus a totals row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,mean,se\n");
        for (i, (mean, se)) in self.per_user.iter().zip(&self.per_user_se).enumerate() {
            out.push_str(&format!("user_{},{mean},{se}\n", i + 1));
        }
        out.push_str(&format!("total,{},{}\n", self.total, self.total_se));
        out
    }

    pub fn summary_line(&self) -> String {
        let histogram: Vec<String> = self.histogram.iter().map(u64::to_string).collect();
        let credit = match self.mode {
            OverheadMode::Analytic => "analytic",
            OverheadMode::Timed => "timed(extension)",
        };
        format!(
            "cycles={} seed={} window={} overhead={:.6} credit={credit} total={:.6} se={:.6} first_collision_rate={:.6} contenders=[{}]",
            self.cycles,
            self.seed,
            self.window,
            self.overhead,
            self.total,
            self.total_se,
            self.first_collision_rate,
            histogram.join(" "),
        )
    }

    /// Fraction of cycles with `m` contenders and its standard error.
    pub fn contender_fraction(&self, m: usize) -> (f64, f64) {
        let n = self.cycles as f64;
        let f = self.histogram.get(m).copied().unwrap_or(0) as f64 / n;
        (f, (f * (1.0 - f) / n).sqrt())
    }
}

#[derive(Clone, Debug)]
struct Accumulator {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    total: f64,
    total_sq: f64,
    collisions: u64,
    histogram: Vec<u64>,
}

impl Accumulator {
    fn new(users: usize) -> Self {
        Accumulator {
            sum: vec![0.0; users],
            sum_sq: vec![0.0; users],
            total: 0.0,
            total_sq: 0.0,
            collisions: 0,
            histogram: vec![0; users + 1],
        }
    }

    fn add(&mut self, o: &CycleOutcome) {
        let mut t = 0.0;
        for (i, &c) in o.credit.iter().enumerate() {
            self.sum[i] += c;
            self.sum_sq[i] += c * c;
            t += c;
        }
        self.total += t;
        self.total_sq += t * t;
        self.collisions += u64::from(o.first_collision);
        self.histogram[o.contenders] += 1;
    }

    fn merge(mut self, other: &Accumulator) -> Self {
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self.total += other.total;
        self.total_sq += other.total_sq;
        self.collisions += other.collisions;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self
    }
}

fn mean_se(sum: f64, sum_sq: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Runs `config.cycles` independent cycles and aggregates them.
pub fn simulate(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
    config: &SimConfig,
) -> Result<SimReport, SimError> {
    if config.cycles == 0 {
        return Err(SimError::Config("cycles must be at least 1".into()));
    }
    timing.validate()?;
    let window = match config.window {
        Some(w) if w < 1 => return Err(SimError::Config("window must be at least 1".into())),
        Some(w) => w,
        None => select_window(&config.sensing.access_model(model), assignment, timing)?,
    };
    let overhead = mac_overhead(timing, window)?;
    let rule = match config.overhead_mode {
        OverheadMode::Analytic => CreditRule::Analytic { overhead },
        OverheadMode::Timed => CreditRule::Timed(*timing),
    };
    Ok(run(model, assignment, window, overhead, &rule, config))
}

fn run(
    model: &AvailabilityModel,
    assignment: &Assignment,
    window: u32,
    overhead: f64,
    rule: &CreditRule,
    config: &SimConfig,
) -> SimReport {
    let m = model.users();
    let chunks = config.cycles.div_ceil(CHUNK);
    let partials: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::new(m);
            for cycle in c * CHUNK..((c + 1) * CHUNK).min(config.cycles) {
                let mut rng = cycle_rng(config.seed, cycle);
                let o = simulate_cycle(model, assignment, window, rule, &config.sensing, &mut rng);
                acc.add(&o);
            }
            acc
        })
        .collect();
    let acc = partials.iter().fold(Accumulator::new(m), |a, b| a.merge(b));

    let n = config.cycles;
    let (per_user, per_user_se): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|i| mean_se(acc.sum[i], acc.sum_sq[i], n))
        .unzip();
    let (total, total_se) = mean_se(acc.total, acc.total_sq, n);
    let rate = acc.collisions as f64 / n as f64;
    SimReport {
        cycles: n,
        seed: config.seed,
        window,
        overhead,
        mode: config.overhead_mode,
        per_user,
        per_user_se,
        total,
        total_se,
        first_collision_rate: rate,
        first_collision_se: (rate * (1.0 - rate) / n as f64).sqrt(),
        histogram: acc.histogram,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionPoint {
    pub window: u32,
    pub rate: f64,
    pub se: f64,
}

/// Empirical first-collision rate at each window in `windows`. Collision
/// statistics do not depend on credit, so windows whose overhead would
/// exceed the cycle are still simulated.
pub fn empirical_collision_prob(
    model: &AvailabilityModel,
    assignment: &Assignment,
    timing: &MacTiming,
    windows: &[u32],
    config: &SimConfig,
) -> Result<Vec<CollisionPoint>, SimError> {
    if config.cycles == 0 {
        return Err(SimError::Config("cycles must be at least 1".into()));
    }
    timing.validate()?;
    let rule = CreditRule::Analytic { overhead: 0.0 };
    windows
        .iter()
        .map(|&w| {
            if w < 2 {
                return Err(SimError::Config(format!(
                    "window must be at least 2 (got {w})"
                )));
            }
            let r = run(model, assignment, w, 0.0, &rule, config);
            Ok(CollisionPoint {
                window: w,
                rate: r.first_collision_rate,
                se: r.first_collision_se,
            })
        })
        .collect()
}
