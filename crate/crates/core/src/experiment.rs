//! Scenario generation, parameter sweeps and greedy-versus-optimal
//! comparisons, emitted as tidy CSV.
//!
//! Every row carries the master seed and realization index. The scenario
//! seed is a pure function of `(master seed, M, N, realization)`, so a row
//! can be re-derived on its own and sweeps over `W`, `ε_P` or `P_f` reuse
//! the same matrices at every point.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{network_throughput, network_throughput_at, ThroughputReport};
use crate::assign::{
    algorithm1, algorithm2, algorithm3_fair, algorithm4_fair, brute_force_all, round_robin,
    GreedyConfig, Objective,
};
use crate::error::{AssignError, ExperimentError, ModelError};
use crate::model::{Assignment, AvailabilityModel, Sensing, SensingModel};
use crate::sim::{simulate, OverheadMode, SimConfig, SimReport};
use crate::timing::MacTiming;

/// `p_ij ~ Uniform[low, high]`, i.i.d. from a ChaCha stream seeded by `seed`.
pub fn generate_scenario(
    users: usize,
    channels: usize,
    low: f64,
    high: f64,
    seed: u64,
) -> Result<AvailabilityModel, ModelError> {
    check_range(low, high)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..users)
        .map(|_| {
            (0..channels)
                .map(|_| {
                    if low == high {
                        low
                    } else {
                        rng.gen_range(low..=high)
                    }
                })
                .collect()
        })
        .collect();
    AvailabilityModel::new(rows)
}

fn check_range(low: f64, high: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&low) && (0.0..=1.0).contains(&high) && low <= high {
        Ok(())
    } else {
        Err(ModelError::Generator(format!(
            "need 0 <= low <= high <= 1 (got low = {low}, high = {high})"
        )))
    }
}

/// Seed of realization `realization` of an `M × N` scenario.
pub fn scenario_seed(master: u64, users: usize, channels: usize, realization: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((users as u64) << 48) ^ ((channels as u64) << 32) ^ realization as u64);
    rng.gen()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmSelector {
    Alg1,
    Alg2,
    Alg3,
    Alg4,
    BruteSum,
    BruteMaxMin,
    /// Round-robin with `k` holders per channel.
    RoundRobin(usize),
}

impl AlgorithmSelector {
    pub fn assign(
        &self,
        model: &AvailabilityModel,
        timing: &MacTiming,
        greedy: &GreedyConfig,
    ) -> Result<Assignment, AssignError> {
        Ok(match *self {
            AlgorithmSelector::Alg1 => algorithm1(model),
            AlgorithmSelector::Alg2 => algorithm2(model, timing, greedy)?.assignment,
            AlgorithmSelector::Alg3 => algorithm3_fair(model),
            AlgorithmSelector::Alg4 => algorithm4_fair(model, timing, greedy)?.assignment,
            AlgorithmSelector::BruteSum => {
                brute_force_all(model, timing, crate::assign::DEFAULT_BRUTE_FORCE_CAP)?
                    .sum
                    .0
            }
            AlgorithmSelector::BruteMaxMin => {
                brute_force_all(model, timing, crate::assign::DEFAULT_BRUTE_FORCE_CAP)?
                    .max_min
                    .0
            }
            AlgorithmSelector::RoundRobin(k) => round_robin(model.users(), model.channels(), k),
        })
    }
}

impl fmt::Display for AlgorithmSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSelector::Alg1 => f.write_str("alg1"),
            AlgorithmSelector::Alg2 => f.write_str("alg2"),
            AlgorithmSelector::Alg3 => f.write_str("alg3"),
            AlgorithmSelector::Alg4 => f.write_str("alg4"),
            AlgorithmSelector::BruteSum => f.write_str("brute-sum"),
            AlgorithmSelector::BruteMaxMin => f.write_str("brute-maxmin"),
            AlgorithmSelector::RoundRobin(k) => write!(f, "rr:{k}"),
        }
    }
}

impl FromStr for AlgorithmSelector {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "alg1" => AlgorithmSelector::Alg1,
            "alg2" => AlgorithmSelector::Alg2,
            "alg3" => AlgorithmSelector::Alg3,
            "alg4" => AlgorithmSelector::Alg4,
            "brute-sum" => AlgorithmSelector::BruteSum,
            "brute-maxmin" => AlgorithmSelector::BruteMaxMin,
            other => {
                let k = other
                    .strip_prefix("rr:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| config(format!("unknown algorithm {other:?}")))?;
                AlgorithmSelector::RoundRobin(k)
            }
        })
    }
}

/// Parses a comma-separated list of algorithms.
pub fn parse_algorithms(s: &str) -> Result<Vec<AlgorithmSelector>, ExperimentError> {
    let list = s
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() {
        return Err(config("no algorithm selected"));
    }
    Ok(list)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Analytic,
    Simulate { cycles: u64 },
    Both { cycles: u64 },
}

impl Evaluation {
    pub const DEFAULT_CYCLES: u64 = 100_000;

    fn analytic(&self) -> bool {
        !matches!(self, Evaluation::Simulate { .. })
    }

    fn cycles(&self) -> Option<u64> {
        match *self {
            Evaluation::Analytic => None,
            Evaluation::Simulate { cycles } | Evaluation::Both { cycles } => Some(cycles),
        }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Analytic => f.write_str("analytic"),
            Evaluation::Simulate { cycles } => write!(f, "simulate:{cycles}"),
            Evaluation::Both { cycles } => write!(f, "both:{cycles}"),
        }
    }
}

impl FromStr for Evaluation {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, cycles) = match s.trim().split_once(':') {
            Some((kind, n)) => {
                let n: u64 = n
                    .parse()
                    .map_err(|_| config(format!("invalid cycle count {n:?}")))?;
                (kind, Some(n))
            }
            None => (s.trim(), None),
        };
        if cycles == Some(0) {
            return Err(config("cycles must be at least 1"));
        }
        let cycles = cycles.unwrap_or(Self::DEFAULT_CYCLES);
        match kind {
            "analytic" if s.trim() == "analytic" => Ok(Evaluation::Analytic),
            "simulate" => Ok(Evaluation::Simulate { cycles }),
            "both" => Ok(Evaluation::Both { cycles }),
            _ => Err(config(format!("unknown evaluation {s:?}"))),
        }
    }
}

/// Swept parameter and its grid.
#[derive(Clone, Debug, PartialEq)]
pub enum Sweep {
    Channels(Vec<usize>),
    Window(Vec<u32>),
    TargetCollision(Vec<f64>),
    FalseAlarm(Vec<f64>),
}

impl Sweep {
    pub fn name(&self) -> &'static str {
        match self {
            Sweep::Channels(_) => "N",
            Sweep::Window(_) => "W",
            Sweep::TargetCollision(_) => "eps_p",
            Sweep::FalseAlarm(_) => "pf",
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::Channels(v) => v.iter().map(|&n| n as f64).collect(),
            Sweep::Window(v) => v.iter().map(|&w| f64::from(w)).collect(),
            Sweep::TargetCollision(v) | Sweep::FalseAlarm(v) => v.clone(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Sweep::Channels(v) => v.len(),
            Sweep::Window(v) => v.len(),
            Sweep::TargetCollision(v) | Sweep::FalseAlarm(v) => v.len(),
        }
    }
}

impl FromStr for Sweep {
    type Err = ExperimentError;

    /// `N=4..8`, `W=2,4,8,16`, `eps_p=0.01..0.05:0.01`, `pf=0.1,0.15`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, grid) = s
            .split_once('=')
            .ok_or_else(|| config(format!("sweep must look like VAR=GRID (got {s:?})")))?;
        let values = parse_grid(grid)?;
        let integers = || -> Result<Vec<u64>, ExperimentError> {
            values
                .iter()
                .map(|&v| {
                    if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 {
                        Ok(v as u64)
                    } else {
                        Err(config(format!("{name} grid needs integers (got {v})")))
                    }
                })
                .collect()
        };
        let sweep = match name.trim() {
            "N" | "n" => Sweep::Channels(integers()?.into_iter().map(|n| n as usize).collect()),
            "W" | "w" => Sweep::Window(integers()?.into_iter().map(|w| w as u32).collect()),
            "eps_p" => Sweep::TargetCollision(values),
            "pf" => Sweep::FalseAlarm(values),
            other => return Err(config(format!("unknown sweep variable {other:?}"))),
        };
        Ok(sweep)
    }
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, ExperimentError> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| config(format!("invalid number {t:?} in sweep grid")))
    };
    let values = if let Some((from, rest)) = grid.split_once("..") {
        let (to, step) = match rest.split_once(':') {
            Some((to, step)) => (number(to)?, number(step)?),
            None => (number(rest)?, 1.0),
        };
        let from = number(from)?;
        if step <= 0.0 || to < from {
            return Err(config(format!("empty or invalid range {grid:?}")));
        }
        let count = ((to - from) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(config(format!("range {grid:?} has too many points")));
        }
        (0..count).map(|k| from + k as f64 * step).collect()
    } else {
        grid.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(config("empty sweep grid"));
    }
    Ok(values)
}

fn config(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(msg.into())
}

/// A full sweep description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub users: usize,
    /// Channel count when the sweep does not vary `N`.
    pub channels: usize,
    pub low: f64,
    pub high: f64,
    pub realizations: usize,
    pub master_seed: u64,
    pub algorithms: Vec<AlgorithmSelector>,
    pub evaluation: Evaluation,
    pub sweep: Option<Sweep>,
    pub timing: MacTiming,
    pub greedy: GreedyConfig,
    /// Detection probability used when `P_f` is swept.
    pub detection: f64,
    pub overhead_mode: OverheadMode,
}

impl ExperimentSpec {
    pub fn new(users: usize, channels: usize) -> Self {
        ExperimentSpec {
            users,
            channels,
            low: 0.7,
            high: 0.9,
            realizations: 30,
            master_seed: 0,
            algorithms: vec![AlgorithmSelector::Alg2],
            evaluation: Evaluation::Analytic,
            sweep: None,
            timing: MacTiming::default(),
            greedy: GreedyConfig::default(),
            detection: 0.9,
            overhead_mode: OverheadMode::Analytic,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        check_range(self.low, self.high)?;
        if self.realizations == 0 {
            return Err(config("realizations must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(config("no algorithm selected"));
        }
        if !(0.0..=1.0).contains(&self.detection) {
            return Err(config(format!(
                "detection probability {} outside [0, 1]",
                self.detection
            )));
        }
        self.timing.validate()?;
        self.greedy.validate()?;
        match &self.sweep {
            Some(s) if s.len() == 0 => return Err(config("empty sweep grid")),
            Some(Sweep::Window(ws)) if ws.iter().any(|&w| w < 1) => {
                return Err(config("swept windows must be at least 1"))
            }
            Some(Sweep::TargetCollision(v)) if v.iter().any(|&e| !(e > 0.0 && e < 1.0)) => {
                return Err(config(
                    "swept target collision probabilities must lie in (0, 1)",
                ))
            }
            Some(Sweep::FalseAlarm(v)) if v.iter().any(|&e| !(0.0..=1.0).contains(&e)) => {
                return Err(config("swept false-alarm probabilities must lie in [0, 1]"))
            }
            _ => {}
        }
        Ok(())
    }

    fn points(&self) -> usize {
        self.sweep.as_ref().map_or(1, Sweep::len)
    }

    fn sweep_name(&self) -> &'static str {
        self.sweep.as_ref().map_or("none", Sweep::name)
    }
}

/// One (sweep point, realization, algorithm) evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub sweep: &'static str,
    pub point: usize,
    pub value: f64,
    pub realization: usize,
    pub master_seed: u64,
    pub scenario_seed: u64,
    pub algorithm: AlgorithmSelector,
    pub users: usize,
    pub channels: usize,
    pub window: u32,
    pub overhead: f64,
    pub analytic: Option<ThroughputReport>,
    pub sim: Option<SimReport>,
}

impl ExperimentRow {
    pub const HEADER: &'static [&'static str] = &[
        "sweep",
        "value",
        "realization",
        "master_seed",
        "scenario_seed",
        "algorithm",
        "users",
        "channels",
        "window",
        "overhead",
        "total",
        "min",
        "per_user",
        "error_bound",
        "collision_prob",
        "sim_total",
        "sim_total_se",
        "sim_min",
        "sim_per_user",
        "sim_collision_rate",
        "sim_collision_se",
    ];

    fn record(&self) -> Vec<String> {
        let joined = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let a = self.analytic.as_ref();
        let s = self.sim.as_ref();
        vec![
            self.sweep.to_string(),
            self.value.to_string(),
            self.realization.to_string(),
            self.master_seed.to_string(),
            self.scenario_seed.to_string(),
            self.algorithm.to_string(),
            self.users.to_string(),
            self.channels.to_string(),
            self.window.to_string(),
            self.overhead.to_string(),
            opt(a.map(|r| r.total)),
            opt(a.map(ThroughputReport::min)),
            a.map_or_else(String::new, |r| joined(&r.per_user)),
            opt(a.map(|r| r.error_bound)),
            opt(a.map(|r| r.collision_prob)),
            opt(s.map(|r| r.total)),
            opt(s.map(|r| r.total_se)),
            opt(s.map(|r| r.per_user.iter().copied().fold(f64::INFINITY, f64::min))),
            s.map_or_else(String::new, |r| joined(&r.per_user)),
            opt(s.map(|r| r.first_collision_rate)),
            opt(s.map(|r| r.first_collision_se)),
        ]
    }
}

/// Means over realizations for one (sweep point, algorithm).
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub sweep: &'static str,
    pub value: f64,
    pub algorithm: AlgorithmSelector,
    pub realizations: usize,
    pub window: f64,
    pub overhead: f64,
    pub total: Option<f64>,
    pub min: Option<f64>,
    pub error_bound: Option<f64>,
    pub sim_total: Option<f64>,
    pub sim_min: Option<f64>,
    pub sim_collision_rate: Option<f64>,
}

impl SummaryRow {
    pub const HEADER: &'static [&'static str] = &[
        "sweep",
        "value",
        "algorithm",
        "realizations",
        "window",
        "overhead",
        "total",
        "min",
        "error_bound",
        "sim_total",
        "sim_min",
        "sim_collision_rate",
    ];

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        vec![
            self.sweep.to_string(),
            self.value.to_string(),
            self.algorithm.to_string(),
            self.realizations.to_string(),
            self.window.to_string(),
            self.overhead.to_string(),
            opt(self.total),
            opt(self.min),
            opt(self.error_bound),
            opt(self.sim_total),
            opt(self.sim_min),
            opt(self.sim_collision_rate),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentTable {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentTable {
    pub fn rows_csv(&self) -> String {
        to_csv(
            ExperimentRow::HEADER,
            self.rows.iter().map(ExperimentRow::record),
        )
    }

    pub fn summary_csv(&self) -> String {
        to_csv(
            SummaryRow::HEADER,
            self.summary.iter().map(SummaryRow::record),
        )
    }

    /// Writes the rows to `path` and the summary to `<stem>.summary.csv`
    /// next to it. Returns the summary path.
    pub fn write(&self, path: &Path) -> Result<PathBuf, ExperimentError> {
        let summary = summary_path(path);
        write_atomic(path, self.rows_csv().as_bytes())?;
        write_atomic(&summary, self.summary_csv().as_bytes())?;
        Ok(summary)
    }
}

pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or_else(|| "experiment".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.summary.csv"))
}

fn to_csv(header: &[&str], records: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .expect("writing to memory cannot fail");
    for r in records {
        w.write_record(&r).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

struct Job {
    point: usize,
    realization: usize,
}

/// Runs every (sweep point, realization) in parallel and returns rows in
/// canonical order: sweep point, realization, then algorithm as listed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentTable, ExperimentError> {
    spec.validate()?;
    let jobs: Vec<Job> = (0..spec.points())
        .flat_map(|point| (0..spec.realizations).map(move |realization| Job { point, realization }))
        .collect();
    let mut rows: Vec<ExperimentRow> = jobs
        .par_iter()
        .map(|job| run_job(spec, job))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let order = |a: &AlgorithmSelector| spec.algorithms.iter().position(|x| x == a);
    rows.sort_by_key(|r| (r.point, r.realization, order(&r.algorithm)));
    let summary = summarize(spec, &rows);
    Ok(ExperimentTable { rows, summary })
}

fn run_job(spec: &ExperimentSpec, job: &Job) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let value = spec.sweep.as_ref().map_or(0.0, |s| s.values()[job.point]);
    let channels = match &spec.sweep {
        Some(Sweep::Channels(ns)) => ns[job.point],
        _ => spec.channels,
    };
    let mut timing = spec.timing;
    if let Some(Sweep::TargetCollision(eps)) = &spec.sweep {
        timing = timing.with_target(eps[job.point]);
    }
    let window = match &spec.sweep {
        Some(Sweep::Window(ws)) => Some(ws[job.point]),
        _ => None,
    };
    let seed = scenario_seed(spec.master_seed, spec.users, channels, job.realization);
    let model = generate_scenario(spec.users, channels, spec.low, spec.high, seed)?;
    let sensing = match &spec.sweep {
        Some(Sweep::FalseAlarm(pf)) => Sensing::Imperfect(SensingModel::uniform(
            spec.users,
            channels,
            spec.detection,
            pf[job.point],
        )?),
        _ => Sensing::Perfect,
    };

    spec.algorithms
        .iter()
        .map(|&algorithm| {
            let a = algorithm.assign(&model, &timing, &spec.greedy)?;
            let analytic = if spec.evaluation.analytic() {
                Some(match window {
                    Some(w) => network_throughput_at(&model, &a, &timing, &sensing, w)?,
                    None => network_throughput(&model, &a, &timing, &sensing)?,
                })
            } else {
                None
            };
            let sim = match spec.evaluation.cycles() {
                Some(cycles) => {
                    let mut cfg = SimConfig::new(cycles, seed)
                        .with_sensing(sensing.clone())
                        .with_mode(spec.overhead_mode);
                    cfg.window = window;
                    Some(simulate(&model, &a, &timing, &cfg)?)
                }
                None => None,
            };
            let (window, overhead) = match (&analytic, &sim) {
                (Some(r), _) => (r.window, r.overhead),
                (None, Some(s)) => (s.window, s.overhead),
                (None, None) => unreachable!("every evaluation mode produces a report"),
            };
            Ok(ExperimentRow {
                sweep: spec.sweep_name(),
                point: job.point,
                value,
                realization: job.realization,
                master_seed: spec.master_seed,
                scenario_seed: seed,
                algorithm,
                users: spec.users,
                channels,
                window,
                overhead,
                analytic,
                sim,
            })
        })
        .collect()
}

fn summarize(spec: &ExperimentSpec, rows: &[ExperimentRow]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for point in 0..spec.points() {
        for &algorithm in &spec.algorithms {
            let group: Vec<&ExperimentRow> = rows
                .iter()
                .filter(|r| r.point == point && r.algorithm == algorithm)
                .collect();
            let Some(first) = group.first() else { continue };
            let mean = |f: &dyn Fn(&ExperimentRow) -> Option<f64>| -> Option<f64> {
                let values: Option<Vec<f64>> = group.iter().map(|r| f(r)).collect();
                values.map(|v| v.iter().sum::<f64>() / v.len() as f64)
            };
            let sim_min = |r: &ExperimentRow| {
                r.sim
                    .as_ref()
                    .map(|s| s.per_user.iter().copied().fold(f64::INFINITY, f64::min))
            };
            out.push(SummaryRow {
                sweep: first.sweep,
                value: first.value,
                algorithm,
                realizations: group.len(),
                window: mean(&|r| Some(f64::from(r.window))).unwrap_or_default(),
                overhead: mean(&|r| Some(r.overhead)).unwrap_or_default(),
                total: mean(&|r| r.analytic.as_ref().map(|a| a.total)),
                min: mean(&|r| r.analytic.as_ref().map(ThroughputReport::min)),
                error_bound: mean(&|r| r.analytic.as_ref().map(|a| a.error_bound)),
                sim_total: mean(&|r| r.sim.as_ref().map(|s| s.total)),
                sim_min: mean(&sim_min),
                sim_collision_rate: mean(&|r| r.sim.as_ref().map(|s| s.first_collision_rate)),
            });
        }
    }
    out
}

/// Instances for the greedy-versus-optimal comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareSpec {
    pub users: Vec<usize>,
    pub channels: Vec<usize>,
    pub realizations: usize,
    pub low: f64,
    pub high: f64,
    pub master_seed: u64,
    pub timing: MacTiming,
    pub greedy: GreedyConfig,
    pub cap: usize,
}

impl CompareSpec {
    pub fn new(users: Vec<usize>, channels: Vec<usize>) -> Self {
        CompareSpec {
            users,
            channels,
            realizations: 30,
            low: 0.7,
            high: 0.9,
            master_seed: 0,
            timing: MacTiming::default(),
            greedy: GreedyConfig::default(),
            cap: crate::assign::DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

/// Greedy value against the exhaustive optimum for one instance and objective.
/// The sum objective compares the overlapping greedy; max-min compares the
/// fair overlapping greedy.
#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub users: usize,
    pub channels: usize,
    pub realization: usize,
    pub master_seed: u64,
    pub scenario_seed: u64,
    pub objective: Objective,
    pub greedy: f64,
    pub optimal: f64,
    /// `(optimal − greedy) / optimal`, or 0 when the optimum is 0.
    pub gap: f64,
}

impl GapRow {
    pub const HEADER: &'static [&'static str] = &[
        "users",
        "channels",
        "realization",
        "master_seed",
        "scenario_seed",
        "objective",
        "greedy",
        "optimal",
        "gap",
    ];

    fn record(&self) -> Vec<String> {
        vec![
            self.users.to_string(),
            self.channels.to_string(),
            self.realization.to_string(),
            self.master_seed.to_string(),
            self.scenario_seed.to_string(),
            self.objective.to_string(),
            self.greedy.to_string(),
            self.optimal.to_string(),
            self.gap.to_string(),
        ]
    }

    /// `greedy / optimal`, or 1 when the optimum is 0.
    pub fn ratio(&self) -> f64 {
        if self.optimal > 0.0 {
            self.greedy / self.optimal
        } else {
            1.0
        }
    }
}

pub fn gaps_csv(rows: &[GapRow]) -> String {
    to_csv(GapRow::HEADER, rows.iter().map(GapRow::record))
}

/// Runs both greedy algorithms and the exhaustive search on every instance.
/// Rows are ordered by `M`, `N`, realization, then objective.
pub fn compare_optimal(spec: &CompareSpec) -> Result<Vec<GapRow>, ExperimentError> {
    check_range(spec.low, spec.high)?;
    spec.timing.validate()?;
    spec.greedy.validate()?;
    if spec.realizations == 0 {
        return Err(config("realizations must be at least 1"));
    }
    if spec.users.is_empty() || spec.channels.is_empty() {
        return Err(config("need at least one user count and one channel count"));
    }
    for &m in &spec.users {
        for &n in &spec.channels {
            if m * n > spec.cap {
                return Err(AssignError::CapExceeded {
                    users: m,
                    channels: n,
                    cap: spec.cap,
                }
                .into());
            }
        }
    }
    let instances: Vec<(usize, usize, usize)> = spec
        .users
        .iter()
        .flat_map(|&m| {
            spec.channels
                .iter()
                .flat_map(move |&n| (0..spec.realizations).map(move |r| (m, n, r)))
        })
        .collect();
    let rows = instances
        .par_iter()
        .map(
            |&(m, n, realization)| -> Result<[GapRow; 2], ExperimentError> {
                let seed = scenario_seed(spec.master_seed, m, n, realization);
                let model = generate_scenario(m, n, spec.low, spec.high, seed)?;
                let optima = brute_force_all(&model, &spec.timing, spec.cap)?;
                let sum = algorithm2(&model, &spec.timing, &spec.greedy)?;
                let sum =
                    network_throughput(&model, &sum.assignment, &spec.timing, &Sensing::Perfect)?
                        .total;
                let fair = algorithm4_fair(&model, &spec.timing, &spec.greedy)?
                    .report
                    .min();
                let row = |objective, greedy: f64, optimal: f64| GapRow {
                    users: m,
                    channels: n,
                    realization,
                    master_seed: spec.master_seed,
                    scenario_seed: seed,
                    objective,
                    greedy,
                    optimal,
                    gap: if optimal > 0.0 {
                        (optimal - greedy) / optimal
                    } else {
                        0.0
                    },
                };
                Ok([
                    row(Objective::SumThroughput, sum, optima.sum.1),
                    row(Objective::MaxMin, fair, optima.max_min.1),
                ])
            },
        )
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}
