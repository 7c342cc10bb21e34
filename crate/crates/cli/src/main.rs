//! `chanalloc` command-line harness.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 no window
//! meets the collision target, 4 brute-force cap exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chanalloc::analytics::{network_throughput, network_throughput_at, ThroughputReport};
use chanalloc::assign::{read_edges, render_edges, GreedyConfig};
use chanalloc::experiment::{
    compare_optimal, gaps_csv, generate_scenario, parse_algorithms, run_experiment, write_atomic,
    AlgorithmSelector, CompareSpec, Evaluation, ExperimentSpec, Sweep,
};
use chanalloc::sim::{simulate, OverheadMode, SimConfig};
use chanalloc::{
    read_scenario, render_scenario, validate_scenario, AnalysisError, AssignError, Assignment,
    ExperimentError, FormatError, MacTiming, ModelError, Scenario, Sensing, SensingModel, SimError,
};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(
    name = "chanalloc",
    version,
    about = "Channel assignment and MAC throughput experiments"
)]
struct Cli {
    /// Worker threads for parallel sweeps and simulations.
    #[arg(long, global = true, env = "CHANALLOC_THREADS")]
    threads: Option<usize>,
    /// Directory that relative output paths resolve against.
    #[arg(long, global = true, env = "CHANALLOC_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random availability scenario.
    Gen(GenArgs),
    /// Run an assignment algorithm on a scenario.
    Assign(AssignArgs),
    /// Evaluate an assignment with the closed-form model.
    Analyze(AnalyzeArgs),
    /// Evaluate an assignment with the cycle-level simulator.
    Simulate(SimulateArgs),
    /// Run a parameter sweep over random scenarios.
    Sweep(SweepArgs),
    /// Compare the greedy algorithms with exhaustive search.
    CompareOptimal(CompareArgs),
}

#[derive(Args, Debug)]
struct TimingArgs {
    /// Named timing preset.
    #[arg(long, default_value = MacTiming::PRESET_NAME)]
    preset: String,
    /// Overrides the preset's target first-collision probability.
    #[arg(long)]
    target_collision: Option<f64>,
}

impl TimingArgs {
    fn timing(&self) -> Result<MacTiming, CliError> {
        let mut t = MacTiming::preset(&self.preset)
            .ok_or_else(|| CliError::Usage(format!("unknown timing preset {:?}", self.preset)))?;
        if let Some(eps) = self.target_collision {
            t = t.with_target(eps);
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Args, Debug)]
struct GreedyArgs {
    /// Minimum estimated gain for a sharing grant.
    #[arg(long, default_value_t = GreedyConfig::default().epsilon)]
    epsilon: f64,
    /// Overhead change that triggers re-estimation.
    #[arg(long, default_value_t = GreedyConfig::default().epsilon_delta)]
    epsilon_delta: f64,
}

impl GreedyArgs {
    fn config(&self) -> GreedyConfig {
        GreedyConfig {
            epsilon: self.epsilon,
            epsilon_delta: self.epsilon_delta,
            ..GreedyConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    users: usize,
    #[arg(long)]
    channels: usize,
    #[arg(long, default_value_t = 0.7)]
    low: f64,
    #[arg(long, default_value_t = 0.9)]
    high: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    timing: TimingArgs,
    /// Uniform detection probability; enables imperfect sensing.
    #[arg(long)]
    detection: Option<f64>,
    /// Uniform false-alarm probability; enables imperfect sensing.
    #[arg(long)]
    false_alarm: Option<f64>,
    /// Write the scenario here instead of standard output.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AssignArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = "alg2")]
    algorithm: AlgorithmSelector,
    #[command(flatten)]
    greedy: GreedyArgs,
    /// Write the edge list here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the scenario with the assignment embedded.
    #[arg(long)]
    emit_scenario: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AssignmentSource {
    #[arg(long)]
    scenario: PathBuf,
    /// Edge-list CSV; defaults to the scenario's `[assignment]` block.
    #[arg(long)]
    assignment: Option<PathBuf>,
}

impl AssignmentSource {
    fn load(&self) -> Result<(Scenario, Assignment), CliError> {
        let scenario = load_scenario(&self.scenario)?;
        let a = match &self.assignment {
            Some(path) => fs::File::open(path)
                .map_err(FormatError::from)
                .and_then(|file| read_edges(file, scenario.users(), scenario.channels()))
                .map_err(|source| CliError::Read {
                    path: path.clone(),
                    source,
                })?,
            None => scenario.assignment.clone().ok_or_else(|| {
                CliError::Usage("scenario has no [assignment] block; pass --assignment".into())
            })?,
        };
        Ok((scenario, a))
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    read_scenario(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: AssignmentSource,
    /// Evaluate at this window instead of the selected one.
    #[arg(long)]
    window: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: AssignmentSource,
    #[arg(long, default_value_t = 100_000)]
    cycles: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Winner credit: `analytic` or `timed` (non-standard extension).
    #[arg(long, default_value = "analytic")]
    mode: OverheadMode,
    #[arg(long)]
    window: Option<u32>,
    /// Write the per-user CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    users: usize,
    /// Channel count when the sweep does not vary N.
    #[arg(long)]
    channels: Option<usize>,
    #[arg(long, default_value_t = 0.7)]
    low: f64,
    #[arg(long, default_value_t = 0.9)]
    high: f64,
    #[arg(long, default_value_t = 30)]
    realizations: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated: alg1, alg2, alg3, alg4, brute-sum, brute-maxmin, rr:K.
    #[arg(long, default_value = "alg2")]
    algorithms: String,
    /// `analytic`, `simulate:CYCLES` or `both:CYCLES`.
    #[arg(long, default_value = "analytic")]
    eval: Evaluation,
    /// `N=GRID`, `W=GRID`, `eps_p=GRID` or `pf=GRID`; GRID is `a,b,c` or `a..b[:step]`.
    #[arg(long)]
    sweep: Option<Sweep>,
    /// Detection probability when sweeping `pf`.
    #[arg(long, default_value_t = 0.9)]
    detection: f64,
    #[arg(long, default_value = "analytic")]
    mode: OverheadMode,
    #[command(flatten)]
    timing: TimingArgs,
    #[command(flatten)]
    greedy: GreedyArgs,
    /// Row table; the summary goes to `<stem>.summary.csv` beside it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// User counts, e.g. `2,3`.
    #[arg(long, default_value = "2,3")]
    users: String,
    /// Channel counts, e.g. `2..6`.
    #[arg(long, default_value = "2..6")]
    channels: String,
    #[arg(long, default_value_t = 30)]
    realizations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.7)]
    low: f64,
    #[arg(long, default_value_t = 0.9)]
    high: f64,
    /// Largest M·N searched.
    #[arg(long, default_value_t = chanalloc::assign::DEFAULT_BRUTE_FORCE_CAP)]
    cap: usize,
    #[command(flatten)]
    timing: TimingArgs,
    #[command(flatten)]
    greedy: GreedyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Assign(#[from] AssignError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

const VALIDATION: u8 = 2;
const INFEASIBLE: u8 = 3;
const CAP_EXCEEDED: u8 = 4;

fn analysis_code(e: &AnalysisError) -> u8 {
    match e {
        AnalysisError::WindowCapExceeded { .. } => INFEASIBLE,
        _ => VALIDATION,
    }
}

fn assign_code(e: &AssignError) -> u8 {
    match e {
        AssignError::CapExceeded { .. } => CAP_EXCEEDED,
        AssignError::NoFeasibleAssignment => INFEASIBLE,
        AssignError::Analysis(a) => analysis_code(a),
        _ => VALIDATION,
    }
}

fn sim_code(e: &SimError) -> u8 {
    match e {
        SimError::Analysis(a) => analysis_code(a),
        _ => VALIDATION,
    }
}

fn format_code(e: &FormatError) -> u8 {
    match e {
        FormatError::Io(_) => 1,
        _ => VALIDATION,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Model(_) => VALIDATION,
            CliError::Analysis(e) => analysis_code(e),
            CliError::Assign(e) => assign_code(e),
            CliError::Sim(e) => sim_code(e),
            CliError::Format(e) | CliError::Read { source: e, .. } => format_code(e),
            CliError::Experiment(e) => match e {
                ExperimentError::Config(_) | ExperimentError::Model(_) => VALIDATION,
                ExperimentError::Analysis(e) => analysis_code(e),
                ExperimentError::Assign(e) => assign_code(e),
                ExperimentError::Sim(e) => sim_code(e),
                ExperimentError::Format(e) => format_code(e),
                ExperimentError::Io(_) => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

struct Context {
    out_dir: Option<PathBuf>,
}

impl Context {
    fn resolve(&self, path: &Path) -> PathBuf {
        match &self.out_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }

    /// Writes to the resolved path, or to standard output when `path` is `None`.
    fn emit(&self, path: Option<&Path>, text: &str) -> Result<(), CliError> {
        match path {
            Some(p) => Ok(write_atomic(&self.resolve(p), text.as_bytes())?),
            None => {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(VALIDATION);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Context {
        out_dir: cli.out_dir,
    };
    let result = match cli.command {
        Command::Gen(args) => gen(&ctx, args),
        Command::Assign(args) => assign(&ctx, args),
        Command::Analyze(args) => analyze(&ctx, args),
        Command::Simulate(args) => simulate_cmd(&ctx, args),
        Command::Sweep(args) => sweep(&ctx, args),
        Command::CompareOptimal(args) => compare(&ctx, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn gen(ctx: &Context, args: GenArgs) -> Result<(), CliError> {
    let model = generate_scenario(args.users, args.channels, args.low, args.high, args.seed)?;
    let sensing = match (args.detection, args.false_alarm) {
        (None, None) => Sensing::Perfect,
        (d, f) => Sensing::Imperfect(SensingModel::uniform(
            args.users,
            args.channels,
            d.unwrap_or(1.0),
            f.unwrap_or(0.0),
        )?),
    };
    let scenario = validate_scenario(model, None, args.timing.timing()?, sensing)?;
    ctx.emit(args.emit.as_deref(), &render_scenario(&scenario)?)
}

fn assign(ctx: &Context, args: AssignArgs) -> Result<(), CliError> {
    let mut scenario = load_scenario(&args.scenario)?;
    let a = args
        .algorithm
        .assign(&scenario.model, &scenario.timing, &args.greedy.config())?;
    let report = network_throughput(&scenario.model, &a, &scenario.timing, &scenario.sensing)?;
    eprintln!(
        "algorithm={} window={} overhead={:.6} total={:.6} min={:.6}",
        args.algorithm,
        report.window,
        report.overhead,
        report.total,
        report.min()
    );
    ctx.emit(args.out.as_deref(), &render_edges(&a))?;
    if let Some(path) = &args.emit_scenario {
        scenario.assignment = Some(a);
        write_atomic(&ctx.resolve(path), render_scenario(&scenario)?.as_bytes())?;
    }
    Ok(())
}

fn analyze(ctx: &Context, args: AnalyzeArgs) -> Result<(), CliError> {
    let (scenario, a) = args.source.load()?;
    let report = match args.window {
        Some(w) => {
            network_throughput_at(&scenario.model, &a, &scenario.timing, &scenario.sensing, w)?
        }
        None => network_throughput(&scenario.model, &a, &scenario.timing, &scenario.sensing)?,
    };
    let name = args
        .source
        .scenario
        .file_stem()
        .map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned());
    let text = format!(
        "{}\n{}\n",
        ThroughputReport::csv_header(report.users()),
        report.csv_row(&name)
    );
    ctx.emit(args.out.as_deref(), &text)
}

fn simulate_cmd(ctx: &Context, args: SimulateArgs) -> Result<(), CliError> {
    let (scenario, a) = args.source.load()?;
    let mut config = SimConfig::new(args.cycles, args.seed)
        .with_sensing(scenario.sensing.clone())
        .with_mode(args.mode);
    config.window = args.window;
    let report = simulate(&scenario.model, &a, &scenario.timing, &config)?;
    println!("{}", report.summary_line());
    if let Some(path) = &args.out {
        write_atomic(&ctx.resolve(path), report.to_csv().as_bytes())?;
    }
    Ok(())
}

fn sweep(ctx: &Context, args: SweepArgs) -> Result<(), CliError> {
    let channels = match (&args.sweep, args.channels) {
        (_, Some(n)) => n,
        (Some(Sweep::Channels(ns)), None) => ns.first().copied().unwrap_or(1),
        _ => {
            return Err(CliError::Usage(
                "--channels is required unless sweeping N".into(),
            ))
        }
    };
    let spec = ExperimentSpec {
        users: args.users,
        channels,
        low: args.low,
        high: args.high,
        realizations: args.realizations,
        master_seed: args.seed,
        algorithms: parse_algorithms(&args.algorithms)?,
        evaluation: args.eval,
        sweep: args.sweep,
        timing: args.timing.timing()?,
        greedy: args.greedy.config(),
        detection: args.detection,
        overhead_mode: args.mode,
    };
    let table = run_experiment(&spec)?;
    let out = ctx.resolve(&args.out);
    let summary = table.write(&out)?;
    println!(
        "rows={} table={} summary={}",
        table.rows.len(),
        out.display(),
        summary.display()
    );
    Ok(())
}

fn parse_counts(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid count list {s:?}; use `a,b,c` or `a..b`"));
    let values: Vec<usize> = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            (a..=b).collect()
        }
        None => s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
    };
    if values.is_empty() || values.contains(&0) {
        return Err(bad());
    }
    Ok(values)
}

fn compare(ctx: &Context, args: CompareArgs) -> Result<(), CliError> {
    let spec = CompareSpec {
        users: parse_counts(&args.users)?,
        channels: parse_counts(&args.channels)?,
        realizations: args.realizations,
        low: args.low,
        high: args.high,
        master_seed: args.seed,
        timing: args.timing.timing()?,
        greedy: args.greedy.config(),
        cap: args.cap,
    };
    let rows = compare_optimal(&spec)?;
    for &m in &spec.users {
        for objective in [
            chanalloc::assign::Objective::SumThroughput,
            chanalloc::assign::Objective::MaxMin,
        ] {
            let ratios: Vec<f64> = rows
                .iter()
                .filter(|r| r.users == m && r.objective == objective)
                .map(|r| r.ratio())
                .collect();
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            eprintln!(
                "users={m} objective={objective} instances={} mean_ratio={mean:.6}",
                ratios.len()
            );
        }
    }
    ctx.emit(args.out.as_deref(), &gaps_csv(&rows))
}
