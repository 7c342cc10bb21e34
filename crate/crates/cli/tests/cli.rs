use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chanalloc"))
        .current_dir(dir)
        .env_remove("CHANALLOC_OUT_DIR")
        .env_remove("CHANALLOC_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn scenario_round_trips_through_gen_and_assign() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = run(
        d,
        &[
            "gen",
            "--users",
            "3",
            "--channels",
            "5",
            "--seed",
            "7",
            "--emit",
            "s.toml",
        ],
    );
    assert_eq!(code(&gen), 0);
    let again = run(
        d,
        &["gen", "--users", "3", "--channels", "5", "--seed", "7"],
    );
    assert_eq!(
        stdout(&again),
        fs::read_to_string(d.join("s.toml")).unwrap()
    );

    let assign = run(
        d,
        &[
            "assign",
            "--scenario",
            "s.toml",
            "--algorithm",
            "alg1",
            "--out",
            "e.csv",
            "--emit-scenario",
            "a.toml",
        ],
    );
    assert_eq!(
        code(&assign),
        0,
        "{}",
        String::from_utf8_lossy(&assign.stderr)
    );
    let edges = fs::read_to_string(d.join("e.csv")).unwrap();
    assert!(edges.starts_with("user,channel,kind\n"));
    assert_eq!(edges.lines().count(), 6);

    let from_block = run(d, &["analyze", "--scenario", "a.toml"]);
    let from_edges = run(
        d,
        &["analyze", "--scenario", "s.toml", "--assignment", "e.csv"],
    );
    assert_eq!(code(&from_block), 0);
    let row = |o: &Output| {
        stdout(o)
            .lines()
            .nth(1)
            .unwrap()
            .split_once(',')
            .unwrap()
            .1
            .to_string()
    };
    assert_eq!(row(&from_block), row(&from_edges));
    assert!(stdout(&from_block)
        .starts_with("scenario,users,channels,window,overhead,t_1,t_2,t_3,total"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(
        d,
        &["gen", "--users", "3", "--channels", "4", "--emit", "s.toml"],
    );
    run(
        d,
        &[
            "assign",
            "--scenario",
            "s.toml",
            "--emit-scenario",
            "a.toml",
            "--out",
            "e.csv",
        ],
    );
    let args = [
        "simulate",
        "--scenario",
        "a.toml",
        "--cycles",
        "5000",
        "--seed",
        "3",
        "--out",
        "sim.csv",
    ];
    let first = run(d, &args);
    assert_eq!(code(&first), 0);
    let csv = fs::read_to_string(d.join("sim.csv")).unwrap();
    let second = run(d, &args);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(csv, fs::read_to_string(d.join("sim.csv")).unwrap());
    assert!(stdout(&first).contains("credit=analytic"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn sweep_honours_out_dir_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--users",
        "3",
        "--algorithms",
        "alg1,rr:1",
        "--sweep",
        "N=3..4",
        "--realizations",
        "2",
        "--out",
        "t.csv",
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_chanalloc"))
        .current_dir(dir.path())
        .env("CHANALLOC_OUT_DIR", "results")
        .env("CHANALLOC_THREADS", "2")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("results/t.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 2 * 2 * 2);
    let summary = fs::read_to_string(dir.path().join("results/t.summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2);

    let single = run(dir.path(), &args);
    assert_eq!(code(&single), 0);
    assert_eq!(fs::read_to_string(dir.path().join("t.csv")).unwrap(), table);
}

#[test]
fn compare_optimal_gaps_are_non_negative() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "compare-optimal",
            "--users",
            "2",
            "--channels",
            "2..3",
            "--realizations",
            "2",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rows = text.lines();
    assert_eq!(
        rows.next().unwrap(),
        "users,channels,realization,master_seed,scenario_seed,objective,greedy,optimal,gap"
    );
    let gaps: Vec<f64> = rows
        .map(|r| r.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 8);
    assert!(gaps.iter().all(|&g| g >= 0.0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(
        d,
        &["gen", "--users", "3", "--channels", "4", "--emit", "s.toml"],
    );

    let bad_range = run(
        d,
        &[
            "gen",
            "--users",
            "2",
            "--channels",
            "2",
            "--low",
            "0.9",
            "--high",
            "0.1",
        ],
    );
    assert_eq!(code(&bad_range), 2);
    let bad_algorithm = run(
        d,
        &["assign", "--scenario", "s.toml", "--algorithm", "alg9"],
    );
    assert_eq!(code(&bad_algorithm), 2);
    fs::write(
        d.join("broken.toml"),
        "users = 1\nchannels = 1\navailability = [[2.0]]\n",
    )
    .unwrap();
    let bad_scenario = run(d, &["assign", "--scenario", "broken.toml"]);
    assert_eq!(code(&bad_scenario), 2);
    assert!(String::from_utf8_lossy(&bad_scenario.stderr).contains("broken.toml"));
    let no_block = run(d, &["analyze", "--scenario", "s.toml"]);
    assert_eq!(code(&no_block), 2);

    let infeasible = run(
        d,
        &[
            "sweep",
            "--users",
            "4",
            "--channels",
            "4",
            "--algorithms",
            "rr:4",
            "--sweep",
            "eps_p=1e-7",
            "--realizations",
            "1",
            "--out",
            "x.csv",
        ],
    );
    assert_eq!(
        code(&infeasible),
        3,
        "{}",
        String::from_utf8_lossy(&infeasible.stderr)
    );
    assert!(!d.join("x.csv").exists());

    let cap = run(
        d,
        &[
            "compare-optimal",
            "--users",
            "3",
            "--channels",
            "7",
            "--realizations",
            "1",
        ],
    );
    assert_eq!(code(&cap), 4);

    let missing = run(d, &["analyze", "--scenario", "missing.toml"]);
    assert_eq!(code(&missing), 1);
}
