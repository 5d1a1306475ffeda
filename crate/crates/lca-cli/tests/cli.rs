//! End-to-end tests of the `lca` binary: exit codes, output contracts, and
//! the gen -> sweep -> verify round trip for every algorithm.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lca"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("lca-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn params_prints_split() {
    let out = run(&["params", "--algo", "color", "--k", "6", "--d", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 1 4");

    let out = run(&["params", "--algo", "cnf", "--k", "16", "--d", "2"]);
    assert_eq!(stdout(&out).trim(), "6 6 4");
}

#[test]
fn params_infeasible_exits_3() {
    let out = run(&["params", "--algo", "color", "--k", "3", "--d", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out).trim(), "INFEASIBLE");
}

#[test]
fn unknown_flag_exits_3() {
    let out = run(&["query", "--bogus"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn query_is_deterministic() {
    let args = ["query", "--algo", "mis", "--gen", "500,4", "--seed", "11", "--vertex", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("touched="));
}

#[test]
fn seed_accepts_hex() {
    let dec = run(&["query", "--algo", "mis", "--gen", "100,3", "--seed", "255", "--vertex", "0"]);
    let hex = run(&["query", "--algo", "mis", "--gen", "100,3", "--seed", "0xff", "--vertex", "0"]);
    assert_eq!(stdout(&dec), stdout(&hex));
}

#[test]
fn seed_env_var_is_honored() {
    let flag = run(&["query", "--algo", "isc", "--gen", "100,3", "--seed", "99", "--vertex", "5"]);
    let env = bin()
        .args(["query", "--algo", "isc", "--gen", "100,3", "--vertex", "5"])
        .env("LCA_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag), stdout(&env));
}

fn round_trip(algo: &str, gen: &str, seed: &str) {
    let solution = tmp(&format!("{algo}.sol"));
    let sweep = run(&[
        "sweep",
        "--algo",
        algo,
        "--gen",
        gen,
        "--seed",
        seed,
        "--out",
        solution.to_str().unwrap(),
    ]);
    assert!(sweep.status.success(), "sweep {algo} failed: {sweep:?}");
    let verify = run(&[
        "verify",
        "--algo",
        algo,
        "--gen",
        gen,
        "--seed",
        seed,
        "--solution",
        solution.to_str().unwrap(),
    ]);
    assert!(verify.status.success(), "verify {algo} failed: {verify:?}");
    assert_eq!(stdout(&verify).trim(), "ok");
    std::fs::remove_file(solution).ok();
}

#[test]
fn sweep_verify_round_trips() {
    round_trip("mis", "400,4", "3");
    round_trip("isc", "300,3", "4");
    round_trip("broadcast", "200,3", "5");
    round_trip("color", "720,1,6,60", "6");
    round_trip("cnf", "600,1,5,60", "7");
}

#[test]
fn verify_rejects_a_corrupted_solution() {
    let solution = tmp("bad.sol");
    let gen = ["--gen", "300,4", "--seed", "8"];
    let sweep =
        run(&[&["sweep", "--algo", "mis"][..], &gen, &["--out", solution.to_str().unwrap()]]
            .concat());
    assert!(sweep.status.success());
    // flip every vertex out of the set: maximality must break
    let text = std::fs::read_to_string(&solution).unwrap();
    let broken: String = text
        .lines()
        .map(|l| if l.ends_with(",in") { l.replace(",in", ",out") } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&solution, broken).unwrap();
    let verify =
        run(&[&["verify", "--algo", "mis"][..], &gen, &["--solution", solution.to_str().unwrap()]]
            .concat());
    assert_eq!(verify.status.code(), Some(1));
    std::fs::remove_file(solution).ok();
}

#[test]
fn sweep_csv_has_stable_shape() {
    let out = run(&["sweep", "--algo", "mis", "--gen", "50,3", "--seed", "2"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vertex,answer"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.ends_with(",in") || r.ends_with(",out")));
    assert!(text.lines().any(|l| l.starts_with("# fail_count=0")));
}

#[test]
fn cnf_sweep_emits_v_lines() {
    let out = run(&["sweep", "--algo", "cnf", "--gen", "200,0,4,20", "--seed", "3"]);
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("v "));
    let last_v = text.lines().rfind(|l| l.starts_with('v')).unwrap();
    assert!(last_v.trim_end().ends_with(" 0"));
}

#[test]
fn gen_output_reparses() {
    let path = tmp("gen.graph");
    let gen = run(&[
        "gen",
        "--kind",
        "graph",
        "--gen",
        "120,4",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let query = run(&[
        "query",
        "--algo",
        "mis",
        "--graph",
        path.to_str().unwrap(),
        "--seed",
        "9",
        "--vertex",
        "0",
    ]);
    assert!(query.status.success());
    std::fs::remove_file(path).ok();
}

#[test]
fn bench_emits_the_ladder() {
    let out = run(&[
        "bench", "--algo", "mis", "--d", "3", "--sizes", "128:512", "--repeat", "2", "--jobs", "2",
        "--seed", "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,mean_touched_states,mean_us_per_query,fail_rate"));
    let ns: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["128", "256", "512"]);
}

#[test]
fn bench_touched_column_is_deterministic() {
    let args =
        ["bench", "--algo", "isc", "--d", "3", "--sizes", "64,128", "--repeat", "1", "--seed", "6"];
    let a = run(&args);
    let b = run(&args);
    let touched = |o: &Output| -> Vec<String> {
        stdout(o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect()
    };
    assert_eq!(touched(&a), touched(&b));
}

#[test]
fn mismatched_instance_flag_exits_3() {
    let out = run(&["query", "--algo", "mis", "--cnf", "/nonexistent", "--vertex", "0"]);
    assert_eq!(out.status.code(), Some(3));
}
