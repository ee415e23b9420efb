use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concurrence"))
        .args(args)
        .env_remove("CONCURRENCE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(o.stdout.as_slice())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn measure_examples() {
    let o = run(&["measure", "--state", "antisymmetric-qutrit", "--cut", "0|1,2", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["quantity", "cut", "value", "direction", "restarts", "converged"]);
    assert_eq!(rows[1][1], "0|1,2");
    assert_eq!(rows[1][2], "1.15470054");
    assert_eq!(rows[1][3], "exact");

    let o = run(&["measure", "--state", "bell", "--format", "csv"]);
    assert_eq!(csv_rows(&o)[1][2], "1.00000000");

    // ρ_B is I/2, so both sides have purity 1/2 and the cap is 1.
    let o = run(&["measure", "--state", "paper-223", "--cut", "0,2|1", "--quantity", "coa-upper", "--format", "csv"]);
    assert!(o.status.success());
    let row = &csv_rows(&o)[1];
    assert_eq!(row[3], "upper-bound");
    assert!((row[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn check_rows_and_exit_codes() {
    let o = run(&["check", "theorem2", "--state", "antisymmetric-qutrit", "--x", "0.5", "--format", "jsonl"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert!((v["lhs"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);
    assert!((v["rhs"].as_f64().unwrap() - 1.0).abs() < 5e-3);
    assert_eq!(v["satisfied"], true);

    let o = run(&["check", "theorem1", "--state", "paper-223", "--x", "1", "--format", "csv"]);
    assert!(o.status.success());
    let margin: f64 = csv_rows(&o)[1][4].parse().unwrap();
    assert!(margin.abs() <= 1e-3);

    // A slack of −1 demands a margin of at least 1, which nothing here has.
    let o = run(&["--tolerance", "-1", "check", "ckw", "--state", "w"]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(run(&["check", "theorem1", "--state", "bell"]).status.code(), Some(2));
    assert_eq!(run(&["check", "ckw", "--state", "antisymmetric-qutrit"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--state", "no-such-state"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--state", "paper-2223", "--t", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--state", "bell", "--cut", "0|5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn theorem4_bound_below_threshold_is_zero() {
    let o = run(&["check", "theorem4", "--state", "paper-2223", "--t", "0.2", "--optimize", "--bound-only", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    let i = rows[0].iter().position(|c| c == "bound").unwrap();
    assert_eq!(rows[1][i], "0");
}

#[test]
fn scan_csv_shape() {
    let o = run(&["scan"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.ends_with('\n'));
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["t", "lower_bound", "exact_pair_concurrence"]);
    assert_eq!(rows.len(), 69);
    assert_eq!(rows[1][0], "0.330000000");
    assert_eq!(rows[68][0], "1.00000000");

    let o = run(&["scan", "--t", "0,0.3333333333333333,0.4", "--optimize"]);
    let rows = csv_rows(&o);
    assert_eq!(rows[0].len(), 4);
    assert_eq!(rows[1][1], "0");
    assert_eq!(rows[2][1], "0");
    assert_eq!(rows[3][1], "0.100000000");

    assert_eq!(run(&["scan", "--points", "0"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--family", "other"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    let a = run(&["--seed", "3", "fuzz", "--suite", "lemma1", "--dims", "2,2", "--count", "5", "--format", "csv"]);
    let b = run(&["--seed", "3", "fuzz", "--suite", "lemma1", "--dims", "2,2", "--count", "5", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn failure_artifacts_replay_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("art");
    let art_s = art.to_str().unwrap();
    let args = ["--tolerance", "-10", "fuzz", "--suite", "theorem2", "--dims", "2,2,2", "--count", "3", "--artifact-dir", art_s];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    let first = artifacts(&art);
    assert_eq!(first.len(), 3);
    assert_eq!(first[0].0, "theorem2-2x2x2-item00000.json");

    let again = run(&args);
    assert_eq!(again.status.code(), Some(1));
    assert_eq!(artifacts(&art), first);

    let doc: serde_json::Value = serde_json::from_slice(&first[1].1).unwrap();
    assert_eq!(doc["state"]["kind"], "pure");
    assert_eq!(doc["state"]["data"].as_array().unwrap().len(), 8);
    assert_eq!(doc["config"]["tolerance"], -10.0);

    let path = art.join(&first[1].0);
    let replay = run(&["fuzz", "--replay", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(replay.status.code(), Some(1), "the failure reproduces");
    let rows = csv_rows(&replay);
    let identical = rows[0].iter().position(|c| c == "identical").unwrap();
    assert_eq!(rows[1][identical], "true");
}

#[test]
fn saved_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out1 = dir.path().join("a.csv");
    let o = run(&[
        "--seed", "11", "--save-config", cfg.to_str().unwrap(), "--output", out1.to_str().unwrap(), "--format", "csv",
        "measure", "--state", "random-density", "--dims", "2,3", "--param", "rank=3", "--param", "seed=4",
        "--quantity", "roof", "--quantity", "assistance", "--quantity", "coa-upper",
    ]);
    assert!(o.status.success());
    let out2 = dir.path().join("b.csv");
    let o = run(&["run", cfg.to_str().unwrap(), "--output", out2.to_str().unwrap()]);
    assert!(o.status.success());
    let a = std::fs::read(&out1).unwrap();
    assert_eq!(a, std::fs::read(&out2).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn seed_comes_from_the_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_concurrence"))
        .args(["--save-config", "/dev/stdout", "--format", "csv", "measure", "--state", "bell"])
        .env("CONCURRENCE_SEED", "42")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&with_env.stdout).contains("\"seed\": 42"));
}

#[test]
fn reproduce_passes() {
    let o = run(&["reproduce", "--format", "csv"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let rows = csv_rows(&o);
    assert!(rows[1..].iter().all(|r| r.last().unwrap() == "true"));
}
