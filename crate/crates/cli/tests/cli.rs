use std::process::{Command, Output};

fn quiverlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverlab"))
        .args(args)
        .env_remove("QUIVERLAB_FIELD")
        .env_remove("QUIVERLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn fixture_run_passes() {
    let o = quiverlab(&["fixture", "run", "ex2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn exported_algebra_reports_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(quiverlab(&["fixture", "export", "ex2", d]).status.code(), Some(0));
    let alg = format!("{d}/ex2.alg");
    let o = quiverlab(&["algebra", "info", &alg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "dim 6"), "{}", stdout(&o));

    let o = quiverlab(&["--json", "algebra", "info", &alg]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["dim"], 6);
}

#[test]
fn criterion1_exit_codes() {
    let o = quiverlab(&["criterion1", "--alg", "ex2", "--p", "beta", "--q", "alpha"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: NoApproximation"));

    let o = quiverlab(&["criterion1", "--alg", "ex3", "--p", "beta", "--q", "alpha"]);
    assert_eq!(o.status.code(), Some(10), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: Inconclusive"));
}

#[test]
fn criterion1_json_lines_parse() {
    let o = quiverlab(&["--json", "criterion1", "--alg", "ex2", "--p", "beta", "--q", "alpha"]);
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.iter().any(|v| v["condition"] == "(ii')" && v["status"] == "Unverified"));
    assert_eq!(lines.last().unwrap()["verdict"], "NoApproximation");
}

#[test]
fn scan_over_exported_modules_grows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    quiverlab(&["fixture", "export", "ex2", d]);
    let o = quiverlab(&[
        "--json",
        "approx-scan",
        "--alg",
        &format!("{d}/ex2.alg"),
        "--modules",
        &format!("{d}/ex2.mod"),
        "--target",
        "S:1",
        "--gen",
        "modules:M{n}",
        "--n",
        "1..4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dims: Vec<u64> = stdout(&o)
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["source_dim"].as_u64())
        .collect();
    assert_eq!(dims, vec![2, 4, 6, 8]);
}

#[test]
fn field_and_seed_come_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_quiverlab"))
        .args(["algebra", "info", "ex2"])
        .env("QUIVERLAB_FIELD", "F3")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("field F 3"), "{}", stdout(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_quiverlab"))
        .args(["approx", "--alg", "ex2", "--target", "S:1", "--family", "P:2", "--minimize"])
        .env("QUIVERLAB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("seed 42"));
}

#[test]
fn bad_input_is_an_error() {
    let o = quiverlab(&["algebra", "info", "/nonexistent/file.alg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = quiverlab(&["module", "pdim", "--alg", "ex2", "NOPE"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn criterion10_on_shipped_spec() {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zipper_ex2.txt");
    let o = quiverlab(&["criterion10", "--alg", "ex2", "--spec", spec]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = quiverlab(&["criterion10", "--alg", "ex3", "--spec", spec]);
    assert_eq!(o.status.code(), Some(10), "{}", stdout(&o));
}

#[test]
fn tower_over_exported_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    quiverlab(&["fixture", "export", "ex13", d]);
    let o = quiverlab(&[
        "tower", "--alg", &format!("{d}/ex13.alg"), "--target", "S:1", "--dfile", &format!("{d}/ex13.mod"), "--budget", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let u: Vec<&str> = out.lines().filter(|l| l.starts_with('U')).collect();
    assert_eq!(u, vec!["U2   dim 4", "U4   dim 8", "U6   dim 12"]);
    let o = quiverlab(&["tower", "--alg", "ex13", "--target", "S:1", "--dfile", &format!("{d}/ex13.mod"), "--budget", "2", "--dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}
