use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_krein-ext"));
    cmd.env_remove("KREIN_EXT_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("krein-ext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_is_byte_identical_per_seed() {
    for kind in ["hermitian_contraction", "exit_parameter", "passive_system"] {
        let a = run(&["gen", kind, "--dims", "4,2", "--seed", "7"]);
        let b = run(&["gen", kind, "--dims", "4,2", "--seed", "7"]);
        let other = run(&["gen", kind, "--dims", "4,2", "--seed", "8"]);
        assert!(a.status.success(), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
        assert_ne!(a.stdout, other.stdout, "{kind}");
    }
}

#[test]
fn gen_hermitian_contraction_shape() {
    let v = json(&run(&["gen", "hermitian_contraction", "--dims", "4,2", "--seed", "7"]));
    assert_eq!(v["ambient_dim"], 4);
    assert_eq!(v["dom_basis"]["cols"], 2);
    assert_eq!(v["b_column"]["rows"], 4);
}

#[test]
fn gen_exit_parameter_blocks() {
    let v = json(&run(&["gen", "exit_parameter", "--dims", "2,2", "--seed", "1"]));
    assert_eq!(v["k_dim"], 2);
    assert_eq!(v["x22"]["rows"], 2);
}

#[test]
fn bad_dims_and_unknown_suite_exit_two() {
    assert_eq!(run(&["gen", "passive_system", "--dims", "0,3"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "exit_parameter", "--dims", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "no_such_suite"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "cayley", "--dims", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_reruns_identically() {
    let args = ["verify", "--suite", "compressed_resolvent", "--count", "40", "--dims", "6", "--tol", "1e-9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["instances"], 40);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn impossible_tolerance_exits_one_with_sorted_failures() {
    let out = run(&["verify", "--suite", "schur_frobenius", "--count", "12", "--seed", "5", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let failures = json(&out)["failures"].as_array().unwrap().clone();
    assert!(!failures.is_empty());
    let seeds: Vec<u64> = failures.iter().map(|f| f["seed"].as_u64().unwrap()).collect();
    assert!(seeds.windows(2).all(|w| w[0] <= w[1]));
    assert!(seeds.iter().all(|s| (5..17).contains(s)));
}

#[test]
fn environment_tolerance_applies() {
    let out = bin()
        .args(["verify", "--suite", "cayley", "--count", "4"])
        .env("KREIN_EXT_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let tol = json(&out)["tolerance"].as_f64().unwrap();
    assert!((tol / 1e-30 - 1.0).abs() < 1e-12);
}

#[test]
fn report_on_generated_system() {
    let sys = scratch("sys.json");
    let grid = scratch("grid.json");
    let rep = scratch("report.json");
    let gen = run(&["gen", "passive_system", "--dims", "2,3", "--seed", "3", "--out", sys.to_str().unwrap()]);
    assert!(gen.status.success());
    std::fs::write(&grid, r#"{"points": [[0.1, 0.2], [-0.5, 0.0], [0.0, -0.9]]}"#).unwrap();
    let out = run(&[
        "report",
        "--system",
        sys.to_str().unwrap(),
        "--points",
        grid.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    assert_eq!(v["system"]["selfadjoint"], true);
    let names: Vec<&str> = v["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["identity"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["conjugate_symmetry", "contractive", "exit_resolvent", "minimal_transfer"]);
    for item in v["identities"].as_array().unwrap() {
        assert!(item["max_deviation"].as_f64().unwrap() < 1e-12);
    }

    std::fs::write(&grid, r#"{"points": [[1.5, 0.0]]}"#).unwrap();
    let outside = run(&["report", "--system", sys.to_str().unwrap(), "--points", grid.to_str().unwrap()]);
    assert_eq!(outside.status.code(), Some(2));
}

#[test]
fn report_rejects_malformed_system() {
    let sys = scratch("broken.json");
    let grid = scratch("grid2.json");
    std::fs::write(&sys, r#"{"in_dim": 1}"#).unwrap();
    std::fs::write(&grid, r#"{"points": [[0.0, 0.0]]}"#).unwrap();
    let out = run(&["report", "--system", sys.to_str().unwrap(), "--points", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
