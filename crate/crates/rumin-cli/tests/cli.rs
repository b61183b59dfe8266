//! End-to-end tests of the command-line interface: exit codes, JSON shapes,
//! export round trips and byte-determinism of reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rumin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn rumin")
}

fn tempfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("rumin-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn basis_dimensions() {
    // dim E0^2 = 5 for n = 2
    let out = run(&["basis", "--n", "2", "--h", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 5);
    assert_eq!(v["dim_formula"], 5);

    // dim E0^0 = 1 for n = 1
    let out = run(&["basis", "--n", "1", "--h", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 1);

    // n=1, h=3: one basis vector, θ∧dx1∧dy1 = ω₁∧ω₂∧ω₃
    let out = run(&["basis", "--n", "1", "--h", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 1);
    assert_eq!(v["vectors"][0][0]["indices"], serde_json::json!([1, 2, 3]));

    // out-of-range degrees are rejected
    let out = run(&["basis", "--n", "1", "--h", "9"]);
    assert!(!out.status.success());
    let out = run(&["basis", "--n", "7", "--h", "1"]);
    assert!(!out.status.success());
}

#[test]
fn verify_exit_codes_and_determinism() {
    let out = run(&["verify", "algebra", "--n", "1", "--seed", "3"]);
    assert!(out.status.success(), "algebra suite must pass");

    let out = run(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));

    // identical bytes across runs and thread counts for a fixed seed
    let a = tempfile("det-a.json");
    let b = tempfile("det-b.json");
    let s1 = run(&[
        "verify",
        "numeric-fast",
        "--seed",
        "7",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(s1.status.success());
    let s2 = bin()
        .env("RUMIN_NUM_THREADS", "1")
        .args([
            "verify",
            "numeric-fast",
            "--seed",
            "7",
            "--out",
            b.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(s2.status.success());
    let ba = std::fs::read(&a).unwrap();
    let bb = std::fs::read(&b).unwrap();
    assert_eq!(ba, bb, "report bytes must not depend on worker count");
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn verify_csv_format() {
    let out = run(&["verify", "rumin", "--n", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "check_id,status,measured,tolerance,anchor"
    );
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn export_round_trip_and_contents() {
    let path = tempfile("dc.json");
    let out = run(&[
        "export",
        "dc-matrix",
        "--n",
        "1",
        "--h",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["source_degree"], 0);
    assert_eq!(v["target_degree"], 1);
    // entries are the horizontal gradient {X}, {Y}
    assert_eq!(v["entries"][0][0][0]["I"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["entries"][0][0][0]["c"], "1");
    assert_eq!(v["entries"][1][0][0]["I"], serde_json::json!([0, 1, 0]));
    let _ = std::fs::remove_file(&path);

    // laplacian at degree 0 is −(X² + Y²)
    let path = tempfile("lap.json");
    let out = run(&[
        "export",
        "laplacian",
        "--n",
        "1",
        "--h",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    // terms come in lexicographic multi-index order: Y² before X²
    let entry = v["entries"][0][0].as_array().unwrap();
    assert_eq!(entry.len(), 2);
    assert_eq!(entry[0]["I"], serde_json::json!([0, 2, 0]));
    assert_eq!(entry[0]["c"], "-1");
    assert_eq!(entry[1]["I"], serde_json::json!([2, 0, 0]));
    assert_eq!(entry[1]["c"], "-1");
    let _ = std::fs::remove_file(&path);

    let out = run(&[
        "export", "nonsense", "--n", "1", "--h", "0", "--out", "/tmp/x",
    ]);
    assert!(!out.status.success());
}

#[test]
fn annulus_report() {
    let out = run(&[
        "annulus", "--r1", "1", "--r2", "1.01", "--s1", "1.4", "--s2", "2.8",
    ]);
    assert!(out.status.success(), "constructed couple is admissible");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["admissible"], true);
    assert_eq!(v["window_nonempty"], true);
    assert_eq!(v["tau2_doubling_factor"], 2.0);

    // wildly off couples exit nonzero
    let out = run(&[
        "annulus", "--r1", "1", "--r2", "1.01", "--s1", "400", "--s2", "800",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn poincare_csv_and_exponent_validation() {
    let out = run(&[
        "poincare", "--h", "2", "--p", "4", "--grid", "13", "--gauss", "6", "--family", "2",
        "--seed", "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .next()
        .unwrap()
        .starts_with("form_id,h,n,norm_p,norm_inf_primitive,ratio,residual"));
    assert_eq!(text.lines().count(), 3);

    let out = run(&[
        "poincare", "--h", "2", "--p", "3", "--grid", "9", "--gauss", "4", "--family", "1",
    ]);
    assert!(!out.status.success(), "p = 3 is not an admissible exponent");
}

#[test]
fn config_file_overrides() {
    let cfg = tempfile("cfg.txt");
    std::fs::write(&cfg, "seed = 99\n# comment\nn = 1\n").unwrap();
    let a = tempfile("cfg-a.json");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "verify",
            "algebra",
            "--out",
            a.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["seed"], 99);
    assert_eq!(v["n"], 1);
    let _ = std::fs::remove_file(cfg);
    let _ = std::fs::remove_file(a);
}

#[test]
fn homotopy_csv() {
    let out = run(&[
        "homotopy",
        "--h",
        "3",
        "--grid",
        "13",
        "--gauss",
        "6",
        "--fixtures",
        "1",
        "--samples",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("fixture,h,n,residual\n"));
}
