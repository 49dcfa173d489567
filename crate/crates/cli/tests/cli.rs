//! End-to-end runs of the `emergent-irq` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_emergent-irq"));
    c.env_remove("EMERGENT_IRQ_SEED");
    c
}

fn write_config(dir: &Path, name: &str, json: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(config: &Path, extra: &[&str]) -> Output {
    bin().arg("run").arg("--config").arg(config).args(extra).output().unwrap()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn dihedral_axioms_are_exact() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"dihedral","n":7,"experiment":"axioms"}"#);
    let out = run(&cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&out);
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r[5] == "0.0" && r[7] == "true"));
    let names: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.contains(&"P1") && names.contains(&"3.5k"));
}

#[test]
fn heisenberg_limits_converge_at_rate_epsilon() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"carrier":"heisenberg","epsilon":0.5,"experiment":"converge","samples":100}"#,
    );
    let out = run(&cfg, &[]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 3);
    for r in rows {
        let rate: f64 = r[6].parse().unwrap();
        assert!((rate - 0.5).abs() < 0.05, "{r:?}");
        assert_eq!(r[4], "100");
    }
}

#[test]
fn euclidean_reconstruction_rows_pass() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"euclidean","dim":3,"experiment":"reconstruct"}"#);
    let out = run(&cfg, &["--samples", "30"]);
    assert!(out.status.success());
    for r in rows(&out) {
        assert!(r[5].parse::<f64>().unwrap() <= 1e-9, "{r:?}");
    }
}

#[test]
fn failing_checks_give_exit_status_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"sineshear","experiment":"reconstruct","samples":200}"#);
    let out = run(&cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][2].as_str(), rows[0][7].as_str()), ("6.1", "false"));
}

#[test]
fn invalid_configs_are_diagnosed() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"carrier":"heisenberg","experiment":"axioms","n":3}"#, "does not apply"),
        (r#"{"carrier":"torus","experiment":"axioms"}"#, "unknown variant"),
        (r#"{"carrier":"heisenberg","experiment":"fly"}"#, "unknown variant"),
        (r#"{"carrier":"heisenberg","experiment":"axioms","epsilon":1.5}"#, "epsilon"),
        (r#"{"carrier":"heisenberg","experiment":"axioms","samples":0}"#, "samples"),
        (r#"{"carrier":"heisenberg","experiment":"axioms","tol":-1}"#, "tol"),
        (r#"{"carrier":"heisenberg","experiment":"axioms","colour":1}"#, "unknown field"),
        (r#"{"experiment":"axioms"}"#, "no carrier"),
        (r#"{"carrier":"carnot","experiment":"axioms"}"#, "algebra"),
        (r#"{"carrier":"carnot","experiment":"axioms","algebra":{"layers":[2,1]}}"#, "algebra"),
        (r#"{"carrier":"dihedral","experiment":"converge"}"#, "uniform"),
        (r#"{"carrier":"heisenberg","experiment":"axioms""#, "invalid experiment config"),
    ];
    for (i, (json, needle)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("c{i}.json"), json);
        let out = run(&cfg, &[]);
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{json}: {err}");
        assert!(err.contains(needle), "{json}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = run(&dir.path().join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_and_json_output_works() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"heisenberg","experiment":"converge","samples":5}"#);
    let report = dir.path().join("r.json");
    let out = run(
        &cfg,
        &["--carrier", "dihedral", "--experiment", "symmetric", "--samples", "3", "--out", report.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["identity"], "6.5");
    assert_eq!(rows[0]["carrier"], "dihedral:n=5");
    assert_eq!(rows[0]["samples"], 25);
}

#[test]
fn seed_comes_from_flag_then_config_then_environment() {
    let dir = TempDir::new().unwrap();
    let plain = write_config(dir.path(), "a.json", r#"{"carrier":"heisenberg","experiment":"converge","samples":3}"#);
    let seeded = write_config(dir.path(), "b.json", r#"{"carrier":"heisenberg","experiment":"converge","samples":3,"seed":9}"#);
    let out = |cfg: &Path, flag: Option<&str>, env: Option<&str>| {
        let mut c = bin();
        c.arg("run").arg("--config").arg(cfg);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        if let Some(s) = env {
            c.env("EMERGENT_IRQ_SEED", s);
        }
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let nine = out(&plain, Some("9"), None);
    assert_eq!(out(&plain, None, Some("9")), nine);
    assert_eq!(out(&seeded, None, Some("4")), nine);
    assert_eq!(out(&seeded, Some("9"), Some("4")), nine);
    assert_ne!(out(&plain, None, None), nine);
    let bad = bin().arg("run").arg("--config").arg(&plain).env("EMERGENT_IRQ_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn divide_reports_every_level() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"heisenberg","experiment":"divide","samples":20}"#);
    let out = run(&cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let keys: Vec<(String, String)> = rows(&out).into_iter().map(|r| (r[2].clone(), r[3].clone())).collect();
    let want = [
        ("6.3-limit", "30"),
        ("6.3-loop", "-1"),
        ("6.3-loop", "1"),
        ("6.3-loop", "2"),
        ("6.3-loop", "3"),
        ("quasigroup", "-1"),
        ("quasigroup", "1"),
        ("quasigroup", "2"),
        ("quasigroup", "3"),
    ];
    let want: Vec<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(keys, want);
}

#[test]
fn derivative_of_the_heisenberg_dilation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"carrier":"heisenberg","experiment":"derivative","samples":10}"#);
    let out = run(&cfg, &[]);
    assert!(out.status.success());
    let names: Vec<String> = rows(&out).into_iter().map(|r| r[2].clone()).collect();
    assert_eq!(names, ["5.2-derivative", "5.2-derivative-morphism"]);
}

#[test]
fn listings_name_every_carrier_and_experiment() {
    let out = bin().arg("list-carriers").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for c in ["euclidean", "heisenberg", "engel", "carnot", "dihedral", "hyperbolic", "sineshear"] {
        assert!(text.lines().any(|l| l.starts_with(c)), "{c}");
    }
    let out = bin().arg("list-experiments").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for e in ["axioms", "converge", "reconstruct", "symmetric", "derivative", "divide"] {
        assert!(text.lines().any(|l| l.starts_with(e)), "{e}");
    }
}
