use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn himcf(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_himcf"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn summary(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn radial_sphere_expands_on_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = himcf(
        &["radial", "--geometry", "sphere", "--n", "2", "--r0", "1", "--r1", "0", "--t-end", "2"],
        dir.path(),
    );
    let s = summary(&out);
    assert_eq!(s["regime"]["regime"], "ExpandsForever");
    assert!(s["metrics"]["max_abs_err"].as_f64().unwrap() <= 1e-8);
    let csv = fs::read_to_string(dir.path().join("radial.csv")).unwrap();
    assert!(csv.starts_with("t,r_closed,r_numeric,abs_err\n"));
    assert!(column(&csv, "abs_err").iter().all(|e| *e <= 1e-8));
    let on_disk: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("radial_summary.json")).unwrap())
            .unwrap();
    assert_eq!(on_disk, s);
}

#[test]
fn radial_circle_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(&["radial", "--geometry", "circle", "--r0", "1", "--r1", "-2"], dir.path()));
    let t_max = s["regime"]["t_max"].as_f64().unwrap();
    assert!((t_max - 0.549306).abs() < 1e-6);
    let s = summary(&himcf(&["radial", "--geometry", "circle", "--r0", "1", "--r1", "-1"], dir.path()));
    assert_eq!(s["regime"]["regime"], "ConvergesToPointInfiniteTime");
}

#[test]
fn forced_radial_writes_brackets() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["radial", "--geometry", "cylinder", "--r0", "1", "--r1", "0.2", "--forcing", "0.3"],
        dir.path(),
    ));
    assert_eq!(s["passed"], true);
    let csv = fs::read_to_string(dir.path().join("radial.csv")).unwrap();
    assert!(csv.starts_with("t,r_numeric,r_lo,r_hi\n"));
}

#[test]
fn shrinking_circle_curve_reaches_inverse_e() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["curve", "--preset", "circle", "--r0", "1", "--speed", "-1", "--t-end", "1"],
        dir.path(),
    ));
    assert_eq!(s["termination"], "HorizonReached");
    let csv = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(csv.starts_with("t,theta,S,V,k\n"));
    let (t, s_col) = (column(&csv, "t"), column(&csv, "S"));
    let last: Vec<f64> = t.iter().zip(&s_col).filter(|(t, _)| **t == 1.0).map(|(_, s)| *s).collect();
    assert_eq!(last.len(), 128);
    assert!(last.iter().all(|s| (s - 0.367879).abs() < 1e-5));
    let svg = fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.matches("<polyline").count() == 3);
}

#[test]
fn ellipse_curve_with_both_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["curve", "--preset", "ellipse", "--a", "2", "--b", "1", "--speed", "0.5", "--both-solvers"],
        dir.path(),
    ));
    assert!(s["metrics"]["hausdorff_max"].as_f64().unwrap() <= 1e-3);
    assert!(s["metrics"]["hausdorff_window_end"].as_f64().unwrap() >= 0.5);
    assert_eq!(s["passed"], true);
    assert!(dir.path().join("curve_lagrangian.csv").exists());
}

#[test]
fn fourier_curve_is_classified() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["curve", "--preset", "fourier", "--coeffs", "1,0,0.05", "--speed", "-1.2"],
        dir.path(),
    ));
    assert!(s["outcome"].as_str().unwrap().starts_with("FiniteTime"));
    assert_eq!(s["metrics"]["outcome_agrees"], 1.0);
}

#[test]
fn convexity_loss_is_a_normal_termination() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["curve", "--preset", "ellipse", "--a", "1.2", "--b", "1", "--speed", "-2"],
        dir.path(),
    ));
    assert_eq!(s["termination"], "ConvexityLost");
    assert!(s["termination_time"].as_f64().unwrap() < 1.0);
}

#[test]
fn containment_run_keeps_the_inner_curve_inside() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&himcf(
        &["containment", "--outer", "circle:2", "--inner", "ellipse:1.2,0.8", "--outer-speed", "-1.5", "--inner-speed", "-1.5", "--t-end", "2"],
        dir.path(),
    ));
    assert_eq!(s["passed"], true);
    let csv = fs::read_to_string(dir.path().join("containment.csv")).unwrap();
    assert!(column(&csv, "margin").iter().all(|m| *m >= -1e-6 * 2.0));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("radial.json");
    fs::write(&cfg, r#"{"geometry": {"kind": "sphere_n", "n": 3}, "r0": 2.0, "r1": 0.5, "t_end": 1.0}"#).unwrap();
    let s = summary(&himcf(&["radial", "--config", cfg.to_str().unwrap(), "--r1", "0"], dir.path()));
    assert_eq!(s["regime"]["geometry"]["n"], 3);
    assert_eq!(s["regime"]["d_plus"], 2.0);
}

#[test]
fn verify_suites_pass_and_report() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["lemma4", "containment", "length"] {
        let s = summary(&himcf(&["verify", suite], dir.path()));
        assert_eq!(s["passed"], true);
        assert!(s["suites"][suite]["records"].as_array().unwrap().len() >= 2);
    }
    let s = summary(&himcf(&["verify", "lemma4"], dir.path()));
    let names: Vec<&str> = s["suites"]["lemma4"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("lemma_4_2")));
    assert!(names.iter().any(|n| n.starts_with("lemma_4_5")));
    assert!(names.contains(&"simons_sphere"));
    assert!(dir.path().join("verify_report.json").exists());
}

#[test]
fn configuration_errors_exit_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "bogus"][..],
        &["radial", "--r0", "-1"],
        &["curve", "--preset", "fourier", "--coeffs", "1,0,0.5"],
        &["radial", "--no-such-flag"],
    ] {
        let out = himcf(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"].is_string() && err["message"].is_string());
    }
    let out = himcf(&["verify", "bogus"], dir.path());
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("lemma4") && msg.contains("cross-solver"));
}
