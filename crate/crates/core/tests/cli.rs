//! End-to-end tests of the `rf-sense` binary: subcommand surface, exit
//! codes, CSV shape and output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn rf_sense(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rf-sense"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn report_defaults_reproduce_reference_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["report"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        header,
        vec![
            "u",
            "w",
            "xi",
            "rho",
            "sigma",
            "w_opt",
            "snr_per_unit",
            "snr0_per_unit",
            "r",
            "r_max",
            "r_im",
            "s22_abs",
            "sx_out",
            "stability_margin"
        ]
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let r = row[8];
    assert!((r - 4.43).abs() < 0.05, "r = {r}");
    // Scientific notation with a '.' separator throughout.
    assert!(text.contains('e') && text.contains('.'));
}

#[test]
fn report_set_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["report", "--set", "gamma2=0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[8] - 1.0).abs() < 1e-9, "bare LC gives r = 1");
    assert!((row[11] - 1.0).abs() < 1e-9, "bare LC reflects fully");
}

#[test]
fn report_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    // Both detection keys at once.
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"eta": 0.5, "zeta": 100.0}"#).unwrap();
    let out = rf_sense(&["report", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Unknown key in --set.
    let out = rf_sense(&["report", "--set", "bogus=1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown key"));
    // Unknown key in the file.
    let path = dir.path().join("unknown.json");
    std::fs::write(&path, r#"{"omega_lcc": 1.0}"#).unwrap();
    let out = rf_sense(&["report", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Out-of-range efficiency.
    let out = rf_sense(&["report", "--set", "eta=1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (path, _) in [(&out_a, 0), (&out_b, 1)] {
        let out = rf_sense(
            &[
                "figure",
                "r-vs-gamma2",
                "--points",
                "40",
                "--out",
                path.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "identical invocations must produce identical bytes");

    let text = String::from_utf8(a).unwrap();
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("header row present");
    assert!(header.starts_with("gamma2,"));
    assert!(header.ends_with(",stable"));
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .count();
    assert_eq!(rows, 40);
}

#[test]
fn figure_default_output_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["figure", "rmax-vs-xi", "--points", "10"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("rmax-vs-xi.csv").exists());
}

#[test]
fn figure_rejects_unknown_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["figure", "no-such-figure"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("r-vs-gamma2"), "lists valid names: {err}");
}

#[test]
fn validate_filter_runs_single_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["validate", "--filter", "occupancy"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS occupancy-anchors"));
    assert!(text.contains("1 of 1 checks passed"));
}

#[test]
fn validate_unknown_filter_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["validate", "--filter", "zzz"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = rf_sense(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in ["report", "figure", "validate"] {
        assert!(text.contains(sub));
    }
}
