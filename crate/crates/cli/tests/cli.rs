//! End-to-end tests of the binary: artifacts, exit codes, and flag
//! handling. Sweeps here use short traces to keep runtimes low.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eei-bma"));
    cmd.env("EEI_BMA_LOG", "quiet");
    cmd
}

fn fast_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(
        &path,
        "seed = 5\n\n[traffic]\nn_frames = 400\n\n[train]\nepochs = 20\n",
    )
    .unwrap();
    path
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = fast_config(dir.path());
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for name in [
        "resolved_config.toml",
        "eval_report.json",
        "energy_report.json",
        "energy_report.csv",
    ] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let csv = std::fs::read_to_string(out.join("energy_report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "header plus one data row");

    let eval: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("eval_report.json")).unwrap())
            .unwrap();
    assert!(eval["rmse"].as_f64().unwrap() >= 0.0);
    assert_eq!(eval["p_true_per_node"].as_array().unwrap().len(), 20);
}

#[test]
fn resolved_config_reloads_to_same_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = fast_config(dir.path());
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    assert!(bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out1)
        .status()
        .unwrap()
        .success());
    // Re-run from the echoed config; reports must match byte for byte.
    assert!(bin()
        .args(["run", "--config"])
        .arg(out1.join("resolved_config.toml"))
        .arg("--out")
        .arg(&out2)
        .status()
        .unwrap()
        .success());
    for name in ["eval_report.json", "energy_report.json", "energy_report.csv"] {
        assert_eq!(
            std::fs::read(out1.join(name)).unwrap(),
            std::fs::read(out2.join(name)).unwrap(),
            "{name} differs"
        );
    }
}

#[test]
fn sweep_flags_override_config_and_row_count_matches() {
    let dir = tempfile::tempdir().unwrap();
    let config = fast_config(dir.path());
    let out = dir.path().join("out");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--axis", "n_total", "--values", "20,30,40,50"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("sweep_n_total.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5, "header plus four data rows");
    assert!(csv.lines().nth(1).unwrap().starts_with("n_total,20"));
    assert!(out.join("sweep_n_total_summary.json").is_file());
}

#[test]
fn sweep_records_per_point_errors_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let config = fast_config(dir.path());
    let out = dir.path().join("out");
    // m = 25 exceeds the 20-node cluster: that point errors, the others
    // still produce rows.
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--axis", "n_monitoring", "--values", "1,5,25"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("sweep_n_monitoring.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3, "header plus two surviving rows");
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("sweep_n_monitoring_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["errors"].as_array().unwrap().len(), 1);
}

#[test]
fn validate_succeeds_on_defaults() {
    let output = bin().arg("validate").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("gradient check"), "{stdout}");
    assert!(!stdout.contains("FAILED"), "{stdout}");
}

#[test]
fn bad_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[traffic]\np_base = 2.0\nburst_prob = 2.0\n").unwrap();
    let output = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("traffic.p_base"), "{stderr}");
}

#[test]
fn unknown_subcommand_is_rejected() {
    let status = bin().arg("frobnicate").status().unwrap();
    assert!(!status.success());
}
