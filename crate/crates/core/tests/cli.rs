//! End-to-end runs of the `sgf` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgf")).args(args).output().unwrap()
}

fn run_fig6(out: &Path) -> Output {
    sgf(&[
        "run", "--preset", "fig6", "--mode", "both", "--trials", "2000", "--seed", "42", "--workers", "2",
        "--set", "sweep.snr_db=10,30", "--out", out.to_str().unwrap(),
    ])
}

#[test]
fn fig6_run_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_fig6(dir.path());
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let csv = fs::read_to_string(dir.path().join("fig6.csv")).unwrap();
    // 2 SNR x 3 K x 4 schemes x (mc + analytic).
    assert_eq!(csv.lines().count(), 1 + 2 * 3 * 4 * 2);
    assert!(csv.starts_with("preset,scheme,mode,snr_db,K,R_B,R_F,alpha,metric,user_index,value,ci_low,ci_high,trials\n"));

    let manifest = dir.path().join("manifest.json");
    let other = tempfile::tempdir().unwrap();
    let replay = sgf(&["replay", manifest.to_str().unwrap(), "--out", other.path().to_str().unwrap(), "--workers", "1"]);
    assert!(replay.status.success());
    assert_eq!(csv, fs::read_to_string(other.path().join("fig6.csv")).unwrap());
}

#[test]
fn config_file_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# minimal custom run\nscenario.alpha = 3\nscenario.K = 2\nscenario.d_f = 3\nscenario.d_0 = 1\nscenario.d_1 = 3\n\
         scenario.r_b = 1\nscenario.r_f = 0.9\nsweep.snr_db = 20\nrun.schemes = CS\nrun.trials = 500\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = sgf(&["run", "--config", cfg.to_str().unwrap(), "--trials", "700", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("custom.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(",700"));
}

#[test]
fn bad_input_exits_nonzero() {
    let o = sgf(&["run", "--preset", "fig9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown preset"));
    let o = sgf(&["run", "--preset", "fig4b", "--set", "scenario.k=1", "--mode", "analytic"]);
    assert_eq!(o.status.code(), Some(1));
    let o = sgf(&["run", "--preset", "fig4a", "--set", "bogus.key=1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
}

#[test]
fn point_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = sgf(&[
        "run", "--preset", "fig2", "--mode", "high-snr", "--set", "sweep.snr_db=20", "--set", "run.schemes=CS",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn presets_are_listed() {
    let o = sgf(&["presets"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for p in ["fig1a", "fig4b", "fig7", "custom"] {
        assert!(text.contains(p));
    }
}
