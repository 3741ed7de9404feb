//! Runs a configuration and writes the CSV table and `manifest.json`.
//!
//! CSV columns:
//! `preset,scheme,mode,snr_db,K,R_B,R_F,alpha,metric,user_index,value,ci_low,ci_high,trials`.
//! `user_index` is set only for admission rows; `ci_low`, `ci_high` and
//! `trials` are empty for analytic rows. Values use the shortest decimal form
//! that round-trips, so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticMode, AnalyticRequest};
use crate::error::{Error, Result};
use crate::experiment::config::{Entries, OutputMode, RunConfig};
use crate::montecarlo::{Metric, MetricEstimate, Runner, SchemeEstimates, SweepPoint};
use crate::params::{linear_to_db, ScenarioParams};
use crate::quadrature::{clamp_events, QuadratureGrid};
use crate::schemes::SchemeId;

pub const CSV_HEADER: &str = "preset,scheme,mode,snr_db,K,R_B,R_F,alpha,metric,user_index,value,ci_low,ci_high,trials";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_VERSION: u32 = 1;

/// One evaluation that could not be completed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub point: String,
    pub scheme: String,
    pub mode: String,
    pub error: String,
}

/// Record of one run; replaying `config` reproduces the CSV byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub version: String,
    pub preset: String,
    pub modes: Vec<String>,
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    /// Complete resolved configuration.
    pub config: Entries,
    pub csv: String,
    pub rows: usize,
    pub failures: Vec<PointFailure>,
    /// Scheme/mode combinations that have no evaluator and were left out.
    pub skipped: Vec<String>,
    pub clamp_events: u64,
    pub wall_time_s: f64,
}

/// Paths and outcome of [`execute`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
}

impl RunReport {
    pub fn success(&self) -> bool {
        self.manifest.failures.is_empty()
    }
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct Row<'a> {
    preset: &'a str,
    scheme: SchemeId,
    mode: OutputMode,
    snr_db: f64,
    params: &'a ScenarioParams,
    metric: Metric,
    user_index: Option<usize>,
    value: f64,
    ci: Option<(f64, f64)>,
    trials: Option<u64>,
}

impl Row<'_> {
    fn write(&self, out: &mut String) {
        let p = self.params;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.preset,
            self.scheme,
            self.mode,
            self.snr_db,
            p.k,
            p.r_b,
            p.r_f,
            p.alpha,
            self.metric,
            fmt_opt(self.user_index),
            self.value,
            fmt_opt(self.ci.map(|c| c.0)),
            fmt_opt(self.ci.map(|c| c.1)),
            fmt_opt(self.trials),
        );
    }
}

fn analytic_mode(m: OutputMode) -> Option<AnalyticMode> {
    match m {
        OutputMode::Mc => None,
        OutputMode::Analytic => Some(AnalyticMode::ExactQuadrature),
        OutputMode::HighSnr => Some(AnalyticMode::HighSnr),
        OutputMode::Dominant => Some(AnalyticMode::DominantTerm),
        OutputMode::Oracle => Some(AnalyticMode::NumericOracle),
    }
}

fn mc_rows<'a>(
    cfg: &'a RunConfig,
    snr_db: f64,
    params: &'a ScenarioParams,
    est: &SchemeEstimates,
    out: &mut String,
) -> usize {
    let mut n = 0;
    let mut emit = |metric: Metric, user_index: Option<usize>, e: &MetricEstimate| {
        Row {
            preset: cfg.preset.label(),
            scheme: est.scheme,
            mode: OutputMode::Mc,
            snr_db,
            params,
            metric,
            user_index,
            value: e.point,
            ci: Some((e.ci95_low, e.ci95_high)),
            trials: Some(e.trials),
        }
        .write(out);
        n += 1;
    };
    for &metric in &cfg.metrics {
        match metric {
            Metric::Outage => emit(metric, None, &est.outage),
            Metric::Admission => {
                for (i, a) in est.admission.iter().enumerate() {
                    emit(metric, Some(i), a);
                }
            }
            Metric::ErgodicRate => emit(metric, None, &est.ergodic_rate),
            Metric::GbOutage => emit(metric, None, &est.gb_outage),
        }
    }
    n
}

fn point_snr(pt: &SweepPoint, params: &ScenarioParams) -> f64 {
    pt.snr_db.unwrap_or_else(|| linear_to_db(params.p_f))
}

/// Executes every sweep point and writes `<out>/<preset>.csv` and
/// `<out>/manifest.json`. Failures of single evaluations are recorded in the
/// manifest rather than aborting the run.
pub fn execute(cfg: &RunConfig) -> Result<RunReport> {
    let start = Instant::now();
    let clamps_before = clamp_events();
    let plan = cfg.plan();
    let runner = Runner::new(cfg.workers)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut rows = 0;
    let mut failures = Vec::new();
    let mut skipped = Vec::new();

    let analytic_modes: Vec<OutputMode> = cfg.modes.iter().copied().filter(|m| m.is_analytic()).collect();
    for (mode, scheme) in analytic_modes.iter().flat_map(|m| cfg.schemes.iter().map(move |s| (*m, *s))) {
        if scheme == SchemeId::RsFsic {
            skipped.push(format!("{scheme} {mode}: no analytic expression"));
        }
    }
    let analytic_metric = cfg.metrics.contains(&Metric::Outage);
    if !analytic_modes.is_empty() && !analytic_metric {
        skipped.push("analytic modes: only the outage metric has analytic values".into());
    }

    for pt in &plan.sweep {
        let params = plan.point_params(pt);
        let snr = point_snr(pt, &params);
        let mc = if cfg.modes.contains(&OutputMode::Mc) {
            match runner.run_schemes(&plan.schemes, &plan.point_spec(pt)) {
                Ok(v) => Some(v),
                Err(e) => {
                    failures.push(PointFailure {
                        point: pt.describe(),
                        scheme: "*".into(),
                        mode: OutputMode::Mc.label().into(),
                        error: e.to_string(),
                    });
                    None
                }
            }
        } else {
            None
        };
        let grid = if analytic_metric && !analytic_modes.is_empty() {
            match QuadratureGrid::new(&params, cfg.orders()) {
                Ok(g) => Some(g),
                Err(e) => {
                    failures.push(PointFailure {
                        point: pt.describe(),
                        scheme: "*".into(),
                        mode: "analytic".into(),
                        error: e.to_string(),
                    });
                    None
                }
            }
        } else {
            None
        };
        for (i, &scheme) in cfg.schemes.iter().enumerate() {
            if let Some(est) = mc.as_ref().map(|v| &v[i]) {
                rows += mc_rows(cfg, snr, &params, est, &mut csv);
            }
            let Some(grid) = &grid else { continue };
            if scheme == SchemeId::RsFsic {
                continue;
            }
            for &mode in &analytic_modes {
                let Some(am) = analytic_mode(mode) else { continue };
                let req = AnalyticRequest {
                    scheme,
                    params,
                    orders: cfg.orders(),
                    mode: am,
                };
                match req.evaluate_with(grid) {
                    Ok(value) => {
                        Row {
                            preset: cfg.preset.label(),
                            scheme,
                            mode,
                            snr_db: snr,
                            params: &params,
                            metric: Metric::Outage,
                            user_index: None,
                            value,
                            ci: None,
                            trials: None,
                        }
                        .write(&mut csv);
                        rows += 1;
                    }
                    Err(e) => failures.push(PointFailure {
                        point: pt.describe(),
                        scheme: scheme.to_string(),
                        mode: mode.to_string(),
                        error: e.to_string(),
                    }),
                }
            }
        }
    }

    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let csv_name = format!("{}.csv", cfg.preset.label());
    let csv_path = cfg.out_dir.join(&csv_name);
    fs::write(&csv_path, &csv).map_err(|e| Error::io(&csv_path, e))?;
    let manifest = Manifest {
        manifest_version: MANIFEST_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        preset: cfg.preset.label().into(),
        modes: cfg.modes.iter().map(|m| m.label().to_string()).collect(),
        seed: cfg.seed,
        trials: cfg.trials,
        workers: cfg.workers,
        config: cfg.to_entries(),
        csv: csv_name,
        rows,
        failures,
        skipped,
        clamp_events: clamp_events() - clamps_before,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let manifest_path = cfg.out_dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(&manifest_path, json + "\n").map_err(|e| Error::io(&manifest_path, e))?;
    Ok(RunReport {
        csv_path,
        manifest_path,
        manifest,
    })
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Rebuilds the configuration recorded in a manifest, with optional extra
/// overrides (for example a different output directory).
pub fn config_from_manifest(manifest: &Manifest, overrides: &Entries) -> Result<RunConfig> {
    let mut entries = manifest.config.clone();
    for (k, v) in overrides {
        entries.insert(k.clone(), v.clone());
    }
    RunConfig::from_entries(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::parse_kv;

    fn small(dir: &Path) -> RunConfig {
        let text = format!(
            "preset = fig4a\nrun.trials = 3000\nsweep.snr_db = 10,20\nrun.metrics = outage,admission\nrun.workers = 2\noutput.dir = {}",
            dir.display()
        );
        RunConfig::resolve(&[parse_kv(&text).unwrap()]).unwrap()
    }

    #[test]
    fn writes_csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let report = execute(&small(dir.path())).unwrap();
        assert!(report.success());
        let csv = fs::read_to_string(&report.csv_path).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        // 2 points x 2 schemes x (1 outage + 3 admission + 1 analytic).
        assert_eq!(lines.count(), 2 * 2 * 5);
        assert_eq!(report.manifest.rows, 20);
        let m = read_manifest(&report.manifest_path).unwrap();
        assert_eq!(m, report.manifest);
    }

    #[test]
    fn rerun_and_replay_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(dir.path());
        let first = execute(&cfg).unwrap();
        let a = fs::read(&first.csv_path).unwrap();
        let again = execute(&cfg).unwrap();
        assert_eq!(a, fs::read(&again.csv_path).unwrap());

        let other = tempfile::tempdir().unwrap();
        let mut o = Entries::new();
        o.insert("output.dir".into(), other.path().display().to_string());
        o.insert("run.workers".into(), "1".into());
        let replay = config_from_manifest(&first.manifest, &o).unwrap();
        let r = execute(&replay).unwrap();
        assert_eq!(a, fs::read(&r.csv_path).unwrap());
    }

    #[test]
    fn fsic_analytic_is_skipped_not_failed() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            "preset = fig2\nrun.trials = 2000\nsweep.snr_db = 20\nrun.schemes = CS,RS-FSIC\noutput.dir = {}",
            dir.path().display()
        );
        let report = execute(&RunConfig::resolve(&[parse_kv(&text).unwrap()]).unwrap()).unwrap();
        assert!(report.success(), "{:?}", report.manifest.failures);
        assert_eq!(report.manifest.skipped.len(), 1);
        assert_eq!(report.manifest.rows, 3);
    }

    #[test]
    fn unsupported_evaluations_are_recorded() {
        let dir = tempfile::tempdir().unwrap();
        // High-SNR forms assume P_B = P_F, which the pinned GB power breaks.
        let text = format!(
            "preset = fig2\nrun.mode = high-snr\nsweep.snr_db = 20\nrun.schemes = CS\noutput.dir = {}",
            dir.path().display()
        );
        let report = execute(&RunConfig::resolve(&[parse_kv(&text).unwrap()]).unwrap()).unwrap();
        assert!(!report.success());
        assert_eq!(report.manifest.failures[0].scheme, "CS-SGF");
    }
}
