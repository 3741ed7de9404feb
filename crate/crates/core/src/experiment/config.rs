//! Run configuration: key=value files, presets and command-line overrides.
//!
//! Keys are dotted and case-insensitive (`scenario.K` and `scenario.k` are the
//! same key). Values are layered: preset, then config file, then `--set`
//! overrides, then the dedicated command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::presets::{preset_entries, Preset};
use crate::montecarlo::{ExperimentPlan, FixedGeometryOverride, Metric, SweepPoint};
use crate::params::{db_to_linear, ScenarioParams};
use crate::quadrature::QuadratureOrders;
use crate::schemes::{SchemeId, Selection};

/// Flat key/value configuration with normalised keys.
pub type Entries = BTreeMap<String, String>;

/// Every recognised key, in the order they are written back out.
pub const KEYS: &[&str] = &[
    "preset",
    "scenario.alpha",
    "scenario.k",
    "scenario.d_f",
    "scenario.d_f_inner",
    "scenario.d_0",
    "scenario.d_1",
    "scenario.r_b",
    "scenario.r_f",
    "scenario.p_b_db",
    "sweep.snr_db",
    "sweep.k",
    "sweep.rate_pairs",
    "sweep.alpha",
    "run.schemes",
    "run.mode",
    "run.trials",
    "run.seed",
    "run.workers",
    "run.metrics",
    "geometry.gf_distances",
    "geometry.gb_distance",
    "geometry.manual",
    "quadrature.order",
    "output.dir",
];

/// Keys a `custom` run must set explicitly.
pub const REQUIRED_CUSTOM_KEYS: &[&str] = &[
    "scenario.alpha",
    "scenario.k",
    "scenario.d_f",
    "scenario.d_0",
    "scenario.d_1",
    "scenario.r_b",
    "scenario.r_f",
    "sweep.snr_db",
    "run.schemes",
];

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

/// One kind of output row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputMode {
    Mc,
    Analytic,
    HighSnr,
    Dominant,
    Oracle,
}

impl OutputMode {
    pub fn label(self) -> &'static str {
        match self {
            OutputMode::Mc => "mc",
            OutputMode::Analytic => "analytic",
            OutputMode::HighSnr => "high-snr",
            OutputMode::Dominant => "dominant",
            OutputMode::Oracle => "oracle",
        }
    }

    pub fn is_analytic(self) -> bool {
        self != OutputMode::Mc
    }
}

impl fmt::Display for OutputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Parses a comma-separated mode list; `both` stands for `mc,analytic`.
pub fn parse_modes(s: &str) -> Result<Vec<OutputMode>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let add: &[OutputMode] = match part.to_ascii_lowercase().replace('_', "-").as_str() {
            "mc" => &[OutputMode::Mc],
            "analytic" => &[OutputMode::Analytic],
            "both" => &[OutputMode::Mc, OutputMode::Analytic],
            "high-snr" => &[OutputMode::HighSnr],
            "dominant" => &[OutputMode::Dominant],
            "oracle" => &[OutputMode::Oracle],
            _ => return Err(Error::Config(format!("unknown mode `{part}`"))),
        };
        for m in add {
            if !out.contains(m) {
                out.push(*m);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Config("run.mode is empty".into()));
    }
    Ok(out)
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_kv(text: &str) -> Result<Entries> {
    let mut out = Entries::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
        let key = normalise_key(k);
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Parses one `--set key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{s}` is not of the form key=value")))?;
    Ok((normalise_key(k), v.trim().to_string()))
}

fn normalise_key(k: &str) -> String {
    k.trim().to_ascii_lowercase()
}

/// Parses `a:step:b` (inclusive) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(parse_f64).collect::<Result<_>>()?;
        let [a, step, b] = parts[..] else {
            return Err(Error::Config(format!("range `{s}` must be start:step:end")));
        };
        if step <= 0.0 || b < a {
            return Err(Error::Config(format!("range `{s}` needs step > 0 and end >= start")));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * step).collect());
    }
    parse_list(s, parse_f64)
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(f).collect()
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{s}` is not a non-negative integer")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("`{s}` is not a boolean"))),
    }
}

fn parse_rate_pair(s: &str) -> Result<(f64, f64)> {
    let (b, f) = s
        .split_once('/')
        .ok_or_else(|| Error::Config(format!("rate pair `{s}` must be R_B/R_F")))?;
    Ok((parse_f64(b)?, parse_f64(f)?))
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// A fully resolved and validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub modes: Vec<OutputMode>,
    pub schemes: Vec<SchemeId>,
    pub params: ScenarioParams,
    /// GB power in dB held fixed while the SNR axis sweeps P_F = P_m.
    pub pinned_p_b_db: Option<f64>,
    pub snr_db: Vec<f64>,
    pub k_values: Vec<usize>,
    pub rate_pairs: Vec<(f64, f64)>,
    pub alphas: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub metrics: Vec<Metric>,
    pub geometry: Option<FixedGeometryOverride>,
    pub quadrature_order: usize,
    pub out_dir: PathBuf,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl RunConfig {
    /// Expands the preset named in `layers` (or `custom`) and applies the
    /// layers in order, later layers winning.
    pub fn resolve(layers: &[Entries]) -> Result<Self> {
        let preset = layers
            .iter()
            .rev()
            .find_map(|l| l.get("preset"))
            .map(|s| s.parse::<Preset>())
            .transpose()?
            .unwrap_or(Preset::Custom);
        let mut merged = preset_entries(preset);
        for layer in layers {
            for (k, v) in layer {
                merged.insert(k.clone(), v.clone());
            }
        }
        merged.insert("preset".into(), preset.label().into());
        Self::from_entries(&merged)
    }

    /// Builds a configuration from fully merged entries.
    pub fn from_entries(e: &Entries) -> Result<Self> {
        let unknown: Vec<&str> = e.keys().map(String::as_str).filter(|k| !KEYS.contains(k)).collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!(
                "unknown key(s): {}; valid keys are {}",
                unknown.join(", "),
                KEYS.join(", ")
            )));
        }
        let preset: Preset = e.get("preset").map(|s| s.parse()).transpose()?.unwrap_or(Preset::Custom);
        if preset == Preset::Custom {
            let missing: Vec<&str> = REQUIRED_CUSTOM_KEYS.iter().copied().filter(|k| !e.contains_key(*k)).collect();
            if !missing.is_empty() {
                return Err(Error::Config(format!("custom run is missing required key(s): {}", missing.join(", "))));
            }
        }
        let get = |k: &str| e.get(k).map(String::as_str);
        let ctx = |k: &str, err: Error| Error::Config(format!("{k}: {err}"));
        let f64_or = |k: &str, d: f64| get(k).map(parse_f64).transpose().map(|v| v.unwrap_or(d)).map_err(|x| ctx(k, x));

        let defaults = ScenarioParams::default();
        let mut params = ScenarioParams {
            alpha: f64_or("scenario.alpha", defaults.alpha)?,
            k: get("scenario.k")
                .map(parse_int::<usize>)
                .transpose()
                .map_err(|x| ctx("scenario.k", x))?
                .unwrap_or(defaults.k),
            d_f: f64_or("scenario.d_f", defaults.d_f)?,
            d_f_inner: f64_or("scenario.d_f_inner", defaults.d_f_inner)?,
            d_0: f64_or("scenario.d_0", defaults.d_0)?,
            d_1: f64_or("scenario.d_1", defaults.d_1)?,
            r_b: f64_or("scenario.r_b", defaults.r_b)?,
            r_f: f64_or("scenario.r_f", defaults.r_f)?,
            ..defaults
        };
        let pinned_p_b_db = get("scenario.p_b_db")
            .filter(|s| !s.trim().is_empty())
            .map(parse_f64)
            .transpose()
            .map_err(|x| ctx("scenario.p_b_db", x))?;
        let snr_db = parse_grid(get("sweep.snr_db").unwrap_or("0:5:50")).map_err(|x| ctx("sweep.snr_db", x))?;
        let k_values = parse_list(get("sweep.k").unwrap_or(""), parse_int::<usize>).map_err(|x| ctx("sweep.k", x))?;
        let rate_pairs = parse_list(get("sweep.rate_pairs").unwrap_or(""), parse_rate_pair)
            .map_err(|x| ctx("sweep.rate_pairs", x))?;
        let alphas = parse_list(get("sweep.alpha").unwrap_or(""), parse_f64).map_err(|x| ctx("sweep.alpha", x))?;
        let schemes = parse_list(get("run.schemes").unwrap_or(""), |s| s.parse::<SchemeId>())
            .map_err(|x| ctx("run.schemes", x))?;
        let modes = parse_modes(get("run.mode").unwrap_or("mc")).map_err(|x| ctx("run.mode", x))?;
        let trials = get("run.trials")
            .map(parse_int::<u64>)
            .transpose()
            .map_err(|x| ctx("run.trials", x))?
            .unwrap_or(DEFAULT_TRIALS);
        let seed = get("run.seed")
            .map(parse_int::<u64>)
            .transpose()
            .map_err(|x| ctx("run.seed", x))?
            .unwrap_or(DEFAULT_SEED);
        let workers = get("run.workers")
            .map(parse_int::<usize>)
            .transpose()
            .map_err(|x| ctx("run.workers", x))?
            .unwrap_or_else(default_workers);
        let metrics = parse_list(get("run.metrics").unwrap_or("outage"), |s| s.parse::<Metric>())
            .map_err(|x| ctx("run.metrics", x))?;
        let gf_distances = parse_list(get("geometry.gf_distances").unwrap_or(""), parse_f64)
            .map_err(|x| ctx("geometry.gf_distances", x))?;
        let gb_distance = get("geometry.gb_distance")
            .filter(|s| !s.trim().is_empty())
            .map(parse_f64)
            .transpose()
            .map_err(|x| ctx("geometry.gb_distance", x))?;
        let manual = get("geometry.manual")
            .map(parse_bool)
            .transpose()
            .map_err(|x| ctx("geometry.manual", x))?
            .unwrap_or(false);
        let geometry = (!gf_distances.is_empty()).then_some(FixedGeometryOverride {
            gf_distances,
            gb_distance,
            manual,
        });
        if geometry.is_none() && gb_distance.is_some() {
            return Err(Error::Config("geometry.gb_distance needs geometry.gf_distances".into()));
        }
        let quadrature_order = get("quadrature.order")
            .map(parse_int::<usize>)
            .transpose()
            .map_err(|x| ctx("quadrature.order", x))?
            .unwrap_or(10);
        let out_dir = PathBuf::from(get("output.dir").unwrap_or("results"));

        if let Some(db) = pinned_p_b_db {
            params.p_b = db_to_linear(db);
        }
        let cfg = Self {
            preset,
            modes,
            schemes,
            params,
            pinned_p_b_db,
            snr_db,
            k_values,
            rate_pairs,
            alphas,
            trials,
            seed,
            workers,
            metrics,
            geometry,
            quadrature_order,
            out_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("run.schemes is empty".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("sweep.snr_db is empty".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("run.metrics is empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("run.trials must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("run.workers must be >= 1".into()));
        }
        if self.quadrature_order == 0 {
            return Err(Error::Config("quadrature.order must be >= 1".into()));
        }
        let analytic = self.modes.iter().any(|m| m.is_analytic());
        let has_bu = self.schemes.iter().any(|s| s.selection() == Selection::BestRate);
        let plan = self.plan();
        for pt in &plan.sweep {
            let p = plan.point_params(pt);
            p.validate().map_err(|e| Error::Point {
                point: pt.describe(),
                source: Box::new(e),
            })?;
            if analytic && has_bu && p.k < 2 {
                return Err(Error::Config(format!(
                    "BU analytic evaluation needs K >= 2, but the sweep contains K = {} ({}); \
                     drop BU from run.schemes or run in mc mode (with one user every scheme equals CS at K = 1)",
                    p.k,
                    pt.describe()
                )));
            }
            if let Some(g) = &self.geometry {
                g.validate(&p)?;
            }
        }
        Ok(())
    }

    /// Sweep points: alpha, then rate pair, then K, then SNR (innermost).
    pub fn sweep(&self) -> Vec<SweepPoint> {
        let opt = |v: &[f64]| -> Vec<Option<f64>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().copied().map(Some).collect()
            }
        };
        let alphas = opt(&self.alphas);
        let rates: Vec<Option<(f64, f64)>> = if self.rate_pairs.is_empty() {
            vec![None]
        } else {
            self.rate_pairs.iter().copied().map(Some).collect()
        };
        let ks: Vec<Option<usize>> = if self.k_values.is_empty() {
            vec![None]
        } else {
            self.k_values.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &alpha in &alphas {
            for &rates in &rates {
                for &k in &ks {
                    for &snr in &self.snr_db {
                        out.push(SweepPoint {
                            snr_db: Some(snr),
                            k,
                            rates,
                            alpha,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn plan(&self) -> ExperimentPlan {
        ExperimentPlan {
            schemes: self.schemes.clone(),
            params: self.params,
            sweep: self.sweep(),
            pinned_p_b: self.pinned_p_b_db.map(db_to_linear),
            trials: self.trials,
            master_seed: self.seed,
            metrics: self.metrics.clone(),
            geometry: self.geometry.clone(),
        }
    }

    pub fn orders(&self) -> QuadratureOrders {
        QuadratureOrders::uniform(self.quadrature_order)
    }

    /// The complete configuration as entries; `from_entries` on the result
    /// reproduces `self`.
    pub fn to_entries(&self) -> Entries {
        let p = &self.params;
        let mut e = Entries::new();
        let mut put = |k: &str, v: String| {
            e.insert(k.to_string(), v);
        };
        put("preset", self.preset.label().into());
        put("scenario.alpha", p.alpha.to_string());
        put("scenario.k", p.k.to_string());
        put("scenario.d_f", p.d_f.to_string());
        put("scenario.d_f_inner", p.d_f_inner.to_string());
        put("scenario.d_0", p.d_0.to_string());
        put("scenario.d_1", p.d_1.to_string());
        put("scenario.r_b", p.r_b.to_string());
        put("scenario.r_f", p.r_f.to_string());
        put("scenario.p_b_db", self.pinned_p_b_db.map(|v| v.to_string()).unwrap_or_default());
        put("sweep.snr_db", join(&self.snr_db));
        put("sweep.k", join(&self.k_values));
        put(
            "sweep.rate_pairs",
            self.rate_pairs.iter().map(|(b, f)| format!("{b}/{f}")).collect::<Vec<_>>().join(","),
        );
        put("sweep.alpha", join(&self.alphas));
        put("run.schemes", join(&self.schemes));
        put("run.mode", join(&self.modes));
        put("run.trials", self.trials.to_string());
        put("run.seed", self.seed.to_string());
        put("run.workers", self.workers.to_string());
        put("run.metrics", join(&self.metrics));
        let (gf, gb, manual) = match &self.geometry {
            Some(g) => (join(&g.gf_distances), g.gb_distance.map(|d| d.to_string()).unwrap_or_default(), g.manual),
            None => (String::new(), String::new(), false),
        };
        put("geometry.gf_distances", gf);
        put("geometry.gb_distance", gb);
        put("geometry.manual", manual.to_string());
        put("quadrature.order", self.quadrature_order.to_string());
        put("output.dir", self.out_dir.display().to_string());
        e
    }
}
