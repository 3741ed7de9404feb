//! Monte Carlo estimation of outage, admission frequency and ergodic rate.
//!
//! Trial `t` of a point draws everything from its own ChaCha8 stream
//! (`seed`, stream `t`), so results do not depend on how trials are split
//! across workers. Within a trial the geometry and fading are shared by every
//! scheme being estimated (common random numbers); the random-selection index
//! is drawn after the channels.

mod stats;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use stats::{empirical_diversity_slope, MetricEstimate, Z95};

use crate::channel::{sample_channels, sample_positions};
use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::schemes::{outage_indicator, schedule_with_index, SchemeId};

/// Trials per work unit; fixed so that the merge order is independent of the
/// worker count.
pub const CHUNK_TRIALS: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    Outage,
    Admission,
    ErgodicRate,
    GbOutage,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Outage, Metric::Admission, Metric::ErgodicRate, Metric::GbOutage];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Admission => "admission",
            Metric::ErgodicRate => "ergodic_rate",
            Metric::GbOutage => "gb_outage",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "outage" => Ok(Metric::Outage),
            "admission" => Ok(Metric::Admission),
            "ergodic_rate" | "rate" => Ok(Metric::ErgodicRate),
            "gb_outage" => Ok(Metric::GbOutage),
            _ => Err(Error::Config(format!("unknown metric `{s}`"))),
        }
    }
}

/// Distances held constant across trials instead of being drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedGeometryOverride {
    pub gf_distances: Vec<f64>,
    pub gb_distance: Option<f64>,
    /// Allows distances outside the configured regions.
    pub manual: bool,
}

impl FixedGeometryOverride {
    pub fn validate(&self, params: &ScenarioParams) -> Result<()> {
        if self.gf_distances.len() != params.k {
            return Err(Error::invalid(
                "gf_distances",
                format!("{} distances given for K = {}", self.gf_distances.len(), params.k),
            ));
        }
        if self.gf_distances.iter().chain(&self.gb_distance).any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::invalid("gf_distances", "distances must be finite and non-negative"));
        }
        if self.manual {
            return Ok(());
        }
        if let Some(&d) = self.gf_distances.iter().find(|&&d| d < params.d_f_inner || d > params.d_f) {
            return Err(Error::invalid(
                "gf_distances",
                format!("{d} lies outside the GF region; set `manual` to allow it"),
            ));
        }
        if let Some(d) = self.gb_distance.filter(|&d| d < params.d_0 || d > params.d_1) {
            return Err(Error::invalid(
                "gb_distance",
                format!("{d} lies outside the GB ring; set `manual` to allow it"),
            ));
        }
        Ok(())
    }
}

/// One fully specified simulation point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub params: ScenarioParams,
    pub trials: u64,
    pub seed: u64,
    pub geometry: Option<FixedGeometryOverride>,
}

impl PointSpec {
    pub fn new(params: ScenarioParams, trials: u64, seed: u64) -> Self {
        Self {
            params,
            trials,
            seed,
            geometry: None,
        }
    }

    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        if let Some(g) = &self.geometry {
            g.validate(&self.params)?;
        }
        Ok(())
    }
}

/// Estimates for one scheme at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeEstimates {
    pub scheme: SchemeId,
    pub outage: MetricEstimate,
    /// Frequency with which each GF user index is admitted.
    pub admission: Vec<MetricEstimate>,
    pub ergodic_rate: MetricEstimate,
    pub gb_outage: MetricEstimate,
}

#[derive(Debug, Clone)]
struct Tally {
    outage: u64,
    gb_outage: u64,
    admitted: Vec<u64>,
    rate_sum: f64,
    rate_sq: f64,
}

impl Tally {
    fn new(k: usize) -> Self {
        Self {
            outage: 0,
            gb_outage: 0,
            admitted: vec![0; k],
            rate_sum: 0.0,
            rate_sq: 0.0,
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.outage += other.outage;
        self.gb_outage += other.gb_outage;
        for (a, b) in self.admitted.iter_mut().zip(&other.admitted) {
            *a += b;
        }
        self.rate_sum += other.rate_sum;
        self.rate_sq += other.rate_sq;
    }

    fn finish(&self, scheme: SchemeId, trials: u64) -> SchemeEstimates {
        SchemeEstimates {
            scheme,
            outage: MetricEstimate::proportion(self.outage, trials),
            admission: self.admitted.iter().map(|&a| MetricEstimate::proportion(a, trials)).collect(),
            ergodic_rate: MetricEstimate::mean(self.rate_sum, self.rate_sq, trials),
            gb_outage: MetricEstimate::proportion(self.gb_outage, trials),
        }
    }
}

/// The random stream of trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn run_chunk(schemes: &[SchemeId], spec: &PointSpec, base: &ChaCha8Rng, range: std::ops::Range<u64>) -> Vec<Tally> {
    let p = &spec.params;
    let mut tallies = vec![Tally::new(p.k); schemes.len()];
    for t in range {
        let mut rng = base.clone();
        rng.set_stream(t);
        rng.set_word_pos(0);
        let (r_b, r) = match &spec.geometry {
            Some(g) => {
                let (rb_draw, _) = sample_positions(p, &mut rng);
                (g.gb_distance.unwrap_or(rb_draw), g.gf_distances.clone())
            }
            None => sample_positions(p, &mut rng),
        };
        let ch = sample_channels(p, r_b, &r, &mut rng);
        let random_index = rng.random_range(0..p.k);
        for (scheme, tally) in schemes.iter().zip(tallies.iter_mut()) {
            let o = schedule_with_index(*scheme, p, &ch, random_index);
            tally.outage += u64::from(outage_indicator(&o, p));
            tally.gb_outage += u64::from(o.gb_rate < p.r_b);
            tally.admitted[o.admitted_index] += 1;
            tally.rate_sum += o.gf_rate;
            tally.rate_sq += o.gf_rate * o.gf_rate;
        }
    }
    tallies
}

/// A worker pool that evaluates points; reuse it across a sweep.
pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
        Ok(Self { pool })
    }

    /// Runs all `schemes` on the same trials of one point.
    pub fn run_schemes(&self, schemes: &[SchemeId], spec: &PointSpec) -> Result<Vec<SchemeEstimates>> {
        spec.validate()?;
        let base = ChaCha8Rng::seed_from_u64(spec.seed);
        let chunks = spec.trials.div_ceil(CHUNK_TRIALS);
        let parts: Vec<Vec<Tally>> = self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let start = c * CHUNK_TRIALS;
                    run_chunk(schemes, spec, &base, start..(start + CHUNK_TRIALS).min(spec.trials))
                })
                .collect()
        });
        let mut total = vec![Tally::new(spec.params.k); schemes.len()];
        for part in &parts {
            for (t, p) in total.iter_mut().zip(part) {
                t.merge(p);
            }
        }
        Ok(schemes
            .iter()
            .zip(&total)
            .map(|(s, t)| t.finish(*s, spec.trials))
            .collect())
    }
}

/// Runs all `schemes` on the same trials of one point.
pub fn run_schemes(schemes: &[SchemeId], spec: &PointSpec, workers: usize) -> Result<Vec<SchemeEstimates>> {
    Runner::new(workers)?.run_schemes(schemes, spec)
}

/// Runs one scheme at one point.
pub fn run_point(scheme: SchemeId, spec: &PointSpec, workers: usize) -> Result<SchemeEstimates> {
    Ok(run_schemes(&[scheme], spec, workers)?.remove(0))
}

/// Overrides applied to the base scenario at one sweep point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Sets P_F = P_m, and P_B too unless it is pinned.
    pub snr_db: Option<f64>,
    pub k: Option<usize>,
    pub rates: Option<(f64, f64)>,
    pub alpha: Option<f64>,
}

impl SweepPoint {
    pub fn apply(&self, base: &ScenarioParams, pinned_p_b: Option<f64>) -> ScenarioParams {
        let mut p = *base;
        if let Some(db) = self.snr_db {
            p = p.with_snr_db(db);
        }
        if let Some(pb) = pinned_p_b {
            p.p_b = pb;
        }
        if let Some(k) = self.k {
            p.k = k;
        }
        if let Some((rb, rf)) = self.rates {
            p = p.with_rates(rb, rf);
        }
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        p
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(db) = self.snr_db {
            parts.push(format!("snr_db={db}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("K={k}"));
        }
        if let Some((rb, rf)) = self.rates {
            parts.push(format!("R_B={rb},R_F={rf}"));
        }
        if let Some(a) = self.alpha {
            parts.push(format!("alpha={a}"));
        }
        parts.join(",")
    }
}

/// Schemes, base scenario and sweep of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub schemes: Vec<SchemeId>,
    pub params: ScenarioParams,
    pub sweep: Vec<SweepPoint>,
    pub pinned_p_b: Option<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub metrics: Vec<Metric>,
    pub geometry: Option<FixedGeometryOverride>,
}

impl ExperimentPlan {
    pub fn point_params(&self, point: &SweepPoint) -> ScenarioParams {
        point.apply(&self.params, self.pinned_p_b)
    }

    pub fn point_spec(&self, point: &SweepPoint) -> PointSpec {
        PointSpec {
            params: self.point_params(point),
            trials: self.trials,
            seed: self.master_seed,
            geometry: self.geometry.clone(),
        }
    }
}

/// Estimates of every scheme at one sweep point, in plan order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub params: ScenarioParams,
    pub estimates: Vec<SchemeEstimates>,
}

/// Runs every sweep point in order, sharing one worker pool.
pub fn run_sweep(plan: &ExperimentPlan, workers: usize) -> Result<Vec<SweepRow>> {
    let runner = Runner::new(workers)?;
    plan.sweep
        .iter()
        .map(|pt| {
            let spec = plan.point_spec(pt);
            runner.run_schemes(&plan.schemes, &spec)
                .map(|estimates| SweepRow {
                    point: *pt,
                    params: spec.params,
                    estimates,
                })
                .map_err(|e| Error::Point {
                    point: pt.describe(),
                    source: Box::new(e),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(trials: u64) -> PointSpec {
        PointSpec::new(ScenarioParams::default().with_snr_db(15.0), trials, 7)
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let s = spec(20_000);
        let a = run_schemes(&SchemeId::ALL, &s, 1).unwrap();
        let b = run_schemes(&SchemeId::ALL, &s, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_trial_is_reproducible() {
        let s = spec(1);
        let a = run_point(SchemeId::Cs, &s, 1).unwrap();
        assert_eq!(a, run_point(SchemeId::Cs, &s, 2).unwrap());
        assert!(a.outage.point == 0.0 || a.outage.point == 1.0);
    }

    #[test]
    fn admission_sums_to_one() {
        for e in run_schemes(&SchemeId::ALL, &spec(5_000), 1).unwrap() {
            let total: f64 = e.admission.iter().map(|a| a.point).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn schemes_share_draws() {
        let s = spec(10_000);
        let joint = run_schemes(&[SchemeId::Bu, SchemeId::Cs], &s, 1).unwrap();
        assert_eq!(joint[1], run_point(SchemeId::Cs, &s, 1).unwrap());
    }

    #[test]
    fn rejects_bad_geometry_override() {
        let mut s = spec(10);
        s.geometry = Some(FixedGeometryOverride {
            gf_distances: vec![1.0, 2.0, 3.0, 4.0],
            gb_distance: Some(2.0),
            manual: false,
        });
        assert!(run_point(SchemeId::Cs, &s, 1).is_err());
        s.geometry.as_mut().unwrap().manual = true;
        assert!(run_point(SchemeId::Cs, &s, 1).is_ok());
        s.geometry.as_mut().unwrap().gf_distances.pop();
        assert!(run_point(SchemeId::Cs, &s, 1).is_err());
    }

    #[test]
    fn sweep_reports_failing_point() {
        let plan = ExperimentPlan {
            schemes: vec![SchemeId::Cs],
            params: ScenarioParams::default(),
            sweep: vec![SweepPoint { snr_db: Some(10.0), ..Default::default() }, SweepPoint { k: Some(0), ..Default::default() }],
            pinned_p_b: None,
            trials: 100,
            master_seed: 1,
            metrics: vec![Metric::Outage],
            geometry: None,
        };
        match run_sweep(&plan, 1) {
            Err(Error::Point { point, .. }) => assert_eq!(point, "K=0"),
            other => panic!("expected a point error, got {other:?}"),
        }
    }
}
