//! Closed-form outage probabilities, their high-SNR forms and a numeric oracle.

pub mod asymptotic;
pub mod bu;
pub mod combinatorics;
pub mod cs;
pub mod oracle;

use serde::{Deserialize, Serialize};

pub use asymptotic::{
    diversity_order, dominant_bu, dominant_bu_pc, dominant_cs, dominant_cs_pc, high_snr_bu, high_snr_bu_pc,
    high_snr_cs, high_snr_cs_pc,
};
pub use bu::{outage_bu, outage_bu_pc};
pub use cs::{outage_cs, outage_cs_pc};
pub use oracle::{bu_order_statistics_k2, joint_min_max_density, joint_min_max_mass, numeric_oracle};

use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::quadrature::{clamp_probability, QuadratureGrid, QuadratureOrders};
use crate::schemes::{PowerRule, SchemeId, Selection};

/// Which evaluator an [`AnalyticRequest`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticMode {
    ExactQuadrature,
    HighSnr,
    DominantTerm,
    NumericOracle,
}

impl AnalyticMode {
    pub fn label(self) -> &'static str {
        match self {
            AnalyticMode::ExactQuadrature => "analytic",
            AnalyticMode::HighSnr => "high-snr",
            AnalyticMode::DominantTerm => "dominant",
            AnalyticMode::NumericOracle => "oracle",
        }
    }
}

/// One analytic evaluation.
///
/// With a single GF user every scheduler picks the same user, and random
/// selection sees the unordered gain law, so BU with `K = 1` and both random
/// selection variants are served by the CS evaluators at `K = 1`. The
/// fixed-order SIC benchmark has no analytic counterpart.
#[derive(Debug, Clone)]
pub struct AnalyticRequest {
    pub scheme: SchemeId,
    pub params: ScenarioParams,
    pub orders: QuadratureOrders,
    pub mode: AnalyticMode,
}

impl AnalyticRequest {
    pub fn new(scheme: SchemeId, params: ScenarioParams, mode: AnalyticMode) -> Self {
        Self {
            scheme,
            params,
            orders: QuadratureOrders::default(),
            mode,
        }
    }

    /// The scheme and parameters actually evaluated after the single-user
    /// reductions.
    pub fn resolved(&self) -> Result<(SchemeId, ScenarioParams)> {
        let pc = self.scheme.power_rule() == PowerRule::PowerControl;
        match (self.scheme.selection(), self.scheme) {
            (_, SchemeId::RsFsic) => Err(Error::Unsupported(
                "RS-SGF-FSIC has no analytic expression; use Monte Carlo".into(),
            )),
            (Selection::Random, _) => Ok((if pc { SchemeId::CsPc } else { SchemeId::Cs }, self.params.with_k(1))),
            (Selection::BestRate, _) if self.params.k == 1 => {
                Ok((if pc { SchemeId::CsPc } else { SchemeId::Cs }, self.params))
            }
            _ => Ok((self.scheme, self.params)),
        }
    }

    /// Evaluates the request on a grid built from the resolved parameters.
    pub fn evaluate(&self) -> Result<f64> {
        let (scheme, params) = self.resolved()?;
        let grid = QuadratureGrid::new(&params, self.orders)?;
        self.evaluate_on(scheme, &params, &grid)
    }

    /// Evaluates the request on a caller-supplied grid, which must have been
    /// built for the same geometry and path-loss exponent.
    pub fn evaluate_with(&self, grid: &QuadratureGrid) -> Result<f64> {
        let (scheme, params) = self.resolved()?;
        self.evaluate_on(scheme, &params, grid)
    }

    fn evaluate_on(&self, scheme: SchemeId, params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
        use AnalyticMode::*;
        use SchemeId::*;
        match (self.mode, scheme) {
            (ExactQuadrature, Bu) => outage_bu(params, grid),
            (ExactQuadrature, BuPc) => outage_bu_pc(params, grid),
            (ExactQuadrature, Cs) => outage_cs(params, grid),
            (ExactQuadrature, CsPc) => outage_cs_pc(params, grid),
            (HighSnr, Bu) => high_snr_bu(params, grid),
            (HighSnr, BuPc) => high_snr_bu_pc(params, grid),
            (HighSnr, Cs) => high_snr_cs(params, grid),
            (HighSnr, CsPc) => high_snr_cs_pc(params, grid),
            (DominantTerm, Bu) => dominant_bu(params, grid),
            (DominantTerm, BuPc) => dominant_bu_pc(params, grid),
            (DominantTerm, Cs) => dominant_cs(params, grid),
            (DominantTerm, CsPc) => dominant_cs_pc(params, grid),
            (NumericOracle, s) => numeric_oracle(s, params, grid).map(|i| clamp_probability(i.value)),
            (_, s) => Err(Error::Unsupported(format!("no analytic evaluator for {s}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_user_routing() {
        let p = ScenarioParams::default().with_k(1).with_snr_db(20.0);
        let bu = AnalyticRequest::new(SchemeId::Bu, p, AnalyticMode::ExactQuadrature).evaluate().unwrap();
        let cs = AnalyticRequest::new(SchemeId::Cs, p, AnalyticMode::ExactQuadrature).evaluate().unwrap();
        assert_eq!(bu, cs);
        let rs = AnalyticRequest::new(SchemeId::Rs, p.with_k(4), AnalyticMode::ExactQuadrature)
            .evaluate()
            .unwrap();
        assert_eq!(rs, cs);
        let rs_pc = AnalyticRequest::new(SchemeId::RsPc, p.with_k(4), AnalyticMode::ExactQuadrature)
            .evaluate()
            .unwrap();
        let cs_pc = AnalyticRequest::new(SchemeId::CsPc, p, AnalyticMode::ExactQuadrature).evaluate().unwrap();
        assert_eq!(rs_pc, cs_pc);
    }

    #[test]
    fn fsic_has_no_closed_form() {
        let p = ScenarioParams::default();
        let r = AnalyticRequest::new(SchemeId::RsFsic, p, AnalyticMode::ExactQuadrature).evaluate();
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn modes_are_consistent_at_high_snr() {
        let p = ScenarioParams::default().with_k(3).with_snr_db(50.0);
        for scheme in [SchemeId::Bu, SchemeId::BuPc, SchemeId::Cs, SchemeId::CsPc] {
            let exact = AnalyticRequest::new(scheme, p, AnalyticMode::ExactQuadrature).evaluate().unwrap();
            let hi = AnalyticRequest::new(scheme, p, AnalyticMode::HighSnr).evaluate().unwrap();
            let dom = AnalyticRequest::new(scheme, p, AnalyticMode::DominantTerm).evaluate().unwrap();
            assert!((hi / exact - 1.0).abs() < 0.02, "{scheme}: {hi} vs {exact}");
            assert!((dom / exact - 1.0).abs() < 0.2, "{scheme}: {dom} vs {exact}");
        }
    }
}
