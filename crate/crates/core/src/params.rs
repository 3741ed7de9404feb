//! Static system configuration and the thresholds derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a power in dB (noise power 1) to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}

/// Geometry, path loss, user count, target rates and powers of one scenario.
///
/// Powers are linear with unit noise variance, so they double as transmit SNRs.
/// `d_f_inner` lets GF users live on an annulus; `d_f_inner == d_f` pins every
/// GF user at that exact distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub alpha: f64,
    pub k: usize,
    pub d_f: f64,
    pub d_f_inner: f64,
    pub d_0: f64,
    pub d_1: f64,
    pub r_b: f64,
    pub r_f: f64,
    pub p_b: f64,
    pub p_f: f64,
    pub p_m: f64,
}

impl Default for ScenarioParams {
    /// Simulation defaults: alpha 3, K = 4, D_F = D_1 = 3 m, D_0 = 1 m,
    /// R_B = 1, R_F = 0.9, all powers at 0 dB.
    fn default() -> Self {
        Self {
            alpha: 3.0,
            k: 4,
            d_f: 3.0,
            d_f_inner: 0.0,
            d_0: 1.0,
            d_1: 3.0,
            r_b: 1.0,
            r_f: 0.9,
            p_b: 1.0,
            p_f: 1.0,
            p_m: 1.0,
        }
    }
}

impl ScenarioParams {
    /// Sets P_B = P_F = P_m to the given SNR.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        let p = db_to_linear(snr_db);
        self.p_b = p;
        self.p_f = p;
        self.p_m = p;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_rates(mut self, r_b: f64, r_f: f64) -> Self {
        self.r_b = r_b;
        self.r_f = r_f;
        self
    }

    pub fn gamma_b(&self) -> f64 {
        self.r_b.exp2() - 1.0
    }

    pub fn gamma_f(&self) -> f64 {
        self.r_f.exp2() - 1.0
    }

    /// True when all GF users sit at exactly `d_f`.
    pub fn gf_fixed_distance(&self) -> bool {
        self.d_f_inner == self.d_f
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.gamma_b(), self.gamma_f())
    }

    /// Thresholds for the fixed-power schemes (`alpha_F = gamma_F / P_F`).
    pub fn thresholds(&self) -> DerivedThresholds {
        DerivedThresholds::new(self, self.p_f)
    }

    /// Thresholds for the power-control schemes (`alpha_F = gamma_F / P_m`).
    pub fn thresholds_pc(&self) -> DerivedThresholds {
        DerivedThresholds::new(self, self.p_m)
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        }
        positive("alpha", self.alpha)?;
        if self.k == 0 {
            return Err(Error::invalid("K", "need at least one GF user"));
        }
        positive("D_0", self.d_0)?;
        positive("D_1", self.d_1)?;
        positive("D_F", self.d_f)?;
        if self.d_0 >= self.d_1 {
            return Err(Error::invalid(
                "D_0",
                format!("inner radius {} must be below D_1 = {}", self.d_0, self.d_1),
            ));
        }
        if !(self.d_f_inner.is_finite() && self.d_f_inner >= 0.0 && self.d_f_inner <= self.d_f) {
            return Err(Error::invalid(
                "D_F_inner",
                format!("must lie in [0, D_F = {}], got {}", self.d_f, self.d_f_inner),
            ));
        }
        positive("R_B", self.r_b)?;
        positive("R_F", self.r_f)?;
        positive("P_B", self.p_b)?;
        positive("P_F", self.p_f)?;
        positive("P_m", self.p_m)?;
        // Relative slack so that powers computed from the same dB value compare equal.
        let slack = 1.0 + 1e-12;
        if self.p_f > self.p_m * slack {
            return Err(Error::invalid("P_F", format!("{} exceeds P_m = {}", self.p_f, self.p_m)));
        }
        if self.p_b > self.p_m * slack {
            return Err(Error::invalid("P_B", format!("{} exceeds P_m = {}", self.p_b, self.p_m)));
        }
        Ok(())
    }
}

/// Which side of `gamma_B * gamma_F = 1` a rate pair falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    SubUnity,
    SuperUnity,
}

impl Regime {
    pub fn of(gamma_b: f64, gamma_f: f64) -> Self {
        if gamma_b * gamma_f < 1.0 {
            Regime::SubUnity
        } else {
            Regime::SuperUnity
        }
    }
}

/// Target channel gains used by the outage expressions.
///
/// `alpha_2` is `None` in the super-unity regime, where it is conceptually
/// infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedThresholds {
    pub alpha_b: f64,
    pub alpha_f: f64,
    pub alpha_1: f64,
    pub alpha_2: Option<f64>,
}

impl DerivedThresholds {
    /// `gf_power` is P_F for fixed-power schemes and P_m under power control.
    pub fn new(params: &ScenarioParams, gf_power: f64) -> Self {
        let gb = params.gamma_b();
        let gf = params.gamma_f();
        let alpha_b = gb / params.p_b;
        let alpha_1 = alpha_b * (1.0 + gf);
        let alpha_2 = (gb * gf < 1.0).then(|| alpha_1 / (1.0 - gb * gf));
        Self {
            alpha_b,
            alpha_f: gf / gf_power,
            alpha_1,
            alpha_2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults_validate() {
        ScenarioParams::default().with_snr_db(30.0).validate().unwrap();
    }

    #[test]
    fn gammas() {
        let p = ScenarioParams::default().with_rates(1.0, 0.9);
        assert_relative_eq!(p.gamma_b(), 1.0);
        assert_relative_eq!(p.gamma_f(), 0.9f64.exp2() - 1.0);
        assert_eq!(p.regime(), Regime::SubUnity);
        assert_eq!(p.with_rates(1.5, 0.9).regime(), Regime::SuperUnity);
        // gamma_B * gamma_F = 1 exactly is super-unity.
        assert_eq!(p.with_rates(1.0, 1.0).regime(), Regime::SuperUnity);
    }

    #[test]
    fn threshold_ordering() {
        let p = ScenarioParams::default().with_snr_db(20.0);
        let t = p.thresholds();
        assert!(t.alpha_b < t.alpha_1);
        assert!(t.alpha_1 < t.alpha_2.unwrap());
        assert!(p.with_rates(1.5, 0.9).thresholds().alpha_2.is_none());
    }

    #[test]
    fn rejects_bad_geometry() {
        let d = ScenarioParams::default();
        for p in [
            ScenarioParams { d_0: 3.0, ..d },
            ScenarioParams { d_f_inner: 4.0, ..d },
            ScenarioParams { p_f: 2.0, ..d },
            ScenarioParams { k: 0, ..d },
        ] {
            assert!(p.validate().is_err());
        }
    }

    #[test]
    fn fixed_distance_annulus_is_valid() {
        let p = ScenarioParams {
            d_f: 1.0,
            d_f_inner: 1.0,
            ..ScenarioParams::default()
        };
        p.validate().unwrap();
        assert!(p.gf_fixed_distance());
    }
}
