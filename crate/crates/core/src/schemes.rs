//! HSIC decoding, the Eq.-27-style power control rule and the BU / CS / RS
//! schedulers, plus the fixed-order SIC benchmark.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::params::ScenarioParams;

/// A scheduling scheme together with its power rule.
///
/// The fixed-order benchmark exists only with fixed power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeId {
    Bu,
    BuPc,
    Cs,
    CsPc,
    Rs,
    RsPc,
    RsFsic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerRule {
    Fixed,
    PowerControl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    BestRate,
    CdfBased,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decoding {
    Hsic,
    Fsic,
}

impl SchemeId {
    pub const ALL: [SchemeId; 7] = [
        SchemeId::Bu,
        SchemeId::BuPc,
        SchemeId::Cs,
        SchemeId::CsPc,
        SchemeId::Rs,
        SchemeId::RsPc,
        SchemeId::RsFsic,
    ];

    pub fn power_rule(self) -> PowerRule {
        match self {
            SchemeId::BuPc | SchemeId::CsPc | SchemeId::RsPc => PowerRule::PowerControl,
            _ => PowerRule::Fixed,
        }
    }

    pub fn selection(self) -> Selection {
        match self {
            SchemeId::Bu | SchemeId::BuPc => Selection::BestRate,
            SchemeId::Cs | SchemeId::CsPc => Selection::CdfBased,
            SchemeId::Rs | SchemeId::RsPc | SchemeId::RsFsic => Selection::Random,
        }
    }

    pub fn decoding(self) -> Decoding {
        if self == SchemeId::RsFsic {
            Decoding::Fsic
        } else {
            Decoding::Hsic
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SchemeId::Bu => "BU-SGF",
            SchemeId::BuPc => "BU-SGF-PC",
            SchemeId::Cs => "CS-SGF",
            SchemeId::CsPc => "CS-SGF-PC",
            SchemeId::Rs => "RS-SGF",
            SchemeId::RsPc => "RS-SGF-PC",
            SchemeId::RsFsic => "RS-SGF-FSIC",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    /// Accepts the labels above with or without the `-SGF` infix, any case,
    /// `_` or `-` as separator: `BU`, `bu-pc`, `CS-SGF-PC`, `rs_fsic`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-").replace("-SGF", "");
        Ok(match norm.as_str() {
            "BU" => SchemeId::Bu,
            "BU-PC" => SchemeId::BuPc,
            "CS" => SchemeId::Cs,
            "CS-PC" => SchemeId::CsPc,
            "RS" => SchemeId::Rs,
            "RS-PC" => SchemeId::RsPc,
            "RS-FSIC" => SchemeId::RsFsic,
            _ => return Err(Error::Config(format!("unknown scheme `{s}`"))),
        })
    }
}

/// SIC stage at which the admitted GF signal is decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SicStage {
    First,
    Second,
}

/// Result of one scheduling decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchedulingOutcome {
    pub admitted_index: usize,
    pub tx_power: f64,
    pub sic_stage: SicStage,
    pub gf_rate: f64,
    pub gb_rate: f64,
    pub tau0: f64,
}

/// `max(0, P_B g2 / gamma_B - 1)`: the largest GF received power that still
/// lets the GB signal be decoded first.
pub fn decoding_threshold(params: &ScenarioParams, g2: f64) -> f64 {
    (params.p_b * g2 / params.gamma_b() - 1.0).max(0.0)
}

/// Rate and stage of a GF user received at `tx_power * h2`. The tie
/// `tx_power * h2 == tau0` goes to the second stage.
pub fn achievable_rate_hsic(params: &ScenarioParams, h2: f64, tx_power: f64, g2: f64, tau0: f64) -> (f64, SicStage) {
    let rx = tx_power * h2;
    if rx > tau0 {
        ((rx / (params.p_b * g2 + 1.0)).ln_1p() / std::f64::consts::LN_2, SicStage::First)
    } else {
        (rx.ln_1p() / std::f64::consts::LN_2, SicStage::Second)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PowerDecision {
    /// Back off to `tau0 / h2` so the signal lands exactly on the threshold.
    Backoff,
    Max,
}

fn power_decision(params: &ScenarioParams, h2: f64, g2: f64, tau0: f64) -> PowerDecision {
    if tau0 > 0.0 && h2 > 0.0 {
        let lo = tau0 / params.p_m;
        let hi = tau0 * (1.0 + params.p_b * g2) / params.p_m;
        if lo < h2 && h2 < hi {
            return PowerDecision::Backoff;
        }
    }
    PowerDecision::Max
}

/// Transmit power chosen by the per-user rate-maximising rule: `tau0 / h2`
/// when `tau0 / P_m < h2 < tau0 (1 + P_B g2) / P_m`, `P_m` otherwise.
pub fn power_control(params: &ScenarioParams, h2: f64, g2: f64, tau0: f64) -> f64 {
    match power_decision(params, h2, g2, tau0) {
        PowerDecision::Backoff => tau0 / h2,
        PowerDecision::Max => params.p_m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Link {
    tx_power: f64,
    rate: f64,
    stage: SicStage,
}

fn link(params: &ScenarioParams, h2: f64, g2: f64, tau0: f64, rule: PowerRule) -> Link {
    let tx_power = match rule {
        PowerRule::Fixed => params.p_f,
        PowerRule::PowerControl => match power_decision(params, h2, g2, tau0) {
            // The received power equals tau0 by construction; setting the rate
            // directly keeps `(tau0 / h2) * h2` rounding from flipping the stage.
            PowerDecision::Backoff => {
                return Link {
                    tx_power: tau0 / h2,
                    rate: tau0.ln_1p() / std::f64::consts::LN_2,
                    stage: SicStage::Second,
                }
            }
            PowerDecision::Max => params.p_m,
        },
    };
    let (rate, stage) = achievable_rate_hsic(params, h2, tx_power, g2, tau0);
    Link { tx_power, rate, stage }
}

fn gb_rate_oma(params: &ScenarioParams, g2: f64) -> f64 {
    (params.p_b * g2).ln_1p() / std::f64::consts::LN_2
}

fn outcome_for(params: &ScenarioParams, ch: &ChannelRealization, index: usize, rule: PowerRule) -> SchedulingOutcome {
    let tau0 = decoding_threshold(params, ch.g2);
    let l = link(params, ch.h2[index], ch.g2, tau0, rule);
    SchedulingOutcome {
        admitted_index: index,
        tx_power: l.tx_power,
        sic_stage: l.stage,
        gf_rate: l.rate,
        gb_rate: gb_rate_oma(params, ch.g2),
        tau0,
    }
}

/// Index of the first maximum (ties go to the lowest index).
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Admits the user with the largest achievable rate.
pub fn schedule_bu(params: &ScenarioParams, ch: &ChannelRealization, rule: PowerRule) -> SchedulingOutcome {
    let tau0 = decoding_threshold(params, ch.g2);
    let best = argmax(ch.h2.iter().map(|&h| link(params, h, ch.g2, tau0, rule).rate));
    outcome_for(params, ch, best, rule)
}

/// Admits the user whose gain has the largest CDF value under its own
/// distance-conditioned law.
///
/// Users are ranked by `(1 + r^alpha) h2`, which orders them exactly as
/// `1 - exp(-(1 + r^alpha) h2)` does but cannot saturate at 1.0.
pub fn schedule_cs(params: &ScenarioParams, ch: &ChannelRealization, rule: PowerRule) -> SchedulingOutcome {
    let best = argmax(
        ch.r
            .iter()
            .zip(&ch.h2)
            .map(|(&r, &h)| (1.0 + r.powf(params.alpha)) * h),
    );
    outcome_for(params, ch, best, rule)
}

/// Admits a uniformly chosen user.
///
/// With `Decoding::Fsic` the GF signal is always decoded first, treating the
/// GB signal as interference; the GB user is decoded after it is removed, so
/// it keeps its OMA rate only when the GF signal was decodable.
pub fn schedule_rs<R: Rng + ?Sized>(
    params: &ScenarioParams,
    ch: &ChannelRealization,
    rule: PowerRule,
    decoding: Decoding,
    rng: &mut R,
) -> SchedulingOutcome {
    let index = rng.random_range(0..ch.h2.len());
    match decoding {
        Decoding::Hsic => outcome_for(params, ch, index, rule),
        Decoding::Fsic => fsic_outcome(params, ch, index),
    }
}

fn fsic_outcome(params: &ScenarioParams, ch: &ChannelRealization, index: usize) -> SchedulingOutcome {
    let rx = params.p_f * ch.h2[index];
    let gf_rate = (rx / (params.p_b * ch.g2 + 1.0)).ln_1p() / std::f64::consts::LN_2;
    let gb_rate = if gf_rate >= params.r_f {
        gb_rate_oma(params, ch.g2)
    } else {
        (params.p_b * ch.g2 / (rx + 1.0)).ln_1p() / std::f64::consts::LN_2
    };
    SchedulingOutcome {
        admitted_index: index,
        tx_power: params.p_f,
        sic_stage: SicStage::First,
        gf_rate,
        gb_rate,
        tau0: decoding_threshold(params, ch.g2),
    }
}

/// Dispatches to the scheduler behind `scheme`.
pub fn schedule<R: Rng + ?Sized>(
    scheme: SchemeId,
    params: &ScenarioParams,
    ch: &ChannelRealization,
    rng: &mut R,
) -> SchedulingOutcome {
    let rule = scheme.power_rule();
    match scheme.selection() {
        Selection::BestRate => schedule_bu(params, ch, rule),
        Selection::CdfBased => schedule_cs(params, ch, rule),
        Selection::Random => schedule_rs(params, ch, rule, scheme.decoding(), rng),
    }
}

/// Random-selection decision from a uniform index already drawn by the caller.
pub(crate) fn schedule_with_index(
    scheme: SchemeId,
    params: &ScenarioParams,
    ch: &ChannelRealization,
    random_index: usize,
) -> SchedulingOutcome {
    let rule = scheme.power_rule();
    match scheme.selection() {
        Selection::BestRate => schedule_bu(params, ch, rule),
        Selection::CdfBased => schedule_cs(params, ch, rule),
        Selection::Random => match scheme.decoding() {
            Decoding::Hsic => outcome_for(params, ch, random_index, rule),
            Decoding::Fsic => fsic_outcome(params, ch, random_index),
        },
    }
}

/// 1 when the admitted GF user misses its target rate (strict `<`).
pub fn outage_indicator(outcome: &SchedulingOutcome, params: &ScenarioParams) -> u8 {
    u8::from(outcome.gf_rate < params.r_f)
}
