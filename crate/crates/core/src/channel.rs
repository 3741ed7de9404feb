//! User placement and composite Rayleigh/path-loss channel draws.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ScenarioParams;

/// One draw of distances and composite channel gains.
///
/// `h2[k]` belongs to GF user `k`; the vector is never sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub r_b: f64,
    pub r: Vec<f64>,
    pub g2: f64,
    pub h2: Vec<f64>,
}

/// Inverts the area-uniform radius CDF `(r^2 - in^2) / (out^2 - in^2)`.
pub fn radius_from_uniform(u: f64, inner: f64, outer: f64) -> f64 {
    (u * (outer * outer - inner * inner) + inner * inner).sqrt()
}

/// `|zeta|^2 / (1 + r^alpha)`.
pub fn composite_gain(zeta2: f64, r: f64, alpha: f64) -> f64 {
    zeta2 / (1.0 + r.powf(alpha))
}

/// Draws the GB distance on the ring and `K` GF distances on the GF region.
pub fn sample_positions<R: Rng + ?Sized>(params: &ScenarioParams, rng: &mut R) -> (f64, Vec<f64>) {
    let r_b = radius_from_uniform(rng.random(), params.d_0, params.d_1);
    let r = (0..params.k).map(|_| sample_gf_radius(params, rng)).collect();
    (r_b, r)
}

pub(crate) fn sample_gf_radius<R: Rng + ?Sized>(params: &ScenarioParams, rng: &mut R) -> f64 {
    if params.gf_fixed_distance() {
        params.d_f
    } else {
        radius_from_uniform(rng.random(), params.d_f_inner, params.d_f)
    }
}

/// Draws fresh unit-mean exponential fading for the given distances.
pub fn sample_channels<R: Rng + ?Sized>(params: &ScenarioParams, r_b: f64, r: &[f64], rng: &mut R) -> ChannelRealization {
    let g2 = composite_gain(rng.sample(Exp1), r_b, params.alpha);
    let h2 = r
        .iter()
        .map(|&rk| composite_gain(rng.sample(Exp1), rk, params.alpha))
        .collect();
    ChannelRealization {
        r_b,
        r: r.to_vec(),
        g2,
        h2,
    }
}

/// `F_k(x | r) = 1 - exp(-(1 + r^alpha) x)`, the statistic the CDF-based
/// scheduler ranks users by.
pub fn conditional_cdf_gf(r: f64, alpha: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain {
            what: "conditional_cdf_gf",
            value: x,
        });
    }
    Ok(-(-(1.0 + r.powf(alpha)) * x).exp_m1())
}
