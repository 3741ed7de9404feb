//! Closed forms for the best-user scheduler, with and without power control.

use crate::analytic::combinatorics::{binomial, multinomial_expansion, ExpansionTerm};
use crate::analytic::oracle;
use crate::error::{Error, Result};
use crate::integrate::gauss_chebyshev;
use crate::params::{DerivedThresholds, ScenarioParams};
use crate::quadrature::{clamp_probability, GainLaw, QuadratureGrid};

/// Largest K for which the H-terms are expanded over integer compositions;
/// beyond it they are integrated numerically.
pub const MAX_EXPANSION_K: usize = 5;
/// Largest number of GF quadrature nodes for the composition expansion.
pub const MAX_EXPANSION_NODES: usize = 10;

pub(crate) fn require_k2(params: &ScenarioParams) -> Result<()> {
    if params.k < 2 {
        return Err(Error::Unsupported(format!(
            "the BU closed form needs K >= 2 (got K = {}); with one GF user every scheme reduces to the CS closed form at K = 1",
            params.k
        )));
    }
    Ok(())
}

/// The |g|^2 breakpoints and GF power shared by all BU terms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BuSetup {
    pub k: usize,
    pub p_b: f64,
    /// P_F, or P_m under power control.
    pub p_gf: f64,
    pub gamma_f: f64,
    pub t: DerivedThresholds,
}

impl BuSetup {
    pub fn fixed(params: &ScenarioParams) -> Self {
        Self {
            k: params.k,
            p_b: params.p_b,
            p_gf: params.p_f,
            gamma_f: params.gamma_f(),
            t: params.thresholds(),
        }
    }

    pub fn power_control(params: &ScenarioParams) -> Self {
        Self {
            p_gf: params.p_m,
            t: params.thresholds_pc(),
            ..Self::fixed(params)
        }
    }

    /// Largest gain that still leaves a first-stage user in outage.
    pub fn upper(&self, w: f64) -> f64 {
        self.t.alpha_f * (self.p_b * w + 1.0)
    }

    /// `tau(w) / P`: gains above it are decoded at the first stage.
    pub fn lower(&self, w: f64) -> f64 {
        (w / self.t.alpha_b - 1.0) / self.p_gf
    }
}

fn g1(grid: &QuadratureGrid, s: &BuSetup, k: usize) -> f64 {
    gauss_chebyshev(
        |w| {
            let lo = grid.cdf_gf(s.lower(w));
            let up = grid.cdf_gf(s.upper(w));
            GainLaw::pdf_gb(grid, w) * lo.powi(k as i32) * (up - lo).powi((s.k - k) as i32)
        },
        s.t.alpha_b,
        s.t.alpha_1,
        grid.orders.i,
    )
}

fn g2(grid: &QuadratureGrid, s: &BuSetup, k: usize, alpha_2: f64) -> f64 {
    let ff = grid.cdf_gf(s.t.alpha_f).powi(k as i32);
    gauss_chebyshev(
        |w| {
            let lo = grid.cdf_gf(s.lower(w));
            let up = grid.cdf_gf(s.upper(w));
            GainLaw::pdf_gb(grid, w) * ff * (up - lo).powi((s.k - k) as i32)
        },
        s.t.alpha_1,
        alpha_2,
        grid.orders.j,
    )
}

fn g3(grid: &QuadratureGrid, s: &BuSetup) -> f64 {
    gauss_chebyshev(
        |w| GainLaw::pdf_gb(grid, w) * grid.cdf_gf(s.upper(w)).powi(s.k as i32),
        0.0,
        s.t.alpha_b,
        grid.orders.m,
    )
}

/// `int_{alpha_1}^inf f_B(w) F_F(alpha_F)^k [F_F(up) - F_F(lo)]^{K-k} dw`,
/// evaluated term by term after expanding both CDF powers over integer
/// compositions (index 0 carries `Psi_0 = -2`, `mu_0 = 0`).
pub(crate) fn h2(grid: &QuadratureGrid, s: &BuSetup, k: usize) -> f64 {
    let kk = s.k - k;
    let nodes = grid.extended_gf_nodes();
    let expansions: Vec<Vec<ExpansionTerm>> = (0..=kk).map(|m| multinomial_expansion(&nodes, m)).collect();
    let t = &s.t;
    let mut total = 0.0;
    for (phi, c) in grid.phi.iter().zip(&grid.c) {
        let mut inner = 0.0;
        for m in 0..=kk {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mut acc = 0.0;
            for p in &expansions[kk - m] {
                for q in &expansions[m] {
                    let rate = p.rate * t.alpha_f * s.p_b + q.rate / (s.p_gf * t.alpha_b) + c;
                    // The q-part of the exponent simplifies to -q mu gamma_F / P.
                    let exponent = -p.rate * t.alpha_f * (1.0 + s.p_b * t.alpha_1) - q.rate * s.gamma_f / s.p_gf - c * t.alpha_1;
                    acc += p.coef * q.coef * exponent.exp() / rate;
                }
            }
            inner += binomial(kk, m) * sign * acc;
        }
        total += phi * c * inner;
    }
    (-0.5f64).powi(kk as i32) * grid.cdf_gf(t.alpha_f).powi(k as i32) / grid.ring * total
}

fn h2_or_integral(grid: &QuadratureGrid, s: &BuSetup, k: usize) -> Result<f64> {
    if s.k <= MAX_EXPANSION_K && grid.psi.len() <= MAX_EXPANSION_NODES {
        Ok(h2(grid, s, k))
    } else {
        Ok(oracle::h2_integral(grid, s, k)?.value)
    }
}

/// Outage probability of the best-user scheduler with fixed GF power.
///
/// The |g|^2 integrals over `(0, alpha_B)`, `(alpha_B, alpha_1)` and
/// `(alpha_1, alpha_2)` use Gauss–Chebyshev rules of order M, I and J. In the
/// super-unity regime the last range is unbounded and its terms are summed in
/// closed form instead.
pub fn outage_bu(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    params.validate()?;
    require_k2(params)?;
    let s = BuSetup::fixed(params);
    let k = s.k;
    let mut total: f64 = (0..=k).map(|j| binomial(k, j) * g1(grid, &s, j)).sum::<f64>() + g3(grid, &s);
    match s.t.alpha_2 {
        Some(a2) => {
            total += (0..=k).map(|j| binomial(k, j) * g2(grid, &s, j, a2)).sum::<f64>();
            let tail = 1.0 - clamp_probability(GainLaw::cdf_gb(grid, a2));
            total += tail * grid.cdf_gf(s.t.alpha_f).powi(k as i32);
        }
        None => {
            for j in 0..=k {
                total += binomial(k, j) * h2_or_integral(grid, &s, j)?;
            }
        }
    }
    Ok(clamp_probability(total))
}

/// Outage probability of the best-user scheduler under power control.
///
/// Power control confines the outage region to `|g|^2 < alpha_1` plus the
/// event that every user is below `gamma_F / P_m`, so there is no regime split.
pub fn outage_bu_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    params.validate()?;
    require_k2(params)?;
    let s = BuSetup::power_control(params);
    let k = s.k;
    let mut total: f64 = (0..=k).map(|j| binomial(k, j) * g1(grid, &s, j)).sum::<f64>() + g3(grid, &s);
    let tail = 1.0 - clamp_probability(GainLaw::cdf_gb(grid, s.t.alpha_1));
    total += tail * grid.cdf_gf(params.gamma_f() / params.p_m).powi(k as i32);
    Ok(clamp_probability(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureOrders;

    fn grid(p: &ScenarioParams) -> QuadratureGrid {
        QuadratureGrid::new(p, QuadratureOrders::default()).unwrap()
    }

    #[test]
    fn k1_is_unsupported() {
        let p = ScenarioParams::default().with_k(1).with_snr_db(20.0);
        assert!(matches!(outage_bu(&p, &grid(&p)), Err(Error::Unsupported(_))));
        assert!(matches!(outage_bu_pc(&p, &grid(&p)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn values_are_probabilities_and_decrease() {
        let base = ScenarioParams::default().with_k(3);
        let mut last = (1.0, 1.0);
        for db in (0..=45).step_by(5) {
            let p = base.with_snr_db(db as f64);
            let g = grid(&p);
            let (a, b) = (outage_bu(&p, &g).unwrap(), outage_bu_pc(&p, &g).unwrap());
            assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            assert!(a <= last.0 && b <= last.1, "not decreasing at {db} dB");
            last = (a, b);
        }
    }

    #[test]
    fn vanishing_target_rate_means_no_outage() {
        let p = ScenarioParams::default().with_k(3).with_rates(1.0, 1e-9).with_snr_db(10.0);
        assert!(outage_bu(&p, &grid(&p)).unwrap() < 1e-8);
    }

    #[test]
    fn super_unity_has_floor() {
        let base = ScenarioParams::default().with_k(2).with_rates(1.5, 0.9);
        let hi = base.with_snr_db(60.0);
        let v = outage_bu(&hi, &grid(&hi)).unwrap();
        assert!(v > 1e-3, "expected an error floor, got {v}");
    }
}
