//! Closed forms for the CDF-based scheduler.
//!
//! The sums over `l`, `n` and `k` in front of the published expressions are
//! read as distributing over every factor that carries those indices.

use crate::analytic::combinatorics::binomial;
use crate::error::Result;
use crate::params::ScenarioParams;
use crate::quadrature::{clamp_probability, QuadratureGrid};

/// Runs `term(Psi_l Phi_n / (2 (D_1 + D_0)), mu_l, c_n)` over the grid.
pub(crate) fn sum_ln(grid: &QuadratureGrid, mut term: impl FnMut(f64, f64, f64) -> f64) -> f64 {
    let mut total = 0.0;
    for (psi, mu) in grid.psi.iter().zip(&grid.mu) {
        for (phi, c) in grid.phi.iter().zip(&grid.c) {
            total += term(psi * phi / (2.0 * grid.ring), *mu, *c);
        }
    }
    total
}

fn alternating(k: usize, j: usize) -> f64 {
    let s = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    s * binomial(k, j)
}

/// `(1 - e^{-mu x})^K`, the per-node factor of the scheduled-user CDF.
fn node_cdf_pow(mu: f64, x: f64, k: usize) -> f64 {
    (-(-mu * x).exp_m1()).powi(k as i32)
}

/// Outage probability of the CDF-based scheduler with fixed GF power.
pub fn outage_cs(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    params.validate()?;
    let t = params.thresholds();
    let (k, p_b, p_f) = (params.k, params.p_b, params.p_f);
    let total = sum_ln(grid, |unit, mu, c| {
        let mut acc = 0.0;
        for j in 0..=k {
            let x1 = unit * alternating(k, j);
            let km = j as f64 * mu;
            let th1 = km * p_b * t.alpha_f + c;
            let th2 = km / (p_f * t.alpha_b) + c;
            // e^{k mu / P_F - Theta_2 a} with the exponent combined first.
            let e2 = |a: f64| (km / p_f * (1.0 - a / t.alpha_b) - c * a).exp();
            acc += match t.alpha_2 {
                Some(a2) => {
                    x1 * c / th1 * (-km * t.alpha_f).exp() * -(-th1 * a2).exp_m1()
                        + x1 * c / th2 * (e2(a2) - e2(t.alpha_1))
                }
                None => x1 * c / th1 * (-km * t.alpha_f).exp() - x1 * c / th2 * e2(t.alpha_1),
            };
        }
        acc + unit * (-c * t.alpha_1).exp() * node_cdf_pow(mu, t.alpha_f, k)
    });
    Ok(clamp_probability(total))
}

/// Outage probability of the CDF-based scheduler under power control.
pub fn outage_cs_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    params.validate()?;
    let t = params.thresholds_pc();
    let (k, p_b) = (params.k, params.p_b);
    let total = sum_ln(grid, |unit, mu, c| {
        let mut acc = 0.0;
        for j in 0..=k {
            let x1 = unit * alternating(k, j);
            let km = j as f64 * mu;
            let th1 = km * p_b * t.alpha_f + c;
            acc += x1 * c / th1 * (-km * t.alpha_f).exp() * -(-th1 * t.alpha_1).exp_m1();
        }
        acc + unit * (-c * t.alpha_1).exp() * node_cdf_pow(mu, t.alpha_f, k)
    });
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
    fn decreasing_in_snr_and_k() {
        for k in 1..=4 {
            let mut last = 1.0;
            for db in (0..=50).step_by(5) {
                let p = ScenarioParams::default().with_k(k).with_snr_db(db as f64);
                let v = outage_cs(&p, &grid(&p)).unwrap();
                assert!(v <= last + 1e-15);
                last = v;
            }
        }
        let p2 = ScenarioParams::default().with_k(2).with_snr_db(20.0);
        let p3 = p2.with_k(3);
        assert!(outage_cs(&p3, &grid(&p3)).unwrap() < outage_cs(&p2, &grid(&p2)).unwrap());
    }

    #[test]
    fn pc_never_worse() {
        for db in (0..=45).step_by(5) {
            let p = ScenarioParams::default().with_k(3).with_snr_db(db as f64);
            let g = grid(&p);
            assert!(outage_cs_pc(&p, &g).unwrap() <= outage_cs(&p, &g).unwrap() + 1e-12);
        }
    }

    #[test]
    fn huge_powers_do_not_overflow() {
        let p = ScenarioParams::default().with_k(4).with_snr_db(-20.0);
        let v = outage_cs(&p, &grid(&p)).unwrap();
        assert!(v.is_finite() && v > 0.9);
    }
}
