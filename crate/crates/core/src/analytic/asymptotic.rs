//! High-SNR expansions, their dominant terms and the resulting diversity orders.
//!
//! All expansions assume the GB and GF users share one power `P` (`P_B = P_F`
//! for fixed power, `P_B = P_m` under power control) and are polynomials in
//! `1/P` built from the slope constants `S_F`, `S_B`.

use crate::analytic::bu::require_k2;
use crate::analytic::combinatorics::{binomial, multinomial_expansion, ExpansionTerm};
use crate::analytic::cs::sum_ln;
use crate::error::{Error, Result};
use crate::params::{Regime, ScenarioParams};
use crate::quadrature::QuadratureGrid;
use crate::schemes::SchemeId;

fn common_power(params: &ScenarioParams, gf_power: f64, name: &str) -> Result<f64> {
    params.validate()?;
    if ((params.p_b - gf_power) / params.p_b).abs() > 1e-9 {
        return Err(Error::Unsupported(format!(
            "high-SNR expansion assumes P_B = {name} (got P_B = {}, {name} = {gf_power})",
            params.p_b
        )));
    }
    Ok(params.p_b)
}

fn sign(i: usize) -> f64 {
    if i.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

struct Rates {
    gb: f64,
    gf: f64,
    /// `gamma_B (1 + gamma_F)`.
    a1: f64,
    /// `a1 / (1 - gamma_B gamma_F)`, sub-unity only.
    a2: f64,
}

impl Rates {
    fn of(params: &ScenarioParams) -> Self {
        let (gb, gf) = (params.gamma_b(), params.gamma_f());
        let a1 = gb * (1.0 + gf);
        Self {
            gb,
            gf,
            a1,
            a2: a1 / (1.0 - gb * gf),
        }
    }
}

fn i1(grid: &QuadratureGrid, r: &Rates, k_total: usize, k: usize, p: f64) -> f64 {
    let kk = k_total - k;
    let mut outer = 0.0;
    for i in 0..=kk {
        let mut inner = 0.0;
        for j in 0..=k {
            let e = (k - j + i + 1) as i32;
            inner += binomial(k, j) * sign(j) * ((1.0 + r.gf).powi(e) - 1.0) / e as f64;
        }
        outer += binomial(kk, i)
            * (r.gf + 1.0).powi((kk - i) as i32)
            * (r.gf - 1.0 / r.gb).powi(i as i32)
            * r.gb.powi(i as i32 + 1)
            * inner;
    }
    grid.s_b * grid.s_f.powi(k_total as i32) / p.powi(k_total as i32 + 1) * outer
}

fn i2(grid: &QuadratureGrid, r: &Rates, k_total: usize, k: usize, p: f64) -> f64 {
    let kk = k_total - k;
    let sum: f64 = (0..=kk)
        .map(|i| {
            let e = i as i32 + 1;
            binomial(kk, i)
                * (r.gf + 1.0).powi((kk - i) as i32)
                * (r.gf - 1.0 / r.gb).powi(i as i32)
                * r.gf.powi(k as i32)
                * (r.a2.powi(e) - r.a1.powi(e))
                / e as f64
        })
        .sum();
    grid.s_b * grid.s_f.powi(k_total as i32) / p.powi(k_total as i32 + 1) * sum
}

fn i3(grid: &QuadratureGrid, r: &Rates, k_total: usize, p: f64) -> f64 {
    let kp = k_total as i32 + 1;
    grid.s_b * (grid.s_f * r.gf).powi(k_total as i32) / (p.powi(kp) * kp as f64) * ((1.0 + r.gb).powi(kp) - 1.0)
}

/// High-SNR limit of the H-term: every exponential replaced by 1.
fn h2_limit(grid: &QuadratureGrid, r: &Rates, k_total: usize, k: usize, p: f64) -> f64 {
    let kk = k_total - k;
    let nodes = grid.extended_gf_nodes();
    let expansions: Vec<Vec<ExpansionTerm>> = (0..=kk).map(|m| multinomial_expansion(&nodes, m)).collect();
    let mut total = 0.0;
    for (phi, c) in grid.phi.iter().zip(&grid.c) {
        let mut inner = 0.0;
        for m in 0..=kk {
            let mut acc = 0.0;
            for pt in &expansions[kk - m] {
                for qt in &expansions[m] {
                    acc += pt.coef * qt.coef / (pt.rate * r.gf + qt.rate / r.gb + c);
                }
            }
            inner += binomial(kk, m) * sign(m) * acc;
        }
        total += phi * c * inner;
    }
    (-0.5f64).powi(kk as i32) * (grid.s_f * r.gf).powi(k as i32) / (grid.ring * p.powi(k as i32)) * total
}

/// High-SNR expansion of the BU outage with fixed power.
pub fn high_snr_bu(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_f, "P_F")?;
    require_k2(params)?;
    let (k, r) = (params.k, Rates::of(params));
    let mut total: f64 = (0..=k).map(|j| binomial(k, j) * i1(grid, &r, k, j, p)).sum::<f64>() + i3(grid, &r, k, p);
    match params.regime() {
        Regime::SubUnity => {
            total += (0..=k).map(|j| binomial(k, j) * i2(grid, &r, k, j, p)).sum::<f64>();
            total += (grid.s_f * r.gf / p).powi(k as i32) * (1.0 - grid.s_b * r.a2 / p);
        }
        Regime::SuperUnity => {
            total += (0..=k).map(|j| binomial(k, j) * h2_limit(grid, &r, k, j, p)).sum::<f64>();
        }
    }
    Ok(total)
}

/// High-SNR expansion of the BU outage under power control.
pub fn high_snr_bu_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_m, "P_m")?;
    require_k2(params)?;
    let (k, r) = (params.k, Rates::of(params));
    let total: f64 = (0..=k).map(|j| binomial(k, j) * i1(grid, &r, k, j, p)).sum::<f64>()
        + i3(grid, &r, k, p)
        + (grid.s_f * r.gf / p).powi(k as i32) * (1.0 - grid.s_b * r.a1 / p);
    Ok(total)
}

/// High-SNR expansion of the CS outage with fixed power.
pub fn high_snr_cs(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_f, "P_F")?;
    let (k, r) = (params.k, Rates::of(params));
    let ki = k as i32;
    let regime = params.regime();
    let total = sum_ln(grid, |unit, mu, c| {
        let lead = (mu * r.gf / p).powi(ki);
        let mut v = unit * lead;
        match regime {
            Regime::SubUnity => {
                let s1: f64 = (0..=k).map(|j| binomial(k, j) * r.a2.powi(j as i32 + 1) / (j + 1) as f64).sum();
                let s3: f64 = (0..=k)
                    .map(|j| {
                        binomial(k, j) * sign(k - j) * (r.a1.powi(j as i32 + 1) - r.a2.powi(j as i32 + 1))
                            / (r.gb.powi(j as i32) * (j + 1) as f64)
                    })
                    .sum();
                v += unit * c / p * lead * s1 + unit * c * mu.powi(ki) / p.powi(ki + 1) * s3;
            }
            Regime::SuperUnity => {
                let floor: f64 = (0..=k)
                    .map(|j| {
                        let km = j as f64 * mu;
                        let (th1, th2) = (km * r.gf + c, km / r.gb + c);
                        unit * binomial(k, j) * sign(j) * c * (1.0 / th1 - 1.0 / th2)
                    })
                    .sum();
                let s2: f64 = (0..=k)
                    .map(|j| binomial(k, j) * sign(k - j) * (r.gb * (1.0 + r.gf).powi(j as i32 + 1) - r.gb) / (j + 1) as f64)
                    .sum();
                let s1: f64 = (0..=k).map(|j| binomial(k, j) * r.gb.powi(j as i32 + 1) / (j + 1) as f64).sum();
                v += floor + unit * c * mu.powi(ki) / p.powi(ki + 1) * s2 + unit * c / p * lead * s1;
            }
        }
        v
    });
    Ok(total)
}

/// High-SNR expansion of the CS outage under power control.
pub fn high_snr_cs_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_m, "P_m")?;
    let (k, r) = (params.k, Rates::of(params));
    let s: f64 = (0..=k)
        .map(|j| binomial(k, j) * (r.gb + r.gb * r.gf).powi(j as i32 + 1) / (j + 1) as f64)
        .sum();
    let total = sum_ln(grid, |unit, mu, c| {
        let lead = (mu * r.gf / p).powi(k as i32);
        unit * c / p * lead * s + unit * lead
    });
    Ok(total)
}

/// `(S_F gamma_F / P)^K`.
fn bu_leading(params: &ScenarioParams, grid: &QuadratureGrid, p: f64) -> f64 {
    (grid.s_f * params.gamma_f() / p).powi(params.k as i32)
}

/// `sum_{l,n} Psi_l Phi_n / (2 (D_1 + D_0)) (mu_l gamma_F / P)^K`.
fn cs_leading(params: &ScenarioParams, grid: &QuadratureGrid, p: f64) -> f64 {
    let gf = params.gamma_f();
    sum_ln(grid, |unit, mu, _| unit * (mu * gf / p).powi(params.k as i32))
}

/// Single dominant high-SNR term of the BU outage with fixed power.
pub fn dominant_bu(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_f, "P_F")?;
    require_k2(params)?;
    Ok(match params.regime() {
        Regime::SubUnity => bu_leading(params, grid, p),
        Regime::SuperUnity => h2_limit(grid, &Rates::of(params), params.k, 0, p),
    })
}

pub fn dominant_bu_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_m, "P_m")?;
    require_k2(params)?;
    Ok(bu_leading(params, grid, p))
}

/// Single dominant high-SNR term of the CS outage with fixed power; in the
/// super-unity regime this is the error floor.
pub fn dominant_cs(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_f, "P_F")?;
    Ok(match params.regime() {
        Regime::SubUnity => cs_leading(params, grid, p),
        Regime::SuperUnity => {
            let (k, r) = (params.k, Rates::of(params));
            sum_ln(grid, |unit, mu, c| {
                (0..=k)
                    .map(|j| {
                        let km = j as f64 * mu;
                        unit * binomial(k, j) * sign(j) * c * (1.0 / (km * r.gf + c) - 1.0 / (km / r.gb + c))
                    })
                    .sum()
            })
        }
    })
}

pub fn dominant_cs_pc(params: &ScenarioParams, grid: &QuadratureGrid) -> Result<f64> {
    let p = common_power(params, params.p_m, "P_m")?;
    Ok(cs_leading(params, grid, p))
}

/// Diversity order: K under power control or in the sub-unity regime, 0 for
/// fixed power in the super-unity regime. Random selection behaves as the
/// one-user case, and the fixed-order benchmark always floors.
pub fn diversity_order(scheme: SchemeId, params: &ScenarioParams) -> u32 {
    use crate::schemes::{PowerRule, Selection};
    if scheme == SchemeId::RsFsic {
        return 0;
    }
    let k = match scheme.selection() {
        Selection::Random => 1,
        _ => params.k as u32,
    };
    match (scheme.power_rule(), params.regime()) {
        (PowerRule::PowerControl, _) | (PowerRule::Fixed, Regime::SubUnity) => k,
        (PowerRule::Fixed, Regime::SuperUnity) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{bu, cs};
    use crate::quadrature::QuadratureOrders;

    fn setup(k: usize, db: f64, r_b: f64, r_f: f64) -> (ScenarioParams, QuadratureGrid) {
        let p = ScenarioParams::default().with_k(k).with_rates(r_b, r_f).with_snr_db(db);
        let g = QuadratureGrid::new(&p, QuadratureOrders::default()).unwrap();
        (p, g)
    }

    #[test]
    fn diversity_orders() {
        let p = ScenarioParams::default().with_rates(1.0, 1.0);
        assert_eq!(diversity_order(SchemeId::Bu, &p), 0);
        assert_eq!(diversity_order(SchemeId::CsPc, &p.with_k(4)), 4);
        assert_eq!(diversity_order(SchemeId::Cs, &p.with_k(1).with_rates(1.0, 0.5)), 1);
        assert_eq!(diversity_order(SchemeId::RsFsic, &p), 0);
        assert_eq!(diversity_order(SchemeId::RsPc, &p.with_k(4)), 1);
    }

    #[test]
    fn requires_common_power() {
        let (mut p, g) = setup(3, 30.0, 1.0, 0.9);
        p.p_b = 10.0;
        assert!(matches!(high_snr_cs(&p, &g), Err(Error::Unsupported(_))));
        assert!(matches!(dominant_bu(&p, &g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn expansions_approach_exact_values() {
        let (p, g) = setup(3, 60.0, 1.0, 0.9);
        let pairs = [
            (high_snr_bu(&p, &g).unwrap(), bu::outage_bu(&p, &g).unwrap()),
            (high_snr_bu_pc(&p, &g).unwrap(), bu::outage_bu_pc(&p, &g).unwrap()),
            (high_snr_cs(&p, &g).unwrap(), cs::outage_cs(&p, &g).unwrap()),
            (high_snr_cs_pc(&p, &g).unwrap(), cs::outage_cs_pc(&p, &g).unwrap()),
        ];
        for (approx, exact) in pairs {
            assert!((approx / exact - 1.0).abs() < 0.02, "{approx} vs {exact}");
        }
    }

    #[test]
    fn super_unity_floors() {
        let (p, g) = setup(2, 80.0, 1.5, 0.9);
        let floor_bu = dominant_bu(&p, &g).unwrap();
        let floor_cs = dominant_cs(&p, &g).unwrap();
        assert!(floor_bu > 0.0 && floor_cs > 0.0);
        assert!((bu::outage_bu(&p, &g).unwrap() / floor_bu - 1.0).abs() < 0.02);
        assert!((cs::outage_cs(&p, &g).unwrap() / floor_cs - 1.0).abs() < 0.02);
    }
}
