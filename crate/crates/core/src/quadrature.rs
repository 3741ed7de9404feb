//! Channel-gain statistics: the Gauss–Chebyshev grid behind every closed form,
//! an exact-integral counterpart, and the clamp diagnostics.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{chebyshev_node, integrate, Tolerance};
use crate::params::ScenarioParams;

static CLAMP_EVENTS: AtomicU64 = AtomicU64::new(0);

/// Number of times a probability left `[0, 1]` and was clamped, process-wide.
pub fn clamp_events() -> u64 {
    CLAMP_EVENTS.load(Ordering::Relaxed)
}

/// Clamps `p` into `[0, 1]`, counting the event when it actually moves.
pub fn clamp_probability(p: f64) -> f64 {
    if (0.0..=1.0).contains(&p) {
        p
    } else {
        CLAMP_EVENTS.fetch_add(1, Ordering::Relaxed);
        p.clamp(0.0, 1.0)
    }
}

/// Quadrature orders: L and N for the distance integrals of the GF and GB
/// gain laws, I, J and M for the |g|^2 integrals of the BU closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureOrders {
    pub l: usize,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub m: usize,
}

impl QuadratureOrders {
    pub fn uniform(order: usize) -> Self {
        Self {
            l: order,
            n: order,
            i: order,
            j: order,
            m: order,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("L", self.l), ("N", self.n), ("I", self.i), ("J", self.j), ("M", self.m)] {
            if v == 0 {
                return Err(Error::invalid(name, "quadrature order must be >= 1"));
            }
        }
        Ok(())
    }
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        Self::uniform(10)
    }
}

/// Distribution functions of the channel gains, as consumed by the oracles.
///
/// Values are returned unclamped so that the oracle integrates exactly what the
/// closed forms see.
pub trait GainLaw: Sync {
    /// CDF of one GF user's gain, distance averaged.
    fn cdf_gf(&self, x: f64) -> f64;
    fn pdf_gf(&self, x: f64) -> f64;
    fn cdf_gb(&self, y: f64) -> f64;
    fn pdf_gb(&self, y: f64) -> f64;
    /// CDF of the gain of the user picked by the CDF-based scheduler among `k`.
    fn cdf_cs(&self, x: f64, k: usize) -> f64;
}

/// Precomputed Gauss–Chebyshev nodes, weights and slope constants.
///
/// `psi[l]`, `mu[l]` carry the GF distance law, `phi[n]`, `c[n]` the GB one.
/// A GF annulus of zero width collapses to the single node `(2, 1 + D_F^alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub orders: QuadratureOrders,
    pub psi: Vec<f64>,
    pub mu: Vec<f64>,
    pub phi: Vec<f64>,
    pub c: Vec<f64>,
    /// `D_1 + D_0`, the normaliser of the GB sums.
    pub ring: f64,
    pub s_f: f64,
    pub s_b: f64,
}

impl QuadratureGrid {
    pub fn new(params: &ScenarioParams, orders: QuadratureOrders) -> Result<Self> {
        params.validate()?;
        orders.validate()?;
        let (psi, mu) = if params.gf_fixed_distance() {
            (vec![2.0], vec![1.0 + params.d_f.powf(params.alpha)])
        } else {
            let (outer, inner) = (params.d_f, params.d_f_inner);
            (1..=orders.l)
                .map(|l| {
                    let t = chebyshev_node(l, orders.l);
                    let r = 0.5 * (outer + inner) + 0.5 * (outer - inner) * t;
                    let w = 2.0 / (outer + inner) * PI / orders.l as f64 * (1.0 - t * t).sqrt() * r;
                    (w, 1.0 + r.powf(params.alpha))
                })
                .unzip()
        };
        let (phi, c): (Vec<f64>, Vec<f64>) = (1..=orders.n)
            .map(|n| {
                let t = chebyshev_node(n, orders.n);
                let r = 0.5 * (params.d_1 + params.d_0) + 0.5 * (params.d_1 - params.d_0) * t;
                (PI / orders.n as f64 * (1.0 - t * t).sqrt() * r, 1.0 + r.powf(params.alpha))
            })
            .unzip();
        let ring = params.d_1 + params.d_0;
        let s_f = 0.5 * psi.iter().zip(&mu).map(|(p, m)| p * m).sum::<f64>();
        let s_b = phi.iter().zip(&c).map(|(p, c)| p * c).sum::<f64>() / ring;
        Ok(Self {
            orders,
            psi,
            mu,
            phi,
            c,
            ring,
            s_f,
            s_b,
        })
    }

    /// GF nodes with the extra index `l = 0` (`Psi_0 = -2`, `mu_0 = 0`) used by
    /// the multinomial expansion of powers of the GF CDF.
    pub fn extended_gf_nodes(&self) -> Vec<(f64, f64)> {
        std::iter::once((-2.0, 0.0))
            .chain(self.psi.iter().copied().zip(self.mu.iter().copied()))
            .collect()
    }

    /// `(1/(D_1 + D_0)) sum_n Phi_n`; tends to 1 as N grows.
    pub fn gb_weight_sum(&self) -> f64 {
        self.phi.iter().sum::<f64>() / self.ring
    }

    pub fn cdf_gf_unordered(&self, x: f64) -> Result<f64> {
        check_gain("cdf_gf_unordered", x)?;
        Ok(clamp_probability(self.cdf_gf(x)))
    }

    pub fn cdf_gb(&self, y: f64) -> Result<f64> {
        check_gain("cdf_gb", y)?;
        Ok(clamp_probability(GainLaw::cdf_gb(self, y)))
    }

    pub fn pdf_gb(&self, y: f64) -> Result<f64> {
        check_gain("pdf_gb", y)?;
        Ok(GainLaw::pdf_gb(self, y).max(0.0))
    }

    pub fn cdf_cs_scheduled(&self, x: f64, k: usize) -> Result<f64> {
        check_gain("cdf_cs_scheduled", x)?;
        if k == 0 {
            return Err(Error::invalid("K", "need at least one GF user"));
        }
        Ok(clamp_probability(self.cdf_cs(x, k)))
    }
}

fn check_gain(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x })
    }
}

impl GainLaw for QuadratureGrid {
    fn cdf_gf(&self, x: f64) -> f64 {
        0.5 * self.psi.iter().zip(&self.mu).map(|(p, m)| -p * (-m * x).exp_m1()).sum::<f64>()
    }

    fn pdf_gf(&self, x: f64) -> f64 {
        0.5 * self.psi.iter().zip(&self.mu).map(|(p, m)| p * m * (-m * x).exp()).sum::<f64>()
    }

    fn cdf_gb(&self, y: f64) -> f64 {
        self.phi.iter().zip(&self.c).map(|(p, c)| -p * (-c * y).exp_m1()).sum::<f64>() / self.ring
    }

    fn pdf_gb(&self, y: f64) -> f64 {
        self.phi.iter().zip(&self.c).map(|(p, c)| p * c * (-c * y).exp()).sum::<f64>() / self.ring
    }

    fn cdf_cs(&self, x: f64, k: usize) -> f64 {
        0.5 * self
            .psi
            .iter()
            .zip(&self.mu)
            .map(|(p, m)| p * (-(-m * x).exp_m1()).powi(k as i32))
            .sum::<f64>()
    }
}

/// The gain laws evaluated by adaptive integration over distance instead of
/// a fixed quadrature rule.
#[derive(Debug, Clone, Copy)]
pub struct ExactLaw {
    alpha: f64,
    gf: (f64, f64),
    gb: (f64, f64),
}

impl ExactLaw {
    pub fn new(params: &ScenarioParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            alpha: params.alpha,
            gf: (params.d_f_inner, params.d_f),
            gb: (params.d_0, params.d_1),
        })
    }

    /// Average of `g(1 + r^alpha)` over a uniform point in the annulus.
    fn radial_mean(&self, (inner, outer): (f64, f64), g: impl Fn(f64) -> f64) -> f64 {
        if inner == outer {
            return g(1.0 + outer.powf(self.alpha));
        }
        let norm = 2.0 / (outer * outer - inner * inner);
        let tol = Tolerance::new(1e-15, 1e-12);
        let res = integrate(|r| g(1.0 + r.powf(self.alpha)) * r, inner, outer, tol);
        // Smooth bounded integrand; the best estimate is kept even if the
        // budget runs out.
        let v = match res {
            Ok(i) => i.value,
            Err(Error::NonConvergence { value, .. }) => value,
            Err(_) => f64::NAN,
        };
        norm * v
    }
}

impl GainLaw for ExactLaw {
    fn cdf_gf(&self, x: f64) -> f64 {
        self.radial_mean(self.gf, |m| -(-m * x).exp_m1())
    }

    fn pdf_gf(&self, x: f64) -> f64 {
        self.radial_mean(self.gf, |m| m * (-m * x).exp())
    }

    fn cdf_gb(&self, y: f64) -> f64 {
        self.radial_mean(self.gb, |c| -(-c * y).exp_m1())
    }

    fn pdf_gb(&self, y: f64) -> f64 {
        self.radial_mean(self.gb, |c| c * (-c * y).exp())
    }

    fn cdf_cs(&self, x: f64, k: usize) -> f64 {
        self.radial_mean(self.gf, |m| (-(-m * x).exp_m1()).powi(k as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate_to_infinity;
    use approx::assert_abs_diff_eq;

    fn grid() -> QuadratureGrid {
        QuadratureGrid::new(&ScenarioParams::default(), QuadratureOrders::default()).unwrap()
    }

    #[test]
    fn cdf_at_origin_and_limit() {
        let g = grid();
        assert_eq!(g.cdf_gf_unordered(0.0).unwrap(), 0.0);
        assert_eq!(g.cdf_gb(0.0).unwrap(), 0.0);
        assert_eq!(g.cdf_cs_scheduled(0.0, 3).unwrap(), 0.0);
        assert_abs_diff_eq!(g.cdf_gf_unordered(1e3).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn negative_argument_is_domain_error() {
        let g = grid();
        assert!(matches!(g.cdf_gf_unordered(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(g.cdf_gb(-1.0), Err(Error::Domain { .. })));
        assert!(matches!(g.pdf_gb(-1.0), Err(Error::Domain { .. })));
        assert!(matches!(g.cdf_cs_scheduled(-1.0, 2), Err(Error::Domain { .. })));
    }

    // Direct evaluation of the defining integral, written independently of the grid.
    fn disc_cdf(x: f64, d: f64, alpha: f64) -> f64 {
        let r = integrate(
            |r: f64| (1.0 - (-(1.0 + r.powf(alpha)) * x).exp()) * r,
            0.0,
            d,
            Tolerance::new(1e-14, 1e-12),
        )
        .unwrap();
        2.0 / (d * d) * r.value
    }

    // The rule converges as 1/L^2 because of the square-root endpoint factor:
    // about 4e-3 at order 10 and 4e-5 at order 100.
    #[test]
    fn gf_cdf_matches_integral() {
        let p = ScenarioParams::default();
        let exact = disc_cdf(0.5, 3.0, 3.0);
        assert_abs_diff_eq!(grid().cdf_gf_unordered(0.5).unwrap(), exact, epsilon = 5e-3);
        let fine = QuadratureGrid::new(&p, QuadratureOrders::uniform(100)).unwrap();
        assert_abs_diff_eq!(fine.cdf_gf_unordered(0.5).unwrap(), exact, epsilon = 1e-4);
    }

    #[test]
    fn gb_cdf_matches_integral() {
        let g = grid();
        let direct = integrate(
            |r: f64| (1.0 - (-(1.0 + r.powi(3)) * 0.3).exp()) * r,
            1.0,
            3.0,
            Tolerance::new(1e-14, 1e-12),
        )
        .unwrap()
        .value
            * 2.0
            / 8.0;
        assert_abs_diff_eq!(g.cdf_gb(0.3).unwrap(), direct, epsilon = 5e-3);
        let fine = QuadratureGrid::new(&ScenarioParams::default(), QuadratureOrders::uniform(100)).unwrap();
        assert_abs_diff_eq!(fine.cdf_gb(0.3).unwrap(), direct, epsilon = 1e-4);
    }

    #[test]
    fn gb_pdf_normalised() {
        let g = grid();
        let total = integrate_to_infinity(|y| g.pdf_gb(y).unwrap(), 0.0, Tolerance::default()).unwrap();
        // The integral equals sum Phi_n / (D_1 + D_0) exactly.
        assert_abs_diff_eq!(total.value, g.gb_weight_sum(), epsilon = 1e-10);
        assert_abs_diff_eq!(total.value, 1.0, epsilon = 5e-3);
    }

    #[test]
    fn gb_weight_sum_converges_to_one() {
        let p = ScenarioParams::default();
        let err = |n| (QuadratureGrid::new(&p, QuadratureOrders::uniform(n)).unwrap().gb_weight_sum() - 1.0).abs();
        assert!(err(10) < 5e-3);
        assert!(err(40) < err(10));
        assert!(err(160) < 1e-4);
    }

    #[test]
    fn cs_cdf_reduces_to_unordered_at_k1() {
        let g = grid();
        for x in [0.0, 0.01, 0.2, 1.0, 7.0] {
            assert_abs_diff_eq!(g.cdf_cs_scheduled(x, 1).unwrap(), g.cdf_gf_unordered(x).unwrap(), epsilon = 1e-15);
        }
    }

    #[test]
    fn slope_constants() {
        let g = grid();
        let x = 1e-7;
        assert_abs_diff_eq!(GainLaw::cdf_gf(&g, x) / x, g.s_f, epsilon = 1e-3 * g.s_f);
        assert_abs_diff_eq!(GainLaw::pdf_gb(&g, 0.0), g.s_b, epsilon = 1e-12);
    }

    #[test]
    fn annulus_grid_matches_exact_law() {
        let p = ScenarioParams {
            d_f_inner: 1.0,
            ..ScenarioParams::default()
        };
        let g = QuadratureGrid::new(&p, QuadratureOrders::uniform(100)).unwrap();
        let exact = ExactLaw::new(&p).unwrap();
        for x in [0.01, 0.1, 1.0] {
            assert_abs_diff_eq!(GainLaw::cdf_gf(&g, x), exact.cdf_gf(x), epsilon = 1e-4);
        }
    }

    #[test]
    fn fixed_distance_grid_is_exact() {
        let p = ScenarioParams {
            d_f: 1.0,
            d_f_inner: 1.0,
            ..ScenarioParams::default()
        };
        let g = QuadratureGrid::new(&p, QuadratureOrders::default()).unwrap();
        assert_eq!(g.psi.len(), 1);
        assert_abs_diff_eq!(GainLaw::cdf_gf(&g, 0.3), 1.0 - (-0.6f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn exact_law_cs_cdf() {
        let p = ScenarioParams::default();
        let law = ExactLaw::new(&p).unwrap();
        assert_abs_diff_eq!(law.cdf_cs(0.4, 1), law.cdf_gf(0.4), epsilon = 1e-13);
        assert!(law.cdf_cs(0.4, 3) < law.cdf_gf(0.4).powi(1));
    }

    #[test]
    fn clamp_counts_only_out_of_range() {
        let before = clamp_events();
        assert_eq!(clamp_probability(0.5), 0.5);
        assert_eq!(clamp_probability(1.0 + 1e-9), 1.0);
        assert_eq!(clamp_probability(-1e-12), 0.0);
        assert!(clamp_events() >= before + 2);
    }
}
