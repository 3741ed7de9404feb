//! Direct numeric integration of the outage integrals before any closed-form
//! manipulation.
//!
//! Conditioned on the GB gain `|g|^2 = w`, a GF user with gain `x` fails when
//! it is decoded at the first stage with `x < alpha_F (P_B w + 1)`, or at the
//! second stage with `x < alpha_F`. The oracles integrate the probability of
//! that event against the GB gain density, with the GF gain law given either by
//! the quadrature grid or by exact distance integrals.

use std::cell::RefCell;

use crate::analytic::bu::BuSetup;
use crate::error::{Error, Result};
use crate::integrate::{integrate, integrate_to_infinity, Integral, Tolerance};
use crate::params::ScenarioParams;
use crate::quadrature::{GainLaw, QuadratureGrid};
use crate::schemes::SchemeId;

/// Largest K the nested oracles accept.
pub const MAX_ORACLE_K: usize = 5;

fn oracle_tolerance() -> Tolerance {
    Tolerance::new(1e-14, 1e-9)
}

/// Integrates `f` over `[0, inf)` split at the given increasing breakpoints.
fn piecewise(mut f: impl FnMut(f64) -> f64, breaks: &[f64], tol: Tolerance) -> Result<Integral> {
    let mut total = Integral::ZERO;
    let mut lo = 0.0;
    for &b in breaks {
        if b <= lo {
            continue;
        }
        // Near gamma_B gamma_F = 1 the segment (alpha_1, alpha_2) spans many
        // decades while the mass sits at its left end; split it geometrically
        // so the first Kronrod pass cannot miss it.
        if lo > 0.0 && b > 16.0 * lo {
            let levels = ((b - lo) / lo).log2().ceil() as i32 + 2;
            for j in (1..=levels).rev() {
                let m = lo + (b - lo) * 0.5f64.powi(j);
                total = total + integrate(&mut f, lo, m, tol)?;
                lo = m;
            }
        }
        total = total + integrate(&mut f, lo, b, tol)?;
        lo = b;
    }
    Ok(total + integrate_to_infinity(&mut f, lo, tol)?)
}

/// Probability that one GF user fails given `|g|^2 = w`, with `cdf` the law
/// of the gain the scheduler acts on.
fn conditional_failure(s: &BuSetup, pc: bool, w: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    if pc {
        return if w < s.t.alpha_1 { cdf(s.upper(w)) } else { cdf(s.t.alpha_f) };
    }
    if w <= s.t.alpha_b {
        return cdf(s.upper(w));
    }
    let (lo, up) = (s.lower(w), s.upper(w));
    cdf(lo.min(s.t.alpha_f)) + (cdf(up) - cdf(lo)).max(0.0)
}

fn breakpoints(s: &BuSetup, pc: bool) -> Vec<f64> {
    let mut b = vec![s.t.alpha_b, s.t.alpha_1];
    if !pc {
        b.extend(s.t.alpha_2);
    }
    b
}

fn check_k(params: &ScenarioParams) -> Result<()> {
    if params.k > MAX_ORACLE_K {
        return Err(Error::Unsupported(format!(
            "numeric oracle supports K <= {MAX_ORACLE_K}, got K = {}",
            params.k
        )));
    }
    Ok(())
}

/// Outage probability by adaptive integration over `|g|^2`.
///
/// BU: every user fails independently, so the conditional outage is the K-th
/// power of the per-user failure probability. CS: the scheduled user's gain
/// follows the law of the largest CDF value, and only that user is tested.
/// Random selection reduces to the CS case with one user.
pub fn numeric_oracle<L: GainLaw>(scheme: SchemeId, params: &ScenarioParams, law: &L) -> Result<Integral> {
    params.validate()?;
    check_k(params)?;
    let pc = matches!(scheme, SchemeId::BuPc | SchemeId::CsPc | SchemeId::RsPc);
    let s = if pc {
        BuSetup::power_control(params)
    } else {
        BuSetup::fixed(params)
    };
    let breaks = breakpoints(&s, pc);
    let tol = oracle_tolerance();
    match scheme {
        SchemeId::Bu | SchemeId::BuPc => piecewise(
            |w| law.pdf_gb(w) * conditional_failure(&s, pc, w, |x| law.cdf_gf(x)).powi(s.k as i32),
            &breaks,
            tol,
        ),
        SchemeId::Cs | SchemeId::CsPc => piecewise(
            |w| law.pdf_gb(w) * conditional_failure(&s, pc, w, |x| law.cdf_cs(x, s.k)),
            &breaks,
            tol,
        ),
        SchemeId::Rs | SchemeId::RsPc => piecewise(
            |w| law.pdf_gb(w) * conditional_failure(&s, pc, w, |x| law.cdf_gf(x)),
            &breaks,
            tol,
        ),
        SchemeId::RsFsic => Err(Error::Unsupported(
            "no integral form is derived for the fixed-order SIC benchmark".into(),
        )),
    }
}

/// `int_{alpha_1}^inf f_B(w) F_F(alpha_F)^k [F_F(up(w)) - F_F(lo(w))]^{K-k} dw`
/// on the quadrature grid, the integral the composition sums evaluate in
/// closed form.
pub(crate) fn h2_integral(grid: &QuadratureGrid, s: &BuSetup, k: usize) -> Result<Integral> {
    let lead = grid.cdf_gf(s.t.alpha_f).powi(k as i32);
    let kk = (s.k - k) as i32;
    integrate_to_infinity(
        |w| GainLaw::pdf_gb(grid, w) * lead * (grid.cdf_gf(s.upper(w)) - grid.cdf_gf(s.lower(w))).powi(kk),
        s.t.alpha_1,
        oracle_tolerance(),
    )
}

/// Joint density of the smallest and largest of `k` i.i.d. GF gains,
/// `k (k - 1) f(x) f(y) [F(y) - F(x)]^{k-2}` for `x < y`.
pub fn joint_min_max_density<L: GainLaw>(law: &L, k: usize, x: f64, y: f64) -> f64 {
    if k < 2 || y <= x {
        return 0.0;
    }
    let kf = k as f64;
    kf * (kf - 1.0) * law.pdf_gf(x) * law.pdf_gf(y) * (law.cdf_gf(y) - law.cdf_gf(x)).powi(k as i32 - 2)
}

/// Total mass of [`joint_min_max_density`] by nested integration; 1 for an
/// exact law.
pub fn joint_min_max_mass<L: GainLaw>(law: &L, k: usize) -> Result<Integral> {
    if k < 2 {
        return Err(Error::invalid("K", "the min/max joint density needs K >= 2"));
    }
    let tol = Tolerance::new(1e-11, 1e-8);
    let mut failure = None;
    let outer = integrate_to_infinity(
        |x| match integrate_to_infinity(|y| joint_min_max_density(law, k, x, y), x, tol) {
            Ok(i) => i.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => outer,
    }
}

/// BU outage for two users computed from the joint density of the ordered
/// gains `x <= y` instead of the product of marginals.
///
/// Given `w`, the failure set of one user is a union of at most two intervals;
/// the outage is the mass of the ordered pair landing in that set, split into
/// the pieces where both gains share an interval or sit in different ones.
pub fn bu_order_statistics_k2<L: GainLaw>(params: &ScenarioParams, law: &L, power_control: bool) -> Result<Integral> {
    params.validate()?;
    if params.k != 2 {
        return Err(Error::invalid("K", "the order-statistic oracle is written for K = 2"));
    }
    let s = if power_control {
        BuSetup::power_control(params)
    } else {
        BuSetup::fixed(params)
    };
    let tol = Tolerance::new(1e-12, 1e-8);
    let density = |x: f64, y: f64| 2.0 * law.pdf_gf(x) * law.pdf_gf(y);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let value = |r: Result<Integral>| match r {
        Ok(i) => i.value,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    // Mass of {x in a, y in b, x < y} for intervals a, b with a not above b.
    let pair_mass = |a: (f64, f64), b: (f64, f64)| -> f64 {
        let inner = |x: f64| {
            let lo = b.0.max(x);
            if lo >= b.1 {
                0.0
            } else {
                value(integrate(|y| density(x, y), lo, b.1, tol))
            }
        };
        value(integrate(inner, a.0, a.1, tol))
    };
    let conditional = |w: f64| -> f64 {
        let sets: Vec<(f64, f64)> = if power_control {
            let top = if w < s.t.alpha_1 { s.upper(w) } else { s.t.alpha_f };
            vec![(0.0, top)]
        } else if w <= s.t.alpha_b {
            vec![(0.0, s.upper(w))]
        } else {
            let (lo, up) = (s.lower(w), s.upper(w));
            let low = (0.0, lo.min(s.t.alpha_f));
            if up > lo {
                vec![low, (lo, up)]
            } else {
                vec![low]
            }
        };
        let mut total = 0.0;
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i..] {
                total += pair_mass(*a, *b);
            }
        }
        law.pdf_gb(w) * total
    };
    let r = piecewise(conditional, &breakpoints(&s, power_control), tol);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}
