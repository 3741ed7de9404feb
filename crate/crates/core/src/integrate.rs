//! Adaptive Gauss–Kronrod integration used by the numeric oracles.
//!
//! Global bisection on the interval with the largest error estimate, 7/15-point
//! Gauss–Kronrod pairs on each piece. Semi-infinite ranges are mapped onto
//! `[0, 1)` with `x = a + t / (1 - t)`.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, rhs: Integral) -> Integral {
        Integral {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

impl Integral {
    pub const ZERO: Integral = Integral {
        value: 0.0,
        error: 0.0,
    };
}

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral::ZERO);
    }
    if b < a {
        let r = integrate(f, b, a, tol)?;
        return Ok(Integral {
            value: -r.value,
            error: r.error,
        });
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > tol.abs.max(tol.rel * total.abs()) {
        if pieces.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                value: total,
                achieved: err,
                requested: tol.abs.max(tol.rel * total.abs()),
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, pv, pe) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval can no longer be split in double precision.
            return Err(Error::NonConvergence {
                value: total,
                achieved: err,
                requested: tol.abs.max(tol.rel * total.abs()),
            });
        }
        let (lv, le) = kronrod(&mut f, lo, mid);
        let (rv, re) = kronrod(&mut f, mid, hi);
        total += lv + rv - pv;
        err += le + re - pe;
        pieces.push((lo, mid, lv, le));
        pieces.push((mid, hi, rv, re));
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = pieces.iter().fold((0.0, 0.0), |(v, e), p| (v + p.2, e + p.3));
    Ok(Integral { value, error })
}

/// Integrates `f` over `[a, inf)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tolerance) -> Result<Integral> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Fixed-order Gauss–Chebyshev rule for `int_a^b f(x) dx`, written as
/// `(b - a)/2 * sum_i (pi/n) sqrt(1 - t_i^2) f(x_i)` with Chebyshev nodes `t_i`.
pub fn gauss_chebyshev<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let w = std::f64::consts::PI / n as f64;
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 1..=n {
        let t = chebyshev_node(i, n);
        let x = half * t + 0.5 * (b + a);
        acc += w * (1.0 - t * t).sqrt() * f(x);
    }
    half * acc
}

/// `cos((2i - 1) pi / (2n))` for `i` in `1..=n`.
pub fn chebyshev_node(i: usize, n: usize) -> f64 {
    ((2 * i - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos()
}
