//! Point estimates with 95% confidence intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub point: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials: u64,
}

impl MetricEstimate {
    /// Proportion `hits / trials` with a Wilson score interval.
    pub fn proportion(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = hits as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            point: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            ci95_low: (centre - half).max(0.0).min(p),
            ci95_high: (centre + half).min(1.0).max(p),
            trials,
        }
    }

    /// Sample mean from a running sum and sum of squares, with a normal
    /// approximation interval.
    pub fn mean(sum: f64, sum_sq: f64, trials: u64) -> Self {
        let n = trials as f64;
        let mean = sum / n;
        let var = if trials > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let se = (var / n).sqrt();
        Self {
            point: mean,
            std_error: se,
            ci95_low: mean - Z95 * se,
            ci95_high: mean + Z95 * se,
            trials,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.ci95_low..=self.ci95_high).contains(&x)
    }
}

/// Negated least-squares slope of `log10(outage)` against `snr_db / 10` over
/// the `top_points` highest-SNR points with positive outage.
pub fn empirical_diversity_slope(points: &[(f64, f64)], top_points: usize) -> Result<f64> {
    let mut usable: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, p)| p > 0.0).collect();
    usable.sort_by(|a, b| a.0.total_cmp(&b.0));
    let take = top_points.min(usable.len());
    if take < 2 {
        return Err(Error::invalid(
            "top_points",
            format!("need at least 2 points with positive outage, found {take}"),
        ));
    }
    let pts = &usable[usable.len() - take..];
    let n = take as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().map(|&(s, p)| (s / 10.0, p.log10())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("points", "all usable points share one SNR"));
    }
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wilson_brackets_point() {
        for (h, n) in [(0, 10), (3, 10), (10, 10), (500, 1_000_000)] {
            let e = MetricEstimate::proportion(h, n);
            assert!(e.ci95_low <= e.point && e.point <= e.ci95_high);
            assert!(e.ci95_low >= 0.0 && e.ci95_high <= 1.0);
        }
        // Zero hits still gives a non-degenerate upper bound.
        assert!(MetricEstimate::proportion(0, 100).ci95_high > 0.03);
    }

    #[test]
    fn mean_interval() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let e = MetricEstimate::mean(xs.iter().sum(), xs.iter().map(|x| x * x).sum(), 4);
        assert_abs_diff_eq!(e.point, 2.5);
        assert_abs_diff_eq!(e.std_error, (5.0f64 / 3.0 / 4.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn slope_of_synthetic_curve() {
        let pts: Vec<(f64, f64)> = (0..=10).map(|i| (i as f64 * 5.0, 3.0 * 10f64.powf(-2.0 * i as f64 * 0.5))).collect();
        assert_abs_diff_eq!(empirical_diversity_slope(&pts, 4).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn slope_skips_zero_points_and_needs_two() {
        let pts = [(10.0, 1e-2), (20.0, 1e-3), (30.0, 0.0)];
        assert_abs_diff_eq!(empirical_diversity_slope(&pts, 3).unwrap(), 1.0, epsilon = 1e-12);
        assert!(empirical_diversity_slope(&[(10.0, 0.1), (20.0, 0.0)], 3).is_err());
    }
}
