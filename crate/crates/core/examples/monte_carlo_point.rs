// One Monte Carlo point for every scheme, next to the closed form where one
// exists.
//
// `cargo run --release --example monte_carlo_point`

use sgf_noma::analytic::{AnalyticMode, AnalyticRequest};
use sgf_noma::montecarlo::{run_schemes, PointSpec, SchemeEstimates};
use sgf_noma::params::ScenarioParams;
use sgf_noma::schemes::SchemeId;

pub fn run_example(trials: u64) -> sgf_noma::Result<Vec<SchemeEstimates>> {
    let params = ScenarioParams::default().with_k(3).with_snr_db(20.0);
    let spec = PointSpec::new(params, trials, 42);
    let schemes = SchemeId::ALL;
    let est = run_schemes(&schemes, &spec, 4)?;
    println!("{:<12} {:>11} {:>24} {:>11}", "scheme", "outage", "95% CI", "analytic");
    for e in &est {
        let analytic = AnalyticRequest::new(e.scheme, params, AnalyticMode::ExactQuadrature)
            .evaluate()
            .map(|v| format!("{v:.4e}"))
            .unwrap_or_else(|_| "-".into());
        println!(
            "{:<12} {:>11.4e} [{:.4e}, {:.4e}] {:>11}",
            e.scheme.to_string(),
            e.outage.point,
            e.outage.ci95_low,
            e.outage.ci95_high,
            analytic
        );
    }
    Ok(est)
}

fn main() -> sgf_noma::Result<()> {
    run_example(200_000).map(|_| ())
}
