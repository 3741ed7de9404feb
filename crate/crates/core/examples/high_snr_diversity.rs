// High-SNR approximations, dominant terms and diversity orders, with the
// slope measured from the closed forms.
//
// `cargo run --example high_snr_diversity`

use sgf_noma::analytic::{diversity_order, AnalyticMode, AnalyticRequest};
use sgf_noma::montecarlo::empirical_diversity_slope;
use sgf_noma::params::ScenarioParams;
use sgf_noma::schemes::SchemeId;

/// `(scheme, predicted order, measured slope)` for each scheme.
pub fn run_example() -> sgf_noma::Result<Vec<(SchemeId, u32, f64)>> {
    let base = ScenarioParams::default().with_k(3);
    let schemes = [SchemeId::Bu, SchemeId::BuPc, SchemeId::Cs, SchemeId::CsPc];
    let mut out = Vec::new();
    for s in schemes {
        println!("{s}");
        let mut curve = Vec::new();
        for snr in [30.0, 40.0, 50.0, 60.0] {
            let p = base.with_snr_db(snr);
            let eval = |mode| AnalyticRequest::new(s, p, mode).evaluate();
            let exact = eval(AnalyticMode::ExactQuadrature)?;
            let approx = eval(AnalyticMode::HighSnr)?;
            let dominant = eval(AnalyticMode::DominantTerm)?;
            println!("  {snr:>4} dB  exact {exact:.4e}  high-snr {approx:.4e}  dominant {dominant:.4e}");
            curve.push((snr, exact));
        }
        let slope = empirical_diversity_slope(&curve, 3)?;
        let order = diversity_order(s, &base);
        println!("  diversity order {order}, measured slope {slope:.3}");
        out.push((s, order, slope));
    }
    Ok(out)
}

fn main() -> sgf_noma::Result<()> {
    run_example().map(|_| ())
}
