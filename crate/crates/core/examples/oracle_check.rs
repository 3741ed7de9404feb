// Closed forms against direct numerical integration, on the quadrature grid
// and on the exact gain law.
//
// `cargo run --release --example oracle_check`

use sgf_noma::analytic::{numeric_oracle, AnalyticMode, AnalyticRequest};
use sgf_noma::params::ScenarioParams;
use sgf_noma::quadrature::{ExactLaw, QuadratureGrid, QuadratureOrders};
use sgf_noma::schemes::SchemeId;

/// `(scheme, closed form, oracle on grid, oracle on exact law)`.
pub fn run_example() -> sgf_noma::Result<Vec<(SchemeId, f64, f64, f64)>> {
    let p = ScenarioParams::default().with_k(3).with_snr_db(20.0);
    let grid = QuadratureGrid::new(&p, QuadratureOrders::default())?;
    let exact = ExactLaw::new(&p)?;
    let mut out = Vec::new();
    println!("{:<12} {:>12} {:>12} {:>12}", "scheme", "closed", "grid", "exact");
    for s in [SchemeId::Bu, SchemeId::BuPc, SchemeId::Cs, SchemeId::CsPc] {
        let closed = AnalyticRequest::new(s, p, AnalyticMode::ExactQuadrature).evaluate_with(&grid)?;
        let on_grid = numeric_oracle(s, &p, &grid)?.value;
        let on_law = numeric_oracle(s, &p, &exact)?.value;
        println!("{:<12} {closed:>12.5e} {on_grid:>12.5e} {on_law:>12.5e}", s.to_string());
        out.push((s, closed, on_grid, on_law));
    }
    Ok(out)
}

fn main() -> sgf_noma::Result<()> {
    run_example().map(|_| ())
}
