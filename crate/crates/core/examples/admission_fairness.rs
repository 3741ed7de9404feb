// Which GF user gets admitted when the users sit at fixed distances.
//
// `cargo run --release --example admission_fairness`

use sgf_noma::montecarlo::{run_schemes, FixedGeometryOverride, PointSpec};
use sgf_noma::params::ScenarioParams;
use sgf_noma::schemes::SchemeId;

/// Admission frequency per user for each scheme.
pub fn run_example(trials: u64) -> sgf_noma::Result<Vec<(SchemeId, Vec<f64>)>> {
    let params = ScenarioParams::default().with_snr_db(20.0);
    let mut spec = PointSpec::new(params, trials, 7);
    spec.geometry = Some(FixedGeometryOverride {
        gf_distances: vec![1.0, 2.0, 3.0, 4.0],
        gb_distance: Some(2.0),
        manual: true,
    });
    let schemes = [SchemeId::Bu, SchemeId::BuPc, SchemeId::Cs, SchemeId::Rs];
    let est = run_schemes(&schemes, &spec, 4)?;
    println!("{:<12} {:>8} {:>8} {:>8} {:>8}", "scheme", "1 m", "2 m", "3 m", "4 m");
    let mut out = Vec::new();
    for e in est {
        let share: Vec<f64> = e.admission.iter().map(|a| a.point).collect();
        println!("{:<12} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", e.scheme.to_string(), share[0], share[1], share[2], share[3]);
        out.push((e.scheme, share));
    }
    Ok(out)
}

fn main() -> sgf_noma::Result<()> {
    run_example(100_000).map(|_| ())
}
