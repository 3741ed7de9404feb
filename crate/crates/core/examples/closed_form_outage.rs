// Closed-form outage of the BU and CS schedulers, with and without power
// control, across SNR.
//
// `cargo run --example closed_form_outage`

use sgf_noma::analytic::{outage_bu, outage_bu_pc, outage_cs, outage_cs_pc};
use sgf_noma::params::ScenarioParams;
use sgf_noma::quadrature::{QuadratureGrid, QuadratureOrders};

/// Rows of `(snr_db, BU, BU-PC, CS, CS-PC)`.
pub fn run_example() -> sgf_noma::Result<Vec<[f64; 5]>> {
    let mut rows = Vec::new();
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "SNR", "BU", "BU-PC", "CS", "CS-PC");
    for snr in (0..=40).step_by(10) {
        let p = ScenarioParams::default().with_k(3).with_snr_db(snr as f64);
        let grid = QuadratureGrid::new(&p, QuadratureOrders::default())?;
        let row = [
            snr as f64,
            outage_bu(&p, &grid)?,
            outage_bu_pc(&p, &grid)?,
            outage_cs(&p, &grid)?,
            outage_cs_pc(&p, &grid)?,
        ];
        println!("{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", row[0], row[1], row[2], row[3], row[4]);
        rows.push(row);
    }
    Ok(rows)
}

fn main() -> sgf_noma::Result<()> {
    run_example().map(|_| ())
}
