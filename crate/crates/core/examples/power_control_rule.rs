// The scheduling decision on one hand-built channel draw, with and without
// power control.
//
// `cargo run --example power_control_rule`

use sgf_noma::channel::ChannelRealization;
use sgf_noma::params::ScenarioParams;
use sgf_noma::schemes::{decoding_threshold, schedule_bu, schedule_cs, PowerRule, SchedulingOutcome};

pub fn run_example() -> Vec<(String, SchedulingOutcome)> {
    let p = ScenarioParams::default().with_k(3).with_snr_db(10.0);
    let ch = ChannelRealization {
        r_b: 1.5,
        r: vec![0.8, 1.7, 2.6],
        g2: 0.2,
        h2: vec![0.2, 0.05, 0.02],
    };
    println!("tau0 = {:.4}", decoding_threshold(&p, ch.g2));
    let mut out = Vec::new();
    for rule in [PowerRule::Fixed, PowerRule::PowerControl] {
        for (name, o) in [("BU", schedule_bu(&p, &ch, rule)), ("CS", schedule_cs(&p, &ch, rule))] {
            let label = format!("{name} {rule:?}");
            println!(
                "{label:<16} user {} power {:.3} stage {:?} GF rate {:.3} GB rate {:.3}",
                o.admitted_index, o.tx_power, o.sic_stage, o.gf_rate, o.gb_rate
            );
            out.push((label, o));
        }
    }
    out
}

fn main() {
    run_example();
}
