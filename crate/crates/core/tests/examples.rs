//! Runs every example's `run_example` at reduced size.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(closed_form_outage);
example!(monte_carlo_point);
example!(high_snr_diversity);
example!(admission_fairness);
example!(oracle_check);
example!(config_run);
example!(power_control_rule);

use sgf_noma::schemes::{SchemeId, SicStage};

#[test]
fn closed_form_curves_fall() {
    let rows = closed_form_outage::run_example().unwrap();
    for w in rows.windows(2) {
        for (hi, lo) in w[0][1..].iter().zip(&w[1][1..]) {
            assert!(lo < hi);
        }
    }
}

#[test]
fn monte_carlo_covers_every_scheme() {
    let est = monte_carlo_point::run_example(20_000).unwrap();
    assert_eq!(est.len(), SchemeId::ALL.len());
    let fsic = est.iter().find(|e| e.scheme == SchemeId::RsFsic).unwrap();
    let rs = est.iter().find(|e| e.scheme == SchemeId::Rs).unwrap();
    assert!(fsic.outage.point > rs.outage.point);
}

#[test]
fn diversity_slopes_match_orders() {
    for (s, order, slope) in high_snr_diversity::run_example().unwrap() {
        assert_eq!(order, 3, "{s}");
        assert!((slope - 3.0).abs() < 0.3, "{s}: {slope}");
    }
}

#[test]
fn cs_and_rs_are_fair() {
    for (s, share) in admission_fairness::run_example(40_000).unwrap() {
        assert!((share.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        if matches!(s, SchemeId::Cs | SchemeId::Rs) {
            assert!(share.iter().all(|x| (x - 0.25).abs() < 0.02), "{s}: {share:?}");
        }
    }
}

#[test]
fn cs_closed_forms_equal_oracle() {
    for (s, closed, grid, _) in oracle_check::run_example().unwrap() {
        let tol = if matches!(s, SchemeId::Cs | SchemeId::CsPc) { 1e-9 } else { 1e-4 };
        assert!((closed - grid).abs() < tol, "{s}: {closed} vs {grid}");
    }
}

#[test]
fn config_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let report = config_run::run_example(dir.path()).unwrap();
    assert!(report.success());
    assert!(report.csv_path.exists() && report.manifest_path.exists());
    assert_eq!(report.manifest.rows, 4 * 2 * 2);
}

#[test]
fn power_control_backs_off_inside_window() {
    let out = power_control_rule::run_example();
    let (_, fixed) = &out[0];
    let (_, pc) = &out[2];
    assert_eq!(fixed.sic_stage, SicStage::First);
    assert_eq!(pc.sic_stage, SicStage::Second);
    assert!(pc.tx_power < fixed.tx_power && pc.gf_rate > fixed.gf_rate);
}
