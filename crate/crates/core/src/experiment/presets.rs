//! Figure presets expressed as configuration entries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::config::Entries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6,
    Fig7,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Custom,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Custom => "custom",
        }
    }

    /// What the preset reproduces, for `--help`-style listings.
    pub fn description(self) -> &'static str {
        match self {
            Preset::Fig1a => "per-user admission, GF users at 1..4 m, GB user at 2 m, R_B = 1",
            Preset::Fig1b => "per-user admission, GF users at 1..4 m, GB user at 2 m, R_B = 2",
            Preset::Fig2 => "outage of all schemes, GF users at 1 m, P_B pinned at 10 dB",
            Preset::Fig3 => "ergodic GF rate of all schemes, D_F = D_1 = 10 m",
            Preset::Fig4a => "CS and CS-PC outage, simulation against closed forms, K = 3",
            Preset::Fig4b => "BU and BU-PC outage, simulation against closed forms, K = 3",
            Preset::Fig5a => "CS and CS-PC high-SNR approximations, rate pairs II and III",
            Preset::Fig5b => "BU and BU-PC high-SNR approximations, rate pairs II and III",
            Preset::Fig6 => "CS and CS-PC outage for K = 1, 2, 3 with the RS references",
            Preset::Fig7 => "BU-PC and CS-PC outage over rate pairs I-III and alpha = 3, 4",
            Preset::Custom => "everything from the config file and overrides",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Preset::ALL.into_iter().find(|p| p.label() == s).ok_or_else(|| {
            let names: Vec<&str> = Preset::ALL.iter().map(|p| p.label()).collect();
            Error::Config(format!("unknown preset `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

const RATE_PAIR_I: &str = "1/0.5";
const RATE_PAIR_II: &str = "1/0.9";
const RATE_PAIR_III: &str = "1.5/0.9";

/// The entries a preset stands for. `custom` yields nothing.
pub fn preset_entries(preset: Preset) -> Entries {
    if preset == Preset::Custom {
        return Entries::new();
    }
    let mut e: Entries = [
        ("scenario.alpha", "3"),
        ("scenario.k", "4"),
        ("scenario.d_f", "3"),
        ("scenario.d_f_inner", "0"),
        ("scenario.d_0", "1"),
        ("scenario.d_1", "3"),
        ("scenario.r_b", "1"),
        ("scenario.r_f", "0.9"),
        ("sweep.snr_db", "0:5:50"),
        ("run.metrics", "outage"),
        ("run.mode", "both"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let mut set = |k: &str, v: &str| {
        e.insert(k.to_string(), v.to_string());
    };
    match preset {
        Preset::Fig1a | Preset::Fig1b => {
            set("scenario.r_b", if preset == Preset::Fig1a { "1" } else { "2" });
            set("run.schemes", "BU,BU-PC,CS,RS");
            set("run.metrics", "admission");
            set("run.mode", "mc");
            set("sweep.snr_db", "0:10:40");
            set("geometry.gf_distances", "1,2,3,4");
            set("geometry.gb_distance", "2");
            // The 4 m user lies outside the default 3 m GF disc.
            set("geometry.manual", "true");
        }
        Preset::Fig2 => {
            set("scenario.d_f", "1");
            set("scenario.d_f_inner", "1");
            set("scenario.p_b_db", "10");
            set("sweep.snr_db", "10:5:50");
            set("run.schemes", "BU,BU-PC,CS,CS-PC,RS,RS-PC,RS-FSIC");
        }
        Preset::Fig3 => {
            set("scenario.d_f", "10");
            set("scenario.d_1", "10");
            set("run.schemes", "BU,BU-PC,CS,CS-PC,RS,RS-PC,RS-FSIC");
            set("run.metrics", "ergodic_rate");
            set("run.mode", "mc");
        }
        Preset::Fig4a | Preset::Fig4b => {
            set("scenario.k", "3");
            set("sweep.snr_db", "0:5:45");
            set("run.schemes", if preset == Preset::Fig4a { "CS,CS-PC" } else { "BU,BU-PC" });
        }
        Preset::Fig5a | Preset::Fig5b => {
            set("scenario.k", "3");
            set("sweep.rate_pairs", &format!("{RATE_PAIR_II},{RATE_PAIR_III}"));
            set("run.schemes", if preset == Preset::Fig5a { "CS,CS-PC" } else { "BU,BU-PC" });
            set("run.mode", "mc,analytic,high-snr,dominant");
        }
        Preset::Fig6 => {
            set("sweep.k", "1,2,3");
            set("run.schemes", "CS,CS-PC,RS,RS-PC");
        }
        Preset::Fig7 => {
            set("sweep.rate_pairs", &format!("{RATE_PAIR_I},{RATE_PAIR_II},{RATE_PAIR_III}"));
            set("sweep.alpha", "3,4");
            set("run.schemes", "BU-PC,CS-PC");
        }
        Preset::Custom => unreachable!(),
    }
    e
}
