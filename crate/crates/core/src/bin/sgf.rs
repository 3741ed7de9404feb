use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgf_noma::experiment::config::{parse_override, Entries};
use sgf_noma::experiment::{config_from_manifest, execute, parse_kv, read_manifest, Preset, RunConfig};
use sgf_noma::Result;

#[derive(Parser)]
#[command(name = "sgf", version, about = "Semi-grant-free NOMA outage simulator and evaluator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write CSV plus manifest.json.
    Run(RunArgs),
    /// Re-run the configuration recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// List the figure presets.
    Presets,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    preset: Option<String>,
    /// key=value config file; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` override, may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// mc, analytic, both, high-snr, dominant, oracle, or a comma list.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_config(a: &RunArgs) -> Result<RunConfig> {
    let mut layers = Vec::new();
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(|e| sgf_noma::Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        layers.push(parse_kv(&text)?);
    }
    let mut overrides = Entries::new();
    for s in &a.set {
        let (k, v) = parse_override(s)?;
        overrides.insert(k, v);
    }
    let mut flags = Entries::new();
    let mut flag = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            flags.insert(k.to_string(), v);
        }
    };
    flag("preset", a.preset.clone());
    flag("run.mode", a.mode.clone());
    flag("run.trials", a.trials.map(|v| v.to_string()));
    flag("run.seed", a.seed.map(|v| v.to_string()));
    flag("run.workers", a.workers.map(|v| v.to_string()));
    flag("output.dir", a.out.as_ref().map(|p| p.display().to_string()));
    layers.push(overrides);
    layers.push(flags);
    RunConfig::resolve(&layers)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match cli.command {
        Command::Presets => {
            for p in Preset::ALL {
                println!("{:<8} {}", p.label(), p.description());
            }
            return Ok(true);
        }
        Command::Run(a) => run_config(&a)?,
        Command::Replay { manifest, out, workers } => {
            let m = read_manifest(&manifest)?;
            let mut o = Entries::new();
            if let Some(out) = out {
                o.insert("output.dir".into(), out.display().to_string());
            }
            if let Some(w) = workers {
                o.insert("run.workers".into(), w.to_string());
            }
            config_from_manifest(&m, &o)?
        }
    };
    let report = execute(&cfg)?;
    let m = &report.manifest;
    eprintln!(
        "{}: {} rows in {:.2} s -> {}",
        m.preset,
        m.rows,
        m.wall_time_s,
        report.csv_path.display()
    );
    for s in &m.skipped {
        eprintln!("skipped: {s}");
    }
    for f in &m.failures {
        eprintln!("failed: {} {} [{}]: {}", f.point, f.scheme, f.mode, f.error);
    }
    Ok(report.success())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
