// A run driven by key=value text, the same path the `sgf` binary takes.
//
// `cargo run --release --example config_run`

use std::path::Path;

use sgf_noma::experiment::{execute, parse_kv, RunConfig, RunReport};

const CONFIG: &str = "
# CS against CS-PC at K = 3
preset = fig4a
sweep.snr_db = 0:10:30
run.trials = 50000
run.workers = 2
";

pub fn run_example(out_dir: &Path) -> sgf_noma::Result<RunReport> {
    let mut entries = parse_kv(CONFIG)?;
    entries.insert("output.dir".into(), out_dir.display().to_string());
    let cfg = RunConfig::resolve(&[entries])?;
    let report = execute(&cfg)?;
    print!("{}", std::fs::read_to_string(&report.csv_path).unwrap_or_default());
    println!("manifest: {}", report.manifest_path.display());
    Ok(report)
}

fn main() -> sgf_noma::Result<()> {
    run_example(&std::env::temp_dir().join("sgf-config-run")).map(|_| ())
}
