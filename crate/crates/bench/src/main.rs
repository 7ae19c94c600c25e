use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use tripartite_bench::{emit, run_bench, BenchError, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs the benchmark; `Ok(false)` when a threshold was missed.
fn run(cli: Cli) -> Result<bool, BenchError> {
    let cfg = cli.resolve()?;
    let records = run_bench(&cfg)?;
    match &cfg.out {
        Some(path) => emit(&records, cfg.format, BufWriter::new(File::create(path)?))?,
        None => emit(&records, cfg.format, io::stdout().lock())?,
    }
    let misses: Vec<String> = records.iter().flat_map(|r| cfg.thresholds.violations(r)).collect();
    for miss in &misses {
        eprintln!("threshold missed: {miss}");
    }
    Ok(misses.is_empty())
}
