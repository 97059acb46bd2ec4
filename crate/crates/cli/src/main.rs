//! Runs the seqpred experiment scenarios and writes their CSV reports.

use clap::Parser;
use seqpred::experiments::{run_all, Params, SCENARIOS};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "seqpred", version, about = "Reproduce predictor bounds and counterexamples as CSV reports")]
struct Cli {
    /// Scenario to run (repeatable); all scenarios when omitted.
    #[arg(long = "scenario", value_name = "NAME")]
    scenarios: Vec<String>,

    /// Output directory for CSV files and the manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Seed for the stochastic scenarios.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the scenario's maximum horizon.
    #[arg(long = "max-n")]
    max_n: Option<usize>,

    /// Override the scenario's grid size (points, denominator or count).
    #[arg(long)]
    grid: Option<usize>,

    /// Override the scenario's numeric tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Class-specification file used by the NML, capacity and cover scenarios.
    #[arg(long, value_name = "FILE")]
    class: Option<PathBuf>,

    /// Print scenario names and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for s in SCENARIOS {
            println!("{:<22} {}", s.name, s.summary);
        }
        return ExitCode::SUCCESS;
    }
    let params = Params { seed: cli.seed, max_n: cli.max_n, grid: cli.grid, tol: cli.tol, class_file: cli.class };
    let summary = match run_all(&cli.out, &cli.scenarios, &params) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", summary.manifest());
    let failed = summary.failed();
    if failed.is_empty() {
        return ExitCode::SUCCESS;
    }
    for report in failed {
        for f in report.failures.iter().take(10) {
            eprintln!("{}: {f}", report.name);
        }
        if report.failures.len() > 10 {
            eprintln!("{}: ... {} more failures", report.name, report.failures.len() - 10);
        }
    }
    ExitCode::FAILURE
}
