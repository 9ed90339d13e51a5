use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lab::{run_experiment, Experiment};

/// Batch experiments over boxes of geodesics, Liouville masses, geodesic
/// currents and earthquakes. Exit code 0 when every check passes, 2 on a
/// tolerance failure, 1 on a validation error.
#[derive(Parser)]
#[command(name = "lab", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,
    /// JSON configuration file ({} selects all defaults).
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let raw = match fs::read_to_string(&cli.config) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(1);
        }
    };
    match run_experiment(cli.experiment, &raw, &cli.out, cli.seed, cli.tol) {
        Ok(summary) => {
            summary.print();
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
