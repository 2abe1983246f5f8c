//! Experiment runner.
//!
//! ```text
//! qvqt-exp run --config <path> [--seed <u64>] [--out <dir>] [--threads <k>]
//! qvqt-exp validate --config <path>
//! ```
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qvqt::experiments::{run_experiment, write_output, ExperimentConfig};
use qvqt::Error;

#[derive(Parser)]
#[command(name = "qvqt-exp", version, about = "Run variational thermalizer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write CSV and JSON results.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the master seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "QVQT_OUT_DIR")]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Resource(_) | Error::Json(_) => 2,
        Error::Numerical(_) => 3,
        Error::Io(_) => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            println!("{}: ok ({})", config.display(), cfg.id());
        }
        Command::Run { config, seed, out, threads } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.set_master_seed(s);
            }
            if let Some(k) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            }
            let dir = out
                .or_else(|| cfg.run_settings().output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("results"));
            let start = Instant::now();
            let output = run_experiment(&cfg)?;
            for path in write_output(&output, &cfg, &dir, start.elapsed().as_secs_f64())? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
