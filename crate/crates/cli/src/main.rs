//! `colanet`: continual-learning experiments with a columnar spiking network
//! and an MLP baseline.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error
//! (missing or malformed inputs), 3 internal invariant violation.

mod commands;
mod config;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, CliResult};
use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "colanet",
    version,
    about = "Continual-learning experiments on (permuted) MNIST and EMNIST"
)]
struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train on a task sequence and write the degradation profile, metrics and states.
    Run(ExperimentArgs),
    /// Run the sequence once per (alpha, ns) grid point.
    Sweep(ExperimentArgs),
    /// Accuracy of a fresh model trained on each task alone (forward-transfer baseline).
    BaselineAcc(ExperimentArgs),
    /// Compute metrics from a degradation profile CSV.
    Metrics {
        profile: PathBuf,
        /// `task,accuracy` CSV from `baseline-acc`; enables FWT.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Also write metrics.csv, summary.csv and summary.txt here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the receptive fields of a saved network as a PPM image.
    Heatmap { state: PathBuf, out: PathBuf },
}

#[derive(Args)]
struct ExperimentArgs {
    /// `key = value` experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory holding the MNIST and EMNIST IDX files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override one config key, e.g. `--set alpha=0.01`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ExperimentArgs {
    fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
                ExperimentConfig::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => ExperimentConfig::default(),
        };
        for o in &self.overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {o:?}")))?;
            cfg.set(k.trim(), v.trim())
                .map_err(|e| CliError::Usage(format!("--set {o}: {e}")))?;
        }
        if let Some(d) = &self.data_dir {
            cfg.mnist_dir = d.clone();
            cfg.emnist_dir = d.clone();
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }

    fn config_path(&self) -> Option<&Path> {
        self.config.as_deref()
    }
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Run(a) => commands::run(&a.resolve()?, a.config_path()),
        Command::Sweep(a) => commands::sweep(&a.resolve()?, a.config_path()),
        Command::BaselineAcc(a) => commands::baseline_acc(&a.resolve()?, a.config_path()),
        Command::Metrics { profile, baseline, out } => commands::metrics(&profile, baseline.as_deref(), out.as_deref()),
        Command::Heatmap { state, out } => commands::heatmap(&state, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("internal error: panic");
            ExitCode::from(3)
        }
    }
}
