use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaugemech::experiments::{Estimator, ExperimentKind};
use gaugemech::io::{parse_config, parse_config_for, run_experiment, RunError, EXIT_CONFIG, EXIT_RUNTIME};

#[derive(Parser)]
#[command(name = "gaugemech", version, about = "Gauge-mechanical path simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSVs, a plot script and a manifest.
    Run {
        experiment: String,
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long, env = "GAUGEMECH_OUT", default_value = "results")]
        out: PathBuf,
        /// Overrides `seeds.master`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `estimator.kind`.
        #[arg(long, value_enum)]
        estimator: Option<EstimatorArg>,
    },
    /// Parse and check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available experiments.
    ListExperiments,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Analytic,
    #[value(name = "monte_carlo")]
    MonteCarlo,
    Both,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Analytic => Estimator::Analytic,
            EstimatorArg::MonteCarlo => Estimator::MonteCarlo,
            EstimatorArg::Both => Estimator::Both,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path).map_err(|e| (EXIT_CONFIG, format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), (i32, String)> {
    match cli.command {
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                println!("{:<16}{}", kind.name(), kind.description());
            }
            Ok(())
        }
        Command::Validate { config } => {
            let text = read(&config)?;
            let cfg = parse_config(&text).map_err(|e| (EXIT_CONFIG, format!("{}: {e}", config.display())))?;
            println!("{}: ok ({})", config.display(), cfg.kind.name());
            Ok(())
        }
        Command::Run {
            experiment,
            config,
            out,
            seed,
            estimator,
        } => {
            let kind = ExperimentKind::from_name(&experiment)
                .ok_or_else(|| (EXIT_CONFIG, format!("unknown experiment `{experiment}`")))?;
            let text = read(&config)?;
            let mut cfg =
                parse_config_for(&text, kind).map_err(|e| (EXIT_CONFIG, format!("{}: {e}", config.display())))?;
            if let Some(s) = seed {
                cfg.seeds.master_seed = s;
            }
            if let Some(e) = estimator {
                cfg.estimator = e.into();
            }
            let manifest = run_experiment(kind, &cfg, &out).map_err(|e: RunError| (e.exit_code(), e.to_string()))?;
            for f in &manifest.files {
                println!("{}", out.join(f).display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are configuration errors; help and version are not errors
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(if code == EXIT_CONFIG { EXIT_CONFIG as u8 } else { EXIT_RUNTIME as u8 })
        }
    }
}
