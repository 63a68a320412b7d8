use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use slabsqueeze::config::{load_config, ConfigError};
use slabsqueeze::output::{emit_csv, emit_plot_script};
use slabsqueeze::pipeline::{resonances, run_pipeline, PipelineError};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PHYSICS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "slabsqueeze",
    version,
    about = "Squeezed light through an absorbing or amplifying slab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the spectra and write spectrum.csv (and plot_spectrum.py).
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides [output] directory.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_plot: bool,
    },
    /// Print the Fabry–Perot transmission maxima, one energy (eV) per line.
    Resonances {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Config(ConfigError),
    Physics(PipelineError),
    Other(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Physics(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn run(config_path: &Path, output: Option<PathBuf>, no_plot: bool) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    let table = run_pipeline(&config)?;
    let dir = output.unwrap_or_else(|| config.output.directory.clone());
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join("spectrum.csv");
    emit_csv(&table, &csv_path).map_err(anyhow::Error::from)?;
    println!("wrote {} ({} rows)", csv_path.display(), table.rows.len());
    if config.output.emit_plot && !no_plot {
        let script = dir.join("plot_spectrum.py");
        emit_plot_script(&table, "spectrum.csv", &script).map_err(anyhow::Error::from)?;
        println!("wrote {}", script.display());
    }
    let report = &table.report;
    println!("squeezed intervals: {}", report.squeezed_intervals.len());
    for iv in &report.squeezed_intervals {
        println!("  [{:.6}, {:.6}] eV", iv.start, iv.end);
    }
    if let Some((e, v)) = report.global_minimum {
        println!("minimum S_min/K = {v:.6} at {e:.6} eV");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            output,
            no_plot,
        } => run(&config, output, no_plot),
        Command::Resonances { config } => load_config(&config)
            .map_err(Failure::from)
            .and_then(|c| resonances(&c).map_err(Failure::from))
            .map(|peaks| {
                for e in peaks {
                    println!("{e:.9}");
                }
            }),
        Command::Validate { config } => load_config(&config)
            .map(|_| println!("ok"))
            .map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Physics(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PHYSICS)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
