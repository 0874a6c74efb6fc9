use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use eulerch::locsys::Coefficients;
use eulerch_tools::doc::canonical_json;
use eulerch_tools::{
    canon, euler, experiment, homology, ingest, validate, EulerMode, EulerOptions, ExperimentOptions, Output, Stat,
    ToolError,
};

#[derive(Parser)]
#[command(name = "eulerch", version, about = "Exact local Euler cocycles of spherical cell local systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Q,
    Z,
}

#[derive(Subcommand)]
enum Command {
    /// Check every complex, aggregation, chain, system and bundle in a file.
    Validate { path: PathBuf },
    /// Local values, cochains, periods or simplicial values.
    Euler {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "cochain")]
        mode: EulerMode,
        /// File with cycles to evaluate in period mode (default: cycles in
        /// the input, else an integer basis of the base cycles).
        #[arg(long)]
        cycle: Option<PathBuf>,
        /// Also print a decimal approximation.
        #[arg(long)]
        decimal: bool,
        /// Print JSON rows instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Homology of the total complex of every system and bundle.
    Homology {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        coefficients: Coeff,
    },
    /// Turn the bundles of a file into a system document.
    Ingest {
        path: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Batch statistics as CSV.
    Experiment {
        #[arg(long, value_enum)]
        stat: Stat,
        inputs: Vec<PathBuf>,
        /// Number of random inputs to add.
        #[arg(long, default_value_t = 0)]
        generate: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the canonical form of a file.
    Canon { path: PathBuf },
}

fn run(cli: Cli) -> Result<Output, ToolError> {
    match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Euler { path, mode, cycle, decimal, json } => {
            euler(&path, mode, &EulerOptions { cycle: cycle.as_deref(), decimal, json })
        }
        Command::Homology { path, coefficients } => {
            let c = match coefficients {
                Coeff::Q => Coefficients::Q,
                Coeff::Z => Coefficients::Z,
            };
            homology(&path, c)
        }
        Command::Ingest { path, out } => {
            let text = canonical_json(&serde_json::to_value(ingest(&path)?).expect("documents serialize"));
            match out {
                Some(p) => {
                    std::fs::write(&p, text).map_err(|e| ToolError::Io { path: p.clone(), message: e.to_string() })?;
                    Ok(Output { text: format!("wrote {}\n", p.display()), failed: false })
                }
                None => Ok(Output { text, failed: false }),
            }
        }
        Command::Experiment { stat, inputs, generate, seed } => {
            let text = experiment(stat, &ExperimentOptions { inputs, generate, seed })?;
            Ok(Output { text, failed: false })
        }
        Command::Canon { path } => Ok(Output { text: canon(&path)?, failed: false }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
