use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chiral_sim::cli::{self, CliError};

/// Simulate cyclic three-level systems under three optical couplings:
/// run the three-pulse chirality-discrimination sequence, sweep error
/// models, inspect the dressed eigensystem, or evolve raw schedules.
#[derive(Parser)]
#[command(name = "chiralsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol for both chiralities and print populations and
    /// contrast
    Protocol {
        /// TOML run configuration; omit for the ideal defaults
        #[arg(long)]
        config: Option<PathBuf>,
        /// Emit a JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Run the configured error-model grid and write a CSV
    Sweep {
        /// TOML run configuration with a `[sweep]` section
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV to this exact path (overrides `[output]`)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print eigenvalues and eigenvectors of the two-drive Hamiltonian
    Eigen {
        /// Drive strength of the step-II pair (Omega12 = i*X, Omega23 = X)
        #[arg(long, allow_negative_numbers = true)]
        omega0: Option<f64>,
        /// Complex Omega12, e.g. "1+0.5i" (requires --omega23)
        #[arg(long, allow_hyphen_values = true)]
        omega12: Option<String>,
        /// Complex Omega23 (requires --omega12)
        #[arg(long, allow_hyphen_values = true)]
        omega23: Option<String>,
    },
    /// Evolve an explicit schedule from the config's `[evolve]` section
    Evolve {
        /// TOML run configuration with an `[evolve]` section
        #[arg(long)]
        config: PathBuf,
        /// Emit a JSON report instead of text
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Protocol { config, json } => cli::cmd_protocol(config.as_deref(), json),
        Command::Sweep { config, output } => {
            cli::cmd_sweep(&config, output.as_deref()).map(|_| ())
        }
        Command::Eigen { omega0, omega12, omega23 } => {
            cli::cmd_eigen(omega0, omega12.as_deref(), omega23.as_deref())
        }
        Command::Evolve { config, json } => cli::cmd_evolve(&config, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
