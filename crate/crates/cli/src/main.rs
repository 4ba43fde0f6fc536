//! `qcf` command line: scenario execution and one-shot verification for the
//! one-qubit open-system toolkit.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 config error, 3 model error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "qcf", version, about = "One-qubit open-system dynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's out_dir; default "out").
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the deterministic optimizer multi-starts.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decoherence functions and a state trajectory over the time grid.
    SpinstarEvolve,
    /// Kraus operators extracted from the Choi matrix at each grid point.
    SpinstarKraus,
    /// Time-local generator entries and operator-form rates.
    Tcl,
    /// Memory kernel in the Laplace domain, its numerical inversion, poles.
    Nz,
    /// CP-versus-discord sweep and the published-Kraus audit.
    Cnot,
    /// Alias of cnot: discord is the headline column of the same report.
    Discord,
    /// Run the full verification suite; exit 0 only if every check passes.
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Model(qcf_core::Error),
    Io(std::io::Error),
}

impl From<qcf_core::Error> for CliError {
    fn from(e: qcf_core::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let seed = cfg.seed;

    if let Command::Verify = cli.command {
        return Ok(commands::verify(&cfg, seed));
    }

    let out: PathBuf = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out)?;

    match cli.command {
        Command::SpinstarEvolve => commands::spinstar_evolve(&cfg, &out)?,
        Command::SpinstarKraus => commands::spinstar_kraus(&cfg, &out)?,
        Command::Tcl => commands::tcl(&cfg, &out)?,
        Command::Nz => commands::nz(&cfg, &out)?,
        Command::Cnot | Command::Discord => commands::cnot(&cfg, &out)?,
        Command::Verify => unreachable!(),
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(CliError::Model(e)) => {
            eprintln!("model error: {e}");
            3
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            3
        }
    };
    std::process::exit(code);
}
