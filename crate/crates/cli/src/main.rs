//! `procflow`: evaluate, compare and analyse diagram files.
//!
//! Exit codes: 0 success / equal / pass, 1 distinct / fail, 2 parse or I/O
//! error, 3 type error, 4 model or theory mismatch.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "procflow", version, about = "String diagrams for process theories")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for random models and probabilistic checks.
    #[arg(long, global = true, env = "PROCFLOW_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contract a diagram to a tensor.
    Eval {
        file: PathBuf,
        /// Model source: a document path or `random:<seed>`. Defaults to the
        /// file's own model.
        #[arg(long)]
        model: Option<String>,
        /// Entries below this magnitude are not printed.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Compare the main diagrams of two files.
    Eq {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Structural)]
        mode: Mode,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a numeric property check.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a scripted demonstration.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(procflow::demo::DEMOS))]
        name: String,
    },
    /// Re-serialise a file with its main diagram in graph form.
    Export {
        file: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Structural,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Causal,
    Isometry,
    Unitary,
    Stinespring,
    Broadcast,
    Nosignal,
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Eval { file, model, tol } => commands::eval(file, model.as_deref(), cli.seed, *tol),
        Command::Eq { left, right, mode, trials, tol } => commands::eq(left, right, *mode, *trials, cli.seed, *tol),
        Command::Analyze { file, check, model, tol } => {
            commands::analyze(file, *check, model.as_deref(), cli.seed, *tol)
        }
        Command::Demo { name } => commands::demo(name, cli.seed),
        Command::Export { file, out } => commands::export(file, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&outcome.json).expect("serializable"))
            } else {
                outcome.lines.iter().try_for_each(|line| writeln!(out, "{line}"))
            };
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
