//! `relmon`: validation, decision procedures, audits and the theorem suite
//! over finite instances, with versioned JSON reports.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::Done;

/// Outcome classes and their exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Negative,
    Inconclusive,
    InputError,
    BudgetExceeded,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Negative => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
            Status::BudgetExceeded => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "relmon", version, about = "Relative monads, relative adjunctions and relative monadicity on finite categories")]
struct Cli {
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load an instance (bundle directory or document) and check every law.
    Validate { path: PathBuf },
    /// Decide whether a root is dense.
    Density {
        #[arg(long)]
        j: String,
    },
    /// Search for a left relative adjoint of `r` along `j`.
    Adjoint {
        #[arg(long)]
        j: String,
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Tie::Least)]
        tie: Tie,
        /// Write a document holding j, r, the adjoint and the adjunction.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate or enumerate relative monads.
    Monad {
        #[command(subcommand)]
        action: MonadAction,
    },
    /// Build the category of algebras of a monad.
    Algebras {
        #[arg(long)]
        monad: String,
    },
    /// Decide relative monadicity of `r` along `j`.
    Monadic(MonadicArgs),
    /// Paste a relative adjunction onto another, or take it apart again.
    Paste(PasteArgs),
    /// Decide monadicity of `r` along the left adjoint of `r'`, and of `r;r'` along `j`.
    Composite {
        #[arg(long)]
        j: String,
        #[arg(long)]
        rprime: String,
        #[arg(long)]
        r: String,
        #[command(flatten)]
        mode: ModeFlags,
    },
    /// Run every theorem check over a corpus.
    Suite(SuiteArgs),
}

#[derive(Subcommand, Debug)]
enum MonadAction {
    /// Load a monad and check its laws.
    Validate { monad: String },
    /// Enumerate every monad on a root.
    Enumerate {
        #[arg(long)]
        j: String,
        #[arg(long)]
        limit: Option<usize>,
        /// Write a document holding the root, the carriers and the monads.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Least,
    Greatest,
}

#[derive(Args, Debug, Clone, Copy)]
struct ModeFlags {
    /// Comparison functor must be an isomorphism (the default).
    #[arg(long, conflicts_with = "nonstrict")]
    strict: bool,
    /// Comparison functor need only be an equivalence.
    #[arg(long)]
    nonstrict: bool,
}

#[derive(Args, Debug)]
struct MonadicArgs {
    #[arg(long)]
    j: String,
    #[arg(long)]
    r: String,
    #[command(flatten)]
    mode: ModeFlags,
    /// Decide comonadicity instead, by passing to opposites.
    #[arg(long)]
    co: bool,
    /// Also audit creation of colimits over a family of shapes.
    #[arg(long)]
    audit: bool,
    /// Largest shape, in morphisms.
    #[arg(long, default_value_t = 6)]
    shapes: usize,
    /// Largest shape, in objects.
    #[arg(long, default_value_t = 2)]
    objects: usize,
    /// Largest weight component.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    /// Audit limits as well.
    #[arg(long)]
    limits: bool,
    /// Audit only the shape family, without the checks taken from the proof.
    #[arg(long, requires = "audit")]
    no_targeted: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PasteDirection {
    Paste,
    Unpaste,
}

#[derive(Args, Debug)]
struct PasteArgs {
    #[arg(long, value_enum, default_value_t = PasteDirection::Paste)]
    direction: PasteDirection,
    /// `ℓ ⊣ r` relative to `ℓ'`: input when pasting, expected result when unpasting.
    #[arg(long)]
    inner: Option<String>,
    /// `ℓ ⊣ r;r'` relative to `j`: input when unpasting, expected result when pasting.
    #[arg(long)]
    outer: Option<String>,
    /// `ℓ' ⊣ r'` relative to `j`.
    #[arg(long)]
    prime: String,
    /// `r`, needed to unpaste.
    #[arg(long)]
    r: Option<String>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Directory of bundles; the built-in corpus when absent.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Largest audit shape, in morphisms.
    #[arg(long, default_value_t = 6)]
    shapes: usize,
    /// Largest audit shape, in objects.
    #[arg(long, default_value_t = 2)]
    objects: usize,
    /// Largest weight component.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    #[arg(long, default_value_t = 4)]
    max_monads: usize,
    #[arg(long, default_value_t = 4)]
    max_triangles: usize,
    /// Skip limits in the creation audits.
    #[arg(long)]
    no_limits: bool,
    /// Comma-separated theorem names to run.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    status: Status,
    exit_code: u8,
    error: Option<String>,
    result: serde_json::Value,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Density { .. } => "density",
        Command::Adjoint { .. } => "adjoint",
        Command::Monad { action: MonadAction::Validate { .. } } => "monad validate",
        Command::Monad { action: MonadAction::Enumerate { .. } } => "monad enumerate",
        Command::Algebras { .. } => "algebras",
        Command::Monadic(_) => "monadic",
        Command::Paste(_) => "paste",
        Command::Composite { .. } => "composite",
        Command::Suite(_) => "suite",
    }
}

fn emit(report: Option<&PathBuf>, json: bool, command: &str, done: &Done, echo_error: bool) -> Result<(), String> {
    let env = Envelope {
        schema: relmon_core::monadicity::SCHEMA,
        command,
        status: done.status,
        exit_code: done.status.code(),
        error: done.error.clone(),
        result: done.result.clone(),
    };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| e.to_string())?;
    text.push('\n');
    if let Some(path) = report {
        std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if json {
        print!("{text}");
    } else {
        for line in &done.summary {
            println!("{line}");
        }
    }
    if let (true, Some(e)) = (echo_error, &done.error) {
        eprintln!("error: {e}");
    }
    Ok(())
}

/// Pulls `--report` out of argv by hand, for reports on unparsable input.
fn report_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter().enumerate().find_map(|(i, a)| {
        a.strip_prefix("--report=")
            .map(PathBuf::from)
            .or_else(|| (a == "--report").then(|| argv.get(i + 1).map(PathBuf::from)).flatten())
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let done = Done::failed(Status::InputError, e.render().to_string().trim().to_string());
            let json = argv.iter().any(|a| a == "--json");
            let report = report_path(&argv);
            let _ = emit(report.as_ref(), json, "usage", &done, false);
            return ExitCode::from(Status::InputError.code());
        }
    };
    let name = command_name(&cli.command);
    let done = commands::run(cli.command);
    match emit(cli.report.as_ref(), cli.json, name, &done, true) {
        Ok(()) => ExitCode::from(done.status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::InputError.code())
        }
    }
}
