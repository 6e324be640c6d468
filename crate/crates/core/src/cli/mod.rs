//! Command-line front end. The `permcheck` binary is a thin wrapper around
//! [`main_with`]; every command is also callable as a plain function.
//!
//! Exit codes: `0` all checks hold, `1` a violation survived the exact
//! re-check, `2` bad input or usage.

mod commands;
mod report;

pub use commands::{
    cmd_check, cmd_lemmas, cmd_perm, cmd_search, cmd_selftest, cmd_trace, format_permanent, AnyTrace, AnyValue,
    CheckOptions, ExactRecheck, Form, LemmaOptions, Mutation, SelftestSummary, SuiteTally, TraceInput,
    TraceReport, MAX_N, MIN_N, SELFTEST_CASES,
};
pub use report::{RunReport, SuiteSummary, Violation};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Result;
use crate::inequality::DEFAULT_TOL;
use crate::io::{read_matrix_file, Mode};
use crate::permanent::Engine;
use crate::search::SearchConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "permcheck", version, about = "Permanent inequalities for correlation matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance on float margins.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Float)]
    pub mode: ModeArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Permanent of a matrix file.
    Perm {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        #[command(flatten)]
        common: Common,
    },
    /// Batch check of per(A)per(B) >= per(A o B) or per(A)^2 >= per(A o conj A).
    Check {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = FormArg::Reduced)]
        form: FormArg,
        #[command(flatten)]
        common: Common,
    },
    /// Case analysis and chain margins for one 4x4 correlation matrix.
    Trace {
        #[arg(required_unless_present = "sample", conflicts_with = "sample")]
        file: Option<PathBuf>,
        /// Trace a seeded sample instead of a file.
        #[arg(long)]
        sample: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized suites for the supporting inequalities.
    Lemmas {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Hill climbing on per(A o conj A) / per(A)^2.
    Search {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 4)]
        restarts: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact identity suites.
    Selftest {
        #[arg(long, value_enum, hide = true)]
        mutate: Option<MutationArg>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Float,
    Rational,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineArg {
    Naive,
    Ryser,
    Auto,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Naive => Engine::Naive,
            EngineArg::Ryser => Engine::Ryser,
            EngineArg::Auto => Engine::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Pair,
    Reduced,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationArg {
    FlipY2Sign,
}

/// What a command printed and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn json<T: Serialize>(value: &T, code: i32) -> Result<Outcome> {
    Ok(Outcome {
        output: serde_json::to_string_pretty(value)?,
        code,
    })
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Perm { common, .. }
            | Command::Check { common, .. }
            | Command::Trace { common, .. }
            | Command::Lemmas { common, .. }
            | Command::Search { common, .. }
            | Command::Selftest { common, .. } => common,
        }
    }
}

/// Runs a parsed command. Errors are input or usage errors (exit 2).
pub fn execute(command: &Command) -> Result<Outcome> {
    let c = command.common();
    match command {
        Command::Perm { file, engine, .. } => {
            let value = cmd_perm(&read_matrix_file(file)?, (*engine).into())?;
            Ok(Outcome {
                output: format_permanent(&value),
                code: EXIT_OK,
            })
        }
        Command::Check { n, trials, form, .. } => {
            let report = cmd_check(&CheckOptions {
                n: *n,
                trials: *trials,
                seed: c.seed,
                tol: c.tol,
                form: match form {
                    FormArg::Pair => Form::Pair,
                    FormArg::Reduced => Form::Reduced,
                },
                mode: c.mode.into(),
            })?;
            json(&report, report.exit_code())
        }
        Command::Trace { file, sample, .. } => {
            let input = match (file, sample) {
                (Some(path), _) => TraceInput::Matrix(read_matrix_file(path)?),
                (None, Some(seed)) => TraceInput::Sample {
                    seed: *seed,
                    mode: c.mode.into(),
                },
                (None, None) => {
                    return Err(crate::Error::Precondition("trace needs a matrix file or --sample".into()))
                }
            };
            let report = cmd_trace(&input, c.tol)?;
            json(&report, report.exit_code())
        }
        Command::Lemmas { n, trials, .. } => {
            let report = cmd_lemmas(&LemmaOptions {
                n: *n,
                trials: *trials,
                seed: c.seed,
                tol: c.tol,
            })?;
            json(&report, report.exit_code())
        }
        Command::Search {
            n, iterations, restarts, ..
        } => {
            let result = cmd_search(&SearchConfig::new(*n, *iterations, *restarts, c.seed))?;
            let code = match &result.counterexample {
                Some(v) if v.is_confirmed() => EXIT_VIOLATION,
                _ => EXIT_OK,
            };
            json(&result, code)
        }
        Command::Selftest { mutate, .. } => {
            let summary = cmd_selftest(match mutate {
                Some(MutationArg::FlipY2Sign) => Mutation::FlipY2Sign,
                None => Mutation::None,
            });
            Ok(Outcome {
                output: summary.to_string(),
                code: summary.exit_code(),
            })
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit
/// code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.command.common().out {
        Some(path) => std::fs::write(path, format!("{}\n", outcome.output)),
        None => writeln!(std::io::stdout().lock(), "{}", outcome.output),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    outcome.code
}
