//! Command-line front end for `endspace-core`.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use endspace_core::endspace::EndspaceError;
use endspace_core::quotient::QuotientError;
use endspace_core::sources::{ParseError, SourceError};
use endspace_core::tours::TourError;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "endspace", version, about = "Ends, limit edges and Euler tours of infinite digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Source file, or `builtin:<name>` such as `builtin:necklace(3)`.
    #[arg(long)]
    pub source: String,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SetArgs {
    /// Vertex set: `all`, `part:<name>` or comma-separated labels. Repeatable.
    #[arg(long = "set")]
    pub sets: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degrees, parts and solidity of the first levels.
    Info(Common),
    /// The quotient levels `0..=depth`.
    Quotients {
        #[command(flatten)]
        common: Common,
        /// Write `level<n>.dot` files into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Ends and limit edges up to the depth.
    Ends(Common),
    /// Limit edges up to the depth.
    LimitEdges(Common),
    /// Basic open set around one end.
    BasicOpen {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        end: usize,
        /// Level of the open set; defaults to the depth.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Search for a necklace prefix.
    Necklace {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5, value_parser = positive)]
        beads: usize,
        #[command(flatten)]
        sets: SetArgs,
    },
    /// Bounded rank search.
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        r_max: usize,
        #[arg(long, default_value_t = 2, value_parser = positive)]
        sep_bound: usize,
        #[command(flatten)]
        sets: SetArgs,
    },
    /// Local finiteness and cut balance.
    CheckEuler(Common),
    /// Compatible Euler tours of the levels.
    EulerTour {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = endspace_core::tours::DEFAULT_TOUR_LIMIT, value_parser = positive)]
        tour_limit: usize,
        /// Class of level 0 the tours start from.
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// Closed walks through all classes, refined level by level.
    SpanWalk(Common),
    /// Inverse-system laws of the quotient chain.
    Verify(Common),
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

fn source_code(e: &SourceError) -> i32 {
    match e {
        SourceError::OracleUnavailable => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        CliError {
            code: source_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        let code = match &e {
            QuotientError::NonSolidAtLevel { .. } | QuotientError::TooManyEdges { .. } => EXIT_BOUND,
            QuotientError::Source(s) => source_code(s),
            QuotientError::BeyondOrder { .. } | QuotientError::LevelOrder { .. } => EXIT_INVALID,
            QuotientError::Internal(_) => EXIT_INTERNAL,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EndspaceError> for CliError {
    fn from(e: EndspaceError) -> Self {
        match e {
            EndspaceError::Quotient(q) => q.into(),
            EndspaceError::Source(s) => s.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<TourError> for CliError {
    fn from(e: TourError) -> Self {
        match e {
            TourError::Quotient(q) => q.into(),
            TourError::Source(s) => s.into(),
            TourError::Internal(_) | TourError::LevelMismatch { .. } => CliError::internal(e.to_string()),
            other => CliError::invalid(other.to_string()),
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = stream.write_all(text.as_bytes());
            return code;
        }
    };
    match commands::dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
