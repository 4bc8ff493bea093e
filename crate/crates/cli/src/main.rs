mod commands;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kcascade::witness::Counting;

#[derive(Parser)]
#[command(name = "kcascade", version, about = "Root systems, Kostant cascades and witness subsets, in exact arithmetic")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Simple,
    Euclidean,
    Cascade,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountingArg {
    /// Every nonnegative integer representation counts.
    Exact,
    /// Only representations whose coefficient sum is the cascade degree.
    Graded,
}

impl From<CountingArg> for Counting {
    fn from(c: CountingArg) -> Self {
        match c {
            CountingArg::Exact => Counting::Exact,
            CountingArg::Graded => Counting::Graded,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct CacheArgs {
    /// Cache directory; overrides KCASCADE_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots in canonical order.
    Roots {
        #[arg(long = "type")]
        ty: String,
    },
    /// The Kostant cascade.
    Cascade {
        #[arg(long = "type")]
        ty: String,
    },
    /// Weights mu_beta in the chosen basis.
    Weights {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_enum, default_value_t = Basis::Simple)]
        basis: Basis,
    },
    /// Type of the subsystem orthogonal to the highest root.
    Subsystem {
        #[arg(long = "type")]
        ty: String,
    },
    /// Orthogonal subsets of the positive roots.
    Enum {
        #[arg(long = "type")]
        ty: String,
        /// Largest subset size (default: the rank).
        #[arg(long)]
        max_size: Option<usize>,
        /// Print counts only.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Witness search over every admissible zero pattern.
    Sweep {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Also list the other valid witnesses of the chosen size.
        #[arg(long)]
        all_witnesses: bool,
        #[arg(long, value_enum, default_value_t = CountingArg::Exact)]
        counting: CountingArg,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Validate the tabulated witness rows.
    Validate {
        /// An exceptional type, or "all".
        #[arg(long = "type", default_value = "all")]
        ty: String,
        /// Directory of fixture files (default: the embedded copies).
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CountingArg::Exact)]
        counting: CountingArg,
    },
    /// Reconstruct xi from central scalars c.
    Xi {
        #[arg(long = "type")]
        ty: String,
        /// Comma-separated rationals in cascade order, e.g. 2,6 or 1/2,3.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
}

/// Exit status of a failed command.
#[derive(Debug)]
pub enum CliError {
    /// A mathematical check failed.
    Validation(String),
    /// Bad arguments or unparsable input.
    Usage(String),
    /// Cache or file-system trouble.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<emit::Output, CliError> {
    let f = cli.format;
    match cli.command {
        Command::Roots { ty } => commands::roots(&ty, f),
        Command::Cascade { ty } => commands::cascade(&ty, f),
        Command::Weights { ty, basis } => commands::weights(&ty, basis, f),
        Command::Subsystem { ty } => commands::subsystem(&ty, f),
        Command::Enum {
            ty,
            max_size,
            count_only,
            cache,
        } => commands::enumerate(&ty, max_size, count_only, &cache, f),
        Command::Sweep {
            ty,
            emit,
            all_witnesses,
            counting,
            cache,
        } => {
            let emit = emit.unwrap_or(match f {
                Format::Json => Emit::Json,
                Format::Table => Emit::Markdown,
            });
            commands::sweep(&ty, emit, all_witnesses, counting.into(), &cache)
        }
        Command::Validate { ty, fixtures, counting } => commands::validate(&ty, fixtures, counting.into(), f),
        Command::Xi { ty, c } => commands::xi(&ty, &c, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    let e = CliError::Validation(msg);
                    eprintln!("error: {}", e.message());
                    ExitCode::from(e.code())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
