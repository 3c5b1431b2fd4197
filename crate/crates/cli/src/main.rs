mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nichols::Error;

/// Exact computations for Nichols algebras of diagonal type.
#[derive(Parser, Debug)]
#[command(name = "nichols", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Braiding class, Dynkin diagram, Cartan matrix and its type.
    Classify(InputArgs),
    /// Reflect the matrix at a vertex and print the result as matrix JSON.
    Reflect {
        #[command(flatten)]
        input: InputArgs,
        /// Vertex to reflect at (1-based).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        vertex: u64,
    },
    /// Enumerate the Weyl groupoid with real-root tracking.
    Groupoid {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Also apply the rank-two shortcuts (rank 2 only).
        #[arg(long)]
        decide: bool,
    },
    /// GK dimension of the Nichols algebra.
    Gkdim {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Skip the rank-two shortcuts and use plain enumeration.
        #[arg(long)]
        plain: bool,
    },
    /// Decide whether an element of the tensor algebra vanishes in the
    /// Nichols algebra, or compute a graded dimension.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Element expression, e.g. "y(3)^2" or "x1 x2 - z*x2 x1".
        #[arg(long, required_unless_present = "dim")]
        element: Option<String>,
        /// Comma-separated degree, e.g. "2,1": print dim B(V)_degree.
        #[arg(long)]
        dim: Option<String>,
        /// Largest total degree the oracle will handle.
        #[arg(long, default_value_t = nichols::freealg::DEFAULT_MAX_DEGREE,
              value_parser = positive_usize)]
        max_degree: usize,
    },
    /// Run a verification suite ("all" runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
        /// Seed for the sampling suite.
        #[arg(long, default_value_t = nichols::rank2::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Matrix JSON file, or "-" for standard input.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct CapArgs {
    #[arg(long, default_value_t = 10_000, value_parser = positive_usize)]
    max_matrices: usize,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_root_height: u64,
    /// Cap on (diagram, root map) pairs.
    #[arg(long, default_value_t = 200_000, value_parser = positive_usize)]
    max_states: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Exit codes: 0 success, 1 mathematical failure, 2 resource cap,
/// 3 bad input or usage.
#[derive(Debug)]
enum Failure {
    Math(String),
    Cap(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Cap(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Math(m) | Failure::Cap(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::CapExceeded(_) | Error::DegreeTooLarge { .. } => Failure::Cap(msg),
            Error::Parse { .. }
            | Error::InvalidMatrix(_)
            | Error::TrivialDiagonal(_)
            | Error::IndexOutOfRange { .. }
            | Error::UnknownSuite(_)
            | Error::RankMismatch(_)
            | Error::InhomogeneousInput
            | Error::OutOfRange(_) => Failure::Input(msg),
            _ => Failure::Math(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Outcome { output, failure }) => {
            if let Some(out) = output {
                print!("{out}");
            }
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
