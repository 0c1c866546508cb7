use std::path::PathBuf;
use std::process::ExitCode;

use bdspace::{Error, ErrorCategory, TypeTag, DEFAULT_RESTARTS};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

/// Analysis of three-fermion states in six orbitals.
///
/// Every command prints a human-readable section followed by a `json:` line and
/// a JSON document carrying the same numbers at full precision.
#[derive(Debug, Parser)]
#[command(name = "bdspace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Search {
    /// Optimizer restarts; restart 0 starts from the natural orbitals.
    #[arg(long, env = "BDSPACE_RESTARTS", default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Occupations, representability margins, invariants and class tags.
    Analyze { file: PathBuf },
    /// Canonical CI expansion as an X/O configuration table.
    Canonical {
        file: PathBuf,
        #[arg(long, value_enum)]
        form: Form,
        /// Write the state in the canonical basis.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        search: Search,
    },
    /// Best approximation within a class, its certificate and the expansion it induces.
    Maxoverlap {
        /// A state file, or for `type4a` also a qubit file.
        file: PathBuf,
        #[arg(long, value_enum)]
        class: Class,
        #[command(flatten)]
        search: Search,
    },
    /// Generate a seeded normalized state.
    Random {
        #[arg(long)]
        seed: u64,
        /// Class tag (Type1, Type2a, Type2b, Type3a, Type3b, CIS, CID, LowRank, OrthoGHZ, OrthoW).
        #[arg(long)]
        class: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every structural check on one state; exit 3 on any violation.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Map a 3-qubit state into the standard qubit subspace.
    Embed {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read a state as a 3-qubit state in its natural pairing.
    Unembed {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Bd,
    Lone,
    Cis,
    Cid,
    Slater5,
    Cis5,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Class {
    Slater,
    Lowrank,
    Cis,
    Cid,
    Type4a,
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        ErrorCategory::Input => 1,
        ErrorCategory::Precondition => 2,
        ErrorCategory::Invariant => 3,
    }
}

fn run(cli: Cli) -> bdspace::Result<u8> {
    match cli.command {
        Command::Analyze { file } => commands::analyze(&file),
        Command::Canonical { file, form, output, search } => {
            commands::canonical(&file, form, output.as_deref(), search.restarts, search.seed)
        }
        Command::Maxoverlap { file, class, search } => commands::maxoverlap(&file, class, search.restarts, search.seed),
        Command::Random { seed, class, output } => {
            let tag = class.map(|c| c.parse::<TypeTag>()).transpose()?;
            commands::random(seed, tag, output.as_deref())
        }
        Command::Verify { file, search } => commands::verify(&file, search.restarts, search.seed),
        Command::Embed { file, output } => commands::embed(&file, output.as_deref()),
        Command::Unembed { file, output } => commands::unembed(&file, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; help and version are not errors.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
