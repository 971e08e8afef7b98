//! `thicket`: thick subcategory lattices and universal support spaces from
//! the command line.
//!
//! Exit status: 0 on success, 1 when a check fails (an axiom violation, a
//! morphism that is not a morphism of support data), 2 on unusable input.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "thicket", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Builtin presentation: a2, point, an:<n>, product:<n>
    #[arg(long, value_name = "FAMILY[:N]")]
    builtin: Option<String>,
    /// Presentation document
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Emit a single JSON document instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every thick subcategory, one per line
    Enumerate(Common),
    /// Distributivity, modularity, atoms and height of the lattice
    Lattice {
        #[command(flatten)]
        common: Common,
        /// Write the Hasse diagram as DOT to PATH, or to stdout without PATH
        #[arg(long, value_name = "PATH", num_args = 0..=1)]
        dot: Option<Option<PathBuf>>,
        #[arg(long, default_value_t = thicket::lattice::DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
    /// Summarize the universal support space
    Space {
        #[command(flatten)]
        common: Common,
        /// Largest closed family to materialize
        #[arg(long, default_value_t = 4096)]
        max_size: usize,
    },
    /// Check the support-datum axioms (default: the universal space itself)
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        datum: Option<PathBuf>,
    },
    /// Compute the universal morphism, or check a supplied one
    Map {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        datum: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        morphism: Option<PathBuf>,
    },
    /// Prime ideals, their supports, and the tensor support axioms
    Spectrum(Common),
    /// Compare the spectrum of primes with the universal support space
    Compare(Common),
    /// Emit a random support datum pulled back from the universal space
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        points: usize,
    },
}

/// Result of a command that ran to completion.
pub struct Outcome {
    pub stdout: String,
    /// False when a check failed.
    pub valid: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            if out.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
