//! `pirep` command-line front end.
//!
//! Exit codes: 0 property holds, 1 usage or parse error, 2 property fails
//! (a witness is printed), 3 inconclusive (a cap was hit or the field's
//! characteristic is too small).

pub mod certificate;
pub mod commands;
pub mod repfile;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pirep", version, about = "Exact unitriangularity checks for matrix group representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Representation file (JSON).
    pub repfile: PathBuf,
    /// Write a machine-checkable certificate here.
    #[arg(long, value_name = "OUT")]
    pub cert: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Nil,
    Engel,
    Algebraic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unipotency index of each generator, or of the given words.
    CheckUnipotent {
        #[command(flatten)]
        common: Common,
        /// Word to check instead of the generators (repeatable).
        #[arg(long = "element", value_name = "WORD")]
        elements: Vec<String>,
    },
    /// Build an invariant flag dropped by every generator.
    Kolchin {
        #[command(flatten)]
        common: Common,
    },
    /// Check (h_1 - I)...(h_n - I) = 0 over all generator tuples.
    IdentityCheck {
        #[command(flatten)]
        common: Common,
        /// Number of factors n.
        #[arg(long)]
        length: usize,
        /// Assume the identity only modulo the radical and lift it.
        #[arg(long)]
        lift_through_radical: bool,
    },
    /// Minimal standard-identity degree of the enveloping algebra.
    PiCheck {
        #[command(flatten)]
        common: Common,
        /// Largest k to try for S_k.
        #[arg(long)]
        max_degree: usize,
    },
    /// Radical membership of group elements.
    UnipotentRadical {
        #[command(flatten)]
        common: Common,
        /// Word to test for membership (repeatable).
        #[arg(long = "test", value_name = "WORD")]
        tests: Vec<String>,
        /// Cross-check against exhaustive subgroup search (finite groups only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = "PIREP_ELEMENT_CAP", default_value_t = 100_000)]
        element_cap: usize,
    },
    /// Sampled evidence for nil, Engel and algebraic behaviour.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: ProbeKind,
        /// The element g (a word); defaults to the first generator.
        #[arg(long)]
        g: Option<String>,
        /// The element x (a word); defaults to every generator in turn.
        #[arg(long)]
        x: Option<String>,
        /// Engel depth.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, env = "PIREP_DEPTH_CAP", default_value_t = 10)]
        depth_cap: usize,
        #[arg(long, env = "PIREP_ELEMENT_CAP", default_value_t = 100_000)]
        element_cap: usize,
        #[arg(long, env = "PIREP_SAMPLES", default_value_t = 1000)]
        samples: usize,
        #[arg(long, env = "PIREP_WORD_LENGTH", default_value_t = 8)]
        word_length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify a certificate file.
    VerifyCert { certificate: PathBuf },
}

/// Parses arguments, runs one command, prints its report and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    commands::dispatch(cli.command, out, err)
}
