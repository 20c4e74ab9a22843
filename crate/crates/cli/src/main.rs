//! `locq`: build codes, decode errors, run sweeps and scaling benchmarks.

mod commands;
mod ranges;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use locq::LocqError;

#[derive(Parser, Debug)]
#[command(name = "locq", version, about = "Decoders for subdivided geometrically local quantum codes")]
struct Cli {
    /// Worker threads for sweeps and parallel patch decoding (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write its JSON description.
    Build(BuildArgs),
    /// Decode one error on a code file and print a JSON report.
    Decode(DecodeArgs),
    /// Monte Carlo logical error rates of a subdivided code family, as CSV.
    Sweep(SweepArgs),
    /// Operation counts and wall time over a size sweep, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    GenRep,
    GenSurface,
    Planar,
    Subdivided,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Branching degree (first factor for gen-surface).
    #[arg(long)]
    delta: Option<usize>,
    /// Branching degree of the second gen-surface factor; defaults to --delta.
    #[arg(long)]
    delta_b: Option<usize>,
    /// Length L (distance for planar).
    #[arg(long)]
    length: usize,
    /// Outer code for subdivided, e.g. toric:3,3.
    #[arg(long)]
    outer: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Peel,
    Uf,
    GenUf,
    RepMwpm,
    Subdivided,
    Trivial,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// JSON error file with `error` and optional `erasure` qubit lists.
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    error: Option<PathBuf>,
    /// Sample noise instead: p[,p_erase[,seed]].
    #[arg(long)]
    sample: Option<String>,
    /// Seed when --sample gives none.
    #[arg(long, env = "LOCQ_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    /// Decode patches and T regions of a subdivided code concurrently.
    #[arg(long)]
    parallel_patches: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value = "toric:3,3")]
    outer: String,
    /// Subdivision lengths, comma separated.
    #[arg(long = "L", value_name = "L")]
    lengths: String,
    /// Error rates: a comma list or start:stop:step.
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 0.0)]
    p_erase: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, env = "LOCQ_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "subdivided")]
    decoder: DecoderArg,
    #[arg(long)]
    parallel_patches: bool,
    /// Append analytic bound rows on the same (L, p) grid.
    #[arg(long)]
    bounds: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    GenUf,
    Subdivided,
    Uf,
    Quadratic,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Sizes, comma separated.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 0.02)]
    p: f64,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long, env = "LOCQ_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its process exit status.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<LocqError> for Failure {
    fn from(e: LocqError) -> Self {
        let code = match &e {
            LocqError::InvalidParameter(_) => 2,
            LocqError::Internal(_) => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::mismatch(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::mismatch(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::mismatch(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    let result = locq::par::with_jobs(jobs, move || match cli.command {
        Command::Build(a) => commands::build(a),
        Command::Decode(a) => commands::decode(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Bench(a) => commands::bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
