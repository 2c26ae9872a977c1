//! `hypertile`: command-line front end for hypertile-core.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "hypertile", version, about = "Perfect tilings of k-uniform hypergraphs")]
struct Cli {
    /// Worker threads for parallel sections (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the run report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a lower-bound construction and its certificate.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Generate random hosts.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Search for a perfect tiling.
    Factor(FactorArgs),
    /// Write the threshold-coefficient table.
    Thresholds(ThresholdArgs),
    /// Partial designs: generate, validate, independence number.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// Closeness graph of a host with respect to a pattern.
    Closeness(ClosenessArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Directory for the emitted files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Base name of the emitted files (default derived from the parameters).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructKind {
    /// Three parts; a k-set is an edge when it meets some part oddly.
    Parity {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// All k-sets meeting a set W of size (t−k+1)n/t − 1.
    SpaceBarrier {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Complement of the three-rule 3-graph driven by H0.
    Pikhurko {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: usize,
        /// H0 as a hypergraph file.
        #[arg(long, conflicts_with = "fano", required_unless_present = "fano")]
        h0: Option<PathBuf>,
        /// Use the Fano plane as H0.
        #[arg(long)]
        fano: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Complete t-partite graph with one part short and one part long.
    Multipartite {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        /// Use equal parts instead.
        #[arg(long)]
        balanced: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenerateKind {
    /// Edge-deleted K_n^k keeping every codegree at least --min-codegree.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        min_codegree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LocalSearch,
    Pipeline,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorArgs {
    /// Host hypergraph file.
    pub file: PathBuf,
    /// K:t:k, KP:k:m1,..,mk, B:lambda or F:<file>.
    #[arg(long)]
    pub pattern: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Local-search restarts.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Pipeline step 1: cover vertices in many α-bad pairs, α given as p/q.
    #[arg(long)]
    pub alpha_good: Option<String>,
    /// Pipeline: force the closeness level.
    #[arg(long)]
    pub level: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub k_max: usize,
    /// Fixed t for every row (default: t = k + 1).
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "cmd", rename_all = "kebab-case")]
pub enum DesignCmd {
    /// Random-greedy partial t-(n,k,λ) design.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hypergraph file; the JSON sidecar goes next to it.
        #[arg(long, default_value = "design.hg")]
        out: PathBuf,
    },
    /// Check that the edges of a file form a partial design.
    Check {
        file: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        lambda: usize,
    },
    /// Independence number, and B_λ-freeness when --lambda is given.
    Alpha {
        file: PathBuf,
        #[arg(long)]
        lambda: Option<usize>,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ClosenessArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub pattern: String,
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, default_value_t = 1)]
    pub tau: u64,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let caps = hypertile_core::Caps::from_env()?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Params(format!("cannot configure {n} threads: {e}")))?;
    }
    let start = Instant::now();
    let mut outcome = match cli.command {
        Command::Construct { kind } => commands::construct(kind, &caps)?,
        Command::Generate { kind } => commands::generate(kind, &caps)?,
        Command::Factor(args) => commands::factor(args, &caps)?,
        Command::Thresholds(args) => commands::thresholds(args)?,
        Command::Design { cmd } => commands::design(cmd, &caps)?,
        Command::Closeness(args) => commands::closeness(args, &caps)?,
    };
    outcome.report.wall_time_ms = start.elapsed().as_millis();
    let json = serde_json::to_string_pretty(&outcome.report)?;
    if let Some(path) = &cli.report {
        std::fs::write(path, format!("{json}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    println!("{json}");
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) if o.negative => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
