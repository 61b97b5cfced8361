use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcore::{Algorithm, Strategy, DEFAULT_BATCH, DEFAULT_THREADS};

#[derive(Debug, Parser)]
#[command(
    name = "kcore",
    version,
    about = "Exact k-core decomposition and benchmark harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time an engine over every thread count and batch size given.
    Run(RunArgs),
    /// Vary threads or batch size over one loaded graph.
    Sweep(SweepArgs),
    /// Per-iteration distance from the true coreness and active fraction.
    Trace(RunArgs),
    /// Download benchmark graphs and check their sizes.
    Fetch(FetchArgs),
    /// Check an engine run, or a coreness file, against the oracle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Threads,
    Batch,
}

#[derive(Clone, Debug, Args)]
pub struct EngineArgs {
    /// Edge list file (optionally gzip), or a dataset name looked up in the
    /// data directory.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value = "fastk", value_parser = parse_algorithm)]
    pub algo: Algorithm,
    /// ParallelK scheduling: data-parallel, task-pool or dedicated.
    #[arg(long, default_value = "dedicated", value_parser = parse_strategy)]
    pub strategy: Strategy,
    /// Comma-separated thread counts.
    #[arg(long, default_value_t = List(vec![DEFAULT_THREADS]), value_parser = parse_list)]
    pub threads: List,
    /// Comma-separated batch sizes.
    #[arg(long, default_value_t = List(vec![DEFAULT_BATCH]), value_parser = parse_list)]
    pub batch: List,
    #[arg(long, value_name = "BOOL")]
    pub selective_send: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    pub single_round: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    pub sorted_neighbors: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    pub extended_notify: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    pub hybrid_tail: Option<bool>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Directory for mismatch reports.
    #[arg(long, default_value = ".")]
    pub report_dir: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    /// Skip the oracle check of every run.
    #[arg(long)]
    pub no_verify: bool,
    /// Record per-iteration convergence; marks rows as instrumented.
    #[arg(long)]
    pub trace_convergence: bool,
    /// Check at every FastK iteration that no idle node would change.
    #[arg(long)]
    pub audit_activation: bool,
    #[arg(long)]
    pub count_messages: bool,
    /// Per-iteration CSV for --trace-convergence.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Write `node,coreness` of the last run.
    #[arg(long)]
    pub coreness_out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: Axis,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Debug, Args)]
pub struct FetchArgs {
    /// Dataset names; nothing is fetched when empty.
    pub names: Vec<String>,
    /// Every dataset in the manifest.
    #[arg(long, conflicts_with = "names")]
    pub all: bool,
    /// Target directory; `$KCORE_DATA_DIR` or `data` by default.
    #[arg(long)]
    pub dir: Option<PathBuf>,
    /// Replace the download host, e.g. a local mirror.
    #[arg(long)]
    pub base_url: Option<String>,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// `node,coreness` CSV to check instead of running an engine.
    #[arg(long)]
    pub coreness: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

/// Comma-separated positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

impl fmt::Display for List {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_list(s: &str) -> Result<List, String> {
    let values = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<usize>() {
                Ok(0) => Err("values must be at least 1".to_string()),
                Ok(v) => Ok(v),
                Err(_) => Err(format!("{t:?} is not a positive integer")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(List(values))
}
