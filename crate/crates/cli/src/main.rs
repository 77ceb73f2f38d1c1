mod commands;
mod error;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

/// Additive-error range counting sketches, binary nets and discrepancy tools.
#[derive(Debug, Parser)]
#[command(name = "rangesketch", version)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Table format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Suppress tables and warnings; files are still written.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a sketch from a point file.
    Build(BuildArgs),
    /// Answer range-count queries from a sketch.
    Query(QueryArgs),
    /// Compare sketch estimates with exact counts on random rectangles.
    Eval(EvalArgs),
    /// Build and verify an eps-net.
    Net(NetArgs),
    /// Generate or decode a binary net.
    NetGen(NetGenArgs),
    /// Discrepancy of point sets.
    Disc(DiscArgs),
    /// Build a hard family of binary nets.
    Family(FamilyArgs),
    /// Space and error over an (n, eps) sweep.
    Bench(BenchArgs),
    /// Enumerate the one-dimensional cluster family.
    OnedimLb(OnedimArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Point file (`n <side>` then one `x y` per line).
    #[arg(long)]
    pub input: PathBuf,
    /// Error parameter p/q.
    #[arg(long)]
    pub eps: String,
    /// Where to write the binary sketch.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub sketch: PathBuf,
    /// Four-sided range "x_lo x_hi y_lo y_hi"; repeatable.
    #[arg(long = "rect", value_name = "X_LO X_HI Y_LO Y_HI")]
    pub rects: Vec<String>,
    /// Dominance range [0,x) x [0,y) as "x y"; repeatable.
    #[arg(long = "dominance", value_name = "X Y")]
    pub dominance: Vec<String>,
    /// File with one query per line, in either form.
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub sketch: PathBuf,
    /// The point file the sketch was built from.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Also write every query with its exact count and estimate.
    #[arg(long)]
    pub rows_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NetArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NetGenArgs {
    /// Grid side, a power of two.
    #[arg(long)]
    pub n: u32,
    /// Decode this hex partition vector instead of drawing one.
    #[arg(long)]
    pub vector: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub vector_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiscMode {
    Lebesgue,
    Comb,
    Union,
    Corner,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long, value_enum)]
    pub mode: DiscMode,
    #[arg(long)]
    pub input: PathBuf,
    /// Second point set (union mode, or corner distance).
    #[arg(long)]
    pub input2: Option<PathBuf>,
    /// Point limit for the exact combinatorial solver.
    #[arg(long, default_value_t = rangesketch::discrepancy::EXACT_MAX_POINTS)]
    pub max_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Up,
    Down,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Evaluate at most this many random pairs (default: all).
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Compute union discrepancy for this many of the evaluated pairs.
    #[arg(long, default_value_t = 0)]
    pub union_pairs: usize,
    /// Random completions used to check the block assignments.
    #[arg(long, default_value_t = 100)]
    pub completions: usize,
    #[arg(long, value_enum, default_value_t = ReadingArg::Up)]
    pub reading: ReadingArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Grid sides, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Error parameters p/q, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct OnedimArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub eps: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rangesketch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
