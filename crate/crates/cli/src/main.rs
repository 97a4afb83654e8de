mod format;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mlbcast",
    version,
    about = "Maximum-lifetime broadcast plans for wireless sensor networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a network file.
    Gen(GenArgs),
    /// Compute a broadcast plan for one source or every source.
    Solve(SolveArgs),
    /// Compare methods on one network as CSV.
    Compare(CompareArgs),
    /// Closed-form objective on the line against the large-N limits, as CSV.
    Sweep(SweepArgs),
    /// Render a plan file as Graphviz digraphs, one per part.
    ExportDot(ExportDotArgs),
}

#[derive(Args, Debug)]
pub struct CostArgs {
    /// Exponent of the single-term cost model E(r) = r^a.
    #[arg(long, default_value_t = 2.0, conflicts_with = "terms")]
    pub a: f64,
    /// Multi-term cost model as `lambda:a` pairs, e.g. `0.5:2,0.5:3`.
    #[arg(long)]
    pub terms: Option<String>,
    /// Require the term weights to sum to one.
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Nodes at 1, 2, ..., n on a line.
    Line {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integer lattice points (col, row), starting at 1, listed row by row.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Points drawn uniformly from [0, box)^dim with a seeded ChaCha8 generator.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "box", default_value_t = 10.0)]
        side: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Oracle,
    Heuristic,
    WmaBidirectional,
    WmaDirectional,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    Lp,
    EqualEnergy,
}

/// Source selection: a one-based node index or `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceArg {
    One(usize),
    All,
}

impl std::str::FromStr for SourceArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Self::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Self::One(k)),
            _ => Err(format!(
                "expected a node index starting at 1 or `all`, got {s:?}"
            )),
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Broadcasting node (one-based) or `all`.
    #[arg(long)]
    pub k: SourceArg,
    /// Amount of data to broadcast.
    #[arg(long = "Q", default_value_t = 1.0)]
    pub demand: f64,
    /// Battery capacity; prints the number of broadcast cycles it sustains.
    #[arg(long)]
    pub battery: Option<f64>,
    /// Largest network the oracle enumerates.
    #[arg(long, default_value_t = mlbcast::oracle::DEFAULT_CAP)]
    pub cap: usize,
    /// Weight assignment for the heuristic.
    #[arg(long, value_enum, default_value_t = Weights::Lp)]
    pub weights: Weights,
    /// Plan JSON path. With `--k all`, `_k<k>` is inserted before the extension.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Energy report JSON path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Solver statistics JSON path.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub k: SourceArg,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "analytic,oracle,heuristic"
    )]
    pub methods: Vec<Method>,
    #[arg(long = "Q", default_value_t = 1.0)]
    pub demand: f64,
    #[arg(long, default_value_t = mlbcast::oracle::DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Broadcasting node (one-based, at least 2).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportDotArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
