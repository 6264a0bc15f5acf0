//! `groupoid-card`: verification suites for cycle statistics of random permutations and their
//! groupoid form.
//!
//! Exit status is 0 when every check passes, 1 when a mathematical check fails and 2 on
//! usage or validation errors.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "groupoid-card", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check E(prod_k c_k^(p_k falling)) = prod_k 1/k^p_k (or 0 when |p| > n).
    VerifyLemma(LemmaArgs),
    /// Compare the skeleton of Q_p // S_n with Perm_{n-|p|} x prod_k B(Z/k)^p_k.
    VerifyCategorified(CategorifiedArgs),
    /// Print the partition skeleton of Perm_n and its cardinality.
    Skeleton(SkeletonArgs),
    /// Exact first and second factorial moments of every c_k, and the expected cycle count.
    Stats(StatsArgs),
    /// Seeded Monte Carlo estimate of one moment.
    Montecarlo(MonteCarloArgs),
    /// Check E(|F|) = |int F| for a functor G // G -> FinSet.
    TheoremGeneral(TheoremArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    CycleType,
    MonteCarlo,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExactMethodArg {
    Brute,
    CycleType,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Builtin {
    FixedPoints,
    CycleTuples,
    Trivial,
}

/// A single `--p` or a bounded sweep.
#[derive(Args, Debug)]
struct PSelection {
    /// Comma-separated p_1,..,p_n; its length must equal n.
    #[arg(long, value_name = "P1,..,PN", conflicts_with = "all_p")]
    p: Option<String>,
    /// Sweep every p with bounded entries and weight.
    #[arg(long)]
    all_p: bool,
    /// Largest entry in a sweep.
    #[arg(long, default_value_t = 2, requires = "all_p")]
    max_entry: usize,
    /// Largest weight sum_k k p_k in a sweep [default: n].
    #[arg(long, requires = "all_p")]
    max_weight: Option<usize>,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    select: PSelection,
    #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
    method: MethodArg,
    /// Samples for the Monte Carlo method.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Largest accepted |z| for Monte Carlo reports.
    #[arg(long, default_value_t = 4.0)]
    z_threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct CategorifiedArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    select: PSelection,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SkeletonArgs {
    /// Degree; negative values give the empty groupoid.
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ExactMethodArg::CycleType)]
    method: ExactMethodArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct MonteCarloArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated p_1,..,p_n.
    #[arg(
        long,
        value_name = "P1,..,PN",
        conflicts_with = "p_one",
        required_unless_present = "p_one"
    )]
    p: Option<String>,
    /// A single falling power: `k=K` (first power of c_K) or `k=K,p=P`.
    #[arg(long, value_name = "k=K[,p=P]")]
    p_one: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 4.0)]
    z_threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct TheoremArgs {
    #[arg(long, value_enum, conflicts_with = "functor", required_unless_present = "functor")]
    builtin: Option<Builtin>,
    /// Functor description in JSON.
    #[arg(long, value_name = "FILE")]
    functor: Option<PathBuf>,
    /// Degree for the fixed-points and cycle-tuples functors.
    #[arg(long)]
    n: Option<usize>,
    /// p for the cycle-tuples functor.
    #[arg(long, value_name = "P1,..,PN")]
    p: Option<String>,
    /// Group for the trivial functor, e.g. `S3`, `Z/4`, `D4`, `Q8`, `Z2xZ3`.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = groupoid_card::Limits::from_env();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(cli.command, &limits, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
