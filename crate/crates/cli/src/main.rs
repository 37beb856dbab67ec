//! `graf`: fit curves with the gradient-weighted algebraic fit, analyze which
//! families admit a moment-only fit, and benchmark the two regimes.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graf::analyzer::CurveFamily;

#[derive(Parser, Debug)]
#[command(name = "graf", version, about = "Gradient-weighted algebraic curve fitting")]
struct Cli {
    /// Seed for sampling and synthetic data.
    #[arg(long, global = true, env = "GRAF_SEED", default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a curve to a point file or a saved moment file.
    Fit(FitArgs),
    /// Decide whether a polynomial or family admits a moment-only fit.
    Analyze(AnalyzeArgs),
    /// Time reduced and reweighting fits across data sizes.
    Bench(BenchArgs),
    /// Write synthetic noisy points on a curve.
    Generate(GenerateArgs),
    /// Accumulate a point file into a moment file.
    Accumulate(AccumulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitFamily {
    Circle,
    Line,
    Ellipse,
    Hyperbola,
    Parabola,
    /// General conic, for the reweighting fit.
    Conic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Newton iterations on the moments only.
    Reduced,
    /// Orthogonal distance fit (circles).
    Geometric,
    /// Iteratively reweighted conic fit, one data pass per iteration.
    Reweight,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Point file with one `x,y` pair per line; `-` reads standard input.
    #[arg(long, short, conflicts_with = "moments", required_unless_present = "moments")]
    input: Option<PathBuf>,
    /// Moment file written by `accumulate` or `--save-moments`.
    #[arg(long)]
    moments: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FitFamily::Circle)]
    family: FitFamily,
    #[arg(long, value_enum, default_value_t = Algorithm::Reduced)]
    algo: Algorithm,
    /// Starting parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    init: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    gradient_tol: f64,
    /// Accumulate moments on this many threads; bare flag uses all cores.
    #[arg(long, num_args = 0..=1)]
    parallel: Option<Option<usize>>,
    /// Also write the accumulated moments to this file.
    #[arg(long)]
    save_moments: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_family(s: &str) -> Result<CurveFamily, String> {
    s.parse()
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["polynomial", "family"])))]
pub struct AnalyzeArgs {
    /// Polynomial as a term list, e.g. "1 x^2 + 1 y^2 - 1".
    polynomial: Option<String>,
    /// Sample members of a built-in family instead.
    #[arg(long, value_parser = parse_family)]
    family: Option<CurveFamily>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Largest certificate degree tried.
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
    sizes: Vec<usize>,
    /// Reweighting iterations timed per repetition.
    #[arg(long, default_value_t = 5)]
    iterations: usize,
    /// Reduced iterations batched per timing.
    #[arg(long, default_value_t = 20_000)]
    reduced_batch: usize,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_parser = ["circle", "ellipse", "hyperbola", "parabola"], default_value = "circle")]
    family: String,
    /// Curve parameters: circle a,b,r; ellipse and hyperbola a,b,p,q,angle;
    /// parabola c.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<f64>>,
    #[arg(long, short, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,
    /// Range of the curve parameter, `lo,hi`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    arc: Option<Vec<f64>>,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
pub struct AccumulateArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    degree: u32,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, num_args = 0..=1)]
    parallel: Option<Option<usize>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(args) => commands::fit::run(args, cli.seed),
        Command::Analyze(args) => commands::analyze::run(args, cli.seed),
        Command::Bench(args) => commands::bench::run(args, cli.seed),
        Command::Generate(args) => commands::generate::run(args, cli.seed),
        Command::Accumulate(args) => commands::accumulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("graf: {e}");
            e.exit_code()
        }
    }
}
