use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nearstable::stability::{check_stability, default_tolerances, StabilityVerdict};
use nearstable::{
    generate, init_identity, init_inverse_form, parse_matrix, solve, spectral_abscissa, Algorithm,
    InverseInitConfig, Matrix, MatrixFamily, SolverConfig, TestMatrixSpec,
};

mod bench;
mod report;

#[derive(Parser, Debug)]
#[command(name = "nearstable", version, about = "Nearest stable matrices via (J - R) Q factorizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a benchmark matrix to a file
    Generate(GenerateArgs),
    /// Compute a nearby stable matrix
    Solve(SolveArgs),
    /// Run a grid of solver runs and summarize final errors
    Bench(bench::BenchArgs),
    /// Report the spectral abscissa and a stability verdict
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Matrix family (1-4)
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=4))]
    kind: u8,
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "grcar-k", default_value_t = 3)]
    grcar_k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Bcd,
    Grad,
    Fgm,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bcd => Algorithm::Bcd,
            AlgoArg::Grad => Algorithm::Grad,
            AlgoArg::Fgm => Algorithm::Fgm,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum InitArg {
    #[default]
    Identity,
    Inverse,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = InitArg::Identity)]
    init: InitArg,
    #[arg(long = "max-iter", conflicts_with = "time_budget")]
    max_iter: Option<usize>,
    /// Wall-clock budget in seconds
    #[arg(long = "time-budget")]
    time_budget: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    alpha1: f64,
    #[arg(long = "inner-k", default_value_t = 1000)]
    inner_k: usize,
    /// Trace CSV output
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Result JSON output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Half-width of the band around the imaginary axis (default 1e-8 ||X||_2)
    #[arg(long = "axis-tol")]
    axis_tol: Option<f64>,
    /// Singular value cutoff for numerical rank (default 1e-10 ||X||_2)
    #[arg(long = "rank-tol")]
    rank_tol: Option<f64>,
}

/// Exit codes shared by the subcommands.
mod exit {
    pub const UNSTABLE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const SOLVER: u8 = 3;
    pub const INDETERMINATE: u8 = 4;
    pub const IO: u8 = 1;
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_matrix(path: &Path) -> Result<Matrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_generate(args: GenerateArgs) -> ExitCode {
    let family = match MatrixFamily::from_number(args.kind) {
        Ok(f) => f,
        Err(e) => return fail(exit::PARSE, e),
    };
    let spec = TestMatrixSpec {
        family,
        size: args.size,
        seed: args.seed,
        grcar_k: args.grcar_k,
    };
    let m = match generate(&spec) {
        Ok(m) => m,
        Err(e) => return fail(exit::PARSE, e),
    };
    let mut text = format!("# {family} n={} seed={} grcar_k={}\n", spec.size, spec.seed, spec.grcar_k);
    text.push_str(&nearstable::matrix::format_matrix(&m));
    match write_file(&args.out, &text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(exit::IO, e),
    }
}

fn run_solve(args: SolveArgs) -> ExitCode {
    let a = match load_matrix(&args.matrix) {
        Ok(a) => a,
        Err(e) => return fail(exit::PARSE, e),
    };
    let mut config = SolverConfig {
        alpha1: args.alpha1,
        inner_k: args.inner_k,
        ..SolverConfig::default()
    };
    match (args.max_iter, args.time_budget) {
        (Some(n), _) => config.max_iter = n,
        (None, Some(secs)) => {
            if !(secs > 0.0 && secs.is_finite()) {
                return fail(exit::PARSE, "--time-budget must be a positive number of seconds");
            }
            config.time_budget = Some(Duration::from_secs_f64(secs));
            config.max_iter = usize::MAX;
        }
        (None, None) => {}
    }
    if let Err(e) = config.validate() {
        return fail(exit::PARSE, e);
    }

    let init = match args.init {
        InitArg::Identity => init_identity(&a),
        InitArg::Inverse => init_inverse_form(&a, &InverseInitConfig::default()),
    };
    let result = match init.and_then(|s| solve(args.algo.into(), &a, &s, &config)) {
        Ok(r) => r,
        Err(nearstable::Error::NotSquare { rows, cols }) => {
            return fail(exit::PARSE, format!("matrix must be square, got {rows}x{cols}"))
        }
        Err(e) => return fail(exit::SOLVER, e),
    };
    let x = result.state.assemble();
    let abscissa = match spectral_abscissa(&x) {
        Ok(v) => v,
        Err(e) => return fail(exit::SOLVER, e),
    };

    if let Some(path) = &args.trace {
        if let Err(e) = write_file(path, &result.trace.to_csv()) {
            return fail(exit::IO, e);
        }
    }
    if let Some(path) = &args.out {
        let json = report::SolveReport::new(&result, abscissa);
        let text = serde_json::to_string_pretty(&json).expect("result serializes");
        if let Err(e) = write_file(path, &text) {
            return fail(exit::IO, e);
        }
    }
    println!("final_error {:.10e}", result.final_error);
    println!("spectral_abscissa {:.10e}", abscissa);
    println!(
        "iterations {} termination {} initial_error {:.10e}",
        result.iterations, result.termination, result.initial_error
    );
    ExitCode::SUCCESS
}

fn run_check(args: CheckArgs) -> ExitCode {
    let x = match load_matrix(&args.matrix) {
        Ok(x) => x,
        Err(e) => return fail(exit::PARSE, e),
    };
    if x.nrows() != x.ncols() {
        return fail(exit::PARSE, format!("matrix must be square, got {}x{}", x.nrows(), x.ncols()));
    }
    let (axis_default, rank_default) = default_tolerances(&x);
    let axis_tol = args.axis_tol.unwrap_or(axis_default);
    let rank_tol = args.rank_tol.unwrap_or(rank_default);
    let report = match check_stability(&x, axis_tol, rank_tol) {
        Ok(r) => r,
        Err(e) => return fail(exit::SOLVER, e),
    };
    println!("spectral_abscissa {:.10e}", report.abscissa);
    println!("axis_tol {axis_tol:.3e} rank_tol {rank_tol:.3e}");
    for c in &report.clusters {
        let kind = match c.verdict {
            StabilityVerdict::Stable => "semisimple",
            StabilityVerdict::Unstable => "NOT semisimple",
            StabilityVerdict::Indeterminate => "semisimplicity indeterminate",
        };
        println!(
            "near-axis eigenvalue {:+.6e}{:+.6e}i algebraic {} geometric {} ({kind})",
            c.center.re, c.center.im, c.algebraic, c.geometric
        );
    }
    println!("verdict {}", report.verdict.as_str());
    match report.verdict {
        StabilityVerdict::Stable => ExitCode::SUCCESS,
        StabilityVerdict::Unstable => ExitCode::from(exit::UNSTABLE),
        StabilityVerdict::Indeterminate => ExitCode::from(exit::INDETERMINATE),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate(args) => run_generate(args),
        Command::Solve(args) => run_solve(args),
        Command::Bench(args) => bench::run(args),
        Command::Check(args) => run_check(args),
    }
}
