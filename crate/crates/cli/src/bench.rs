//! `bench`: runs every (type, size, algorithm) cell of a plan from the
//! identity initialization and writes per-cell traces plus a summary table
//! with one row per matrix type and one column per algorithm.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{ArgGroup, Args};
use rayon::prelude::*;
use nearstable::{generate, init_identity, report_error, solve, Algorithm, MatrixFamily, SolverConfig, TestMatrixSpec};

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("budget").required(true).args(["budgets", "iters"])))]
pub struct BenchArgs {
    /// Comma-separated matrix types, e.g. `1,2,3,4`
    #[arg(long)]
    types: String,
    /// Comma-separated sizes, e.g. `10,20,50,100`
    #[arg(long)]
    sizes: String,
    /// Comma-separated algorithms from bcd, grad, fgm
    #[arg(long)]
    algos: String,
    /// Seconds per cell: one value, or one per size
    #[arg(long)]
    budgets: Option<String>,
    /// Iterations per cell: one value, or one per size
    #[arg(long)]
    iters: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Seed for the random families (types 3 and 4)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Seconds(f64),
    Iterations(usize),
}

impl Budget {
    fn describe(self) -> String {
        match self {
            Budget::Seconds(s) => format!("{s} s"),
            Budget::Iterations(n) => format!("{n} iterations"),
        }
    }

    fn config(self) -> SolverConfig {
        match self {
            Budget::Seconds(s) => SolverConfig {
                max_iter: usize::MAX,
                time_budget: Some(Duration::from_secs_f64(s)),
                ..SolverConfig::default()
            },
            Budget::Iterations(n) => SolverConfig { max_iter: n, ..SolverConfig::default() },
        }
    }
}

/// A fully expanded benchmark plan.
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub cells: Vec<(TestMatrixSpec, Algorithm, Budget)>,
    pub out_dir: PathBuf,
    pub deterministic: bool,
}

fn parse_list<T: FromStr>(flag: &str, raw: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("--{flag}: `{s}`: {e}")))
        .collect()
}

impl BenchPlan {
    fn from_args(args: &BenchArgs) -> Result<Self, String> {
        let types: Vec<MatrixFamily> = parse_list("types", &args.types)?;
        let sizes: Vec<usize> = parse_list("sizes", &args.sizes)?;
        let algos: Vec<Algorithm> = parse_list("algos", &args.algos)?;
        let (budgets, deterministic): (Vec<Budget>, bool) = match (&args.budgets, &args.iters) {
            (Some(b), None) => {
                let secs: Vec<f64> = parse_list("budgets", b)?;
                if secs.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
                    return Err("--budgets must be positive".into());
                }
                (secs.into_iter().map(Budget::Seconds).collect(), false)
            }
            (None, Some(i)) => {
                let iters: Vec<usize> = parse_list("iters", i)?;
                (iters.into_iter().map(Budget::Iterations).collect(), true)
            }
            _ => return Err("exactly one of --budgets and --iters is required".into()),
        };
        if !sizes.is_empty() && budgets.len() != 1 && budgets.len() != sizes.len() {
            return Err(format!(
                "expected 1 or {} budget values, got {}",
                sizes.len(),
                budgets.len()
            ));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
            return Err(format!("--sizes: size {n} must be >= 2"));
        }
        if sizes.iter().any(|&n| n <= 3) && types.contains(&MatrixFamily::Type2Grcar) {
            return Err("--sizes: Grcar matrices need n > 3".into());
        }

        let mut cells = Vec::new();
        for (si, &size) in sizes.iter().enumerate() {
            let budget = budgets[if budgets.len() == 1 { 0 } else { si }];
            for &family in &types {
                let spec = TestMatrixSpec::new(family, size).with_seed(args.seed);
                for &algo in &algos {
                    cells.push((spec.clone(), algo, budget));
                }
            }
        }
        Ok(Self { cells, out_dir: args.out.clone(), deterministic })
    }
}

#[derive(Debug, Clone)]
struct CellOutcome {
    spec: TestMatrixSpec,
    algo: Algorithm,
    budget: Budget,
    initial_error: Option<f64>,
    result: Result<(f64, usize, String), String>,
}

fn trace_path(dir: &Path, spec: &TestMatrixSpec, algo: Algorithm) -> PathBuf {
    dir.join(format!("trace_{}_n{}_{}.csv", spec.family, spec.size, algo))
}

fn run_cell(dir: &Path, spec: &TestMatrixSpec, algo: Algorithm, budget: Budget) -> CellOutcome {
    let mut outcome = CellOutcome {
        spec: spec.clone(),
        algo,
        budget,
        initial_error: None,
        result: Err(String::new()),
    };
    let prepared = generate(spec).and_then(|a| init_identity(&a).map(|s| (a, s)));
    let (a, init) = match prepared {
        Ok(p) => p,
        Err(e) => {
            outcome.result = Err(e.to_string());
            return outcome;
        }
    };
    outcome.initial_error = Some(report_error(&a, &init.d, &init.q));
    outcome.result = solve(algo, &a, &init, &budget.config())
        .map_err(|e| e.to_string())
        .and_then(|r| {
            let path = trace_path(dir, spec, algo);
            std::fs::write(&path, r.trace.to_csv()).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok((r.final_error, r.iterations, r.termination.to_string()))
        });
    outcome
}

fn summary_csv(outcomes: &[CellOutcome], deterministic: bool) -> String {
    let mut out = String::from(
        "type,size,seed,algo,budget,initial_error,final_error,iterations,termination,deterministic\n",
    );
    for o in outcomes {
        let budget = match o.budget {
            Budget::Seconds(s) => format!("{s}s"),
            Budget::Iterations(n) => format!("{n}it"),
        };
        let initial = o.initial_error.map_or(String::new(), |e| format!("{e:.17e}"));
        let (fin, iters, term) = match &o.result {
            Ok((e, k, t)) => (format!("{e:.17e}"), k.to_string(), t.clone()),
            Err(msg) => (String::new(), String::new(), format!("failed: {}", msg.replace(',', ";"))),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{budget},{initial},{fin},{iters},{term},{deterministic}",
            o.spec.family.number(),
            o.spec.size,
            o.spec.seed,
            o.algo
        );
    }
    out
}

fn summary_markdown(plan: &BenchPlan, outcomes: &[CellOutcome]) -> String {
    let mut out = String::from("# Final error ||A - X||_F (iterations in brackets)\n\n");
    if plan.deterministic {
        out.push_str("Budget mode: iterations (deterministic).\n");
    } else {
        out.push_str("Budget mode: wall clock (non-deterministic, hardware dependent).\n");
    }

    let mut sizes: Vec<usize> = outcomes.iter().map(|o| o.spec.size).collect();
    sizes.dedup();
    for size in sizes {
        let cells: Vec<&CellOutcome> = outcomes.iter().filter(|o| o.spec.size == size).collect();
        let mut algos: Vec<Algorithm> = Vec::new();
        let mut families: Vec<MatrixFamily> = Vec::new();
        for c in &cells {
            if !algos.contains(&c.algo) {
                algos.push(c.algo);
            }
            if !families.contains(&c.spec.family) {
                families.push(c.spec.family);
            }
        }
        let _ = writeln!(out, "\n## n = {size} (budget: {})\n", cells[0].budget.describe());
        let _ = write!(out, "| type | initial error |");
        for a in &algos {
            let _ = write!(out, " {a} |");
        }
        out.push('\n');
        out.push_str(&"|---".repeat(2 + algos.len()));
        out.push_str("|\n");
        for fam in &families {
            let row: Vec<&&CellOutcome> = cells.iter().filter(|c| c.spec.family == *fam).collect();
            let initial = row
                .iter()
                .find_map(|c| c.initial_error)
                .map_or("-".to_string(), |e| format!("{e:.2}"));
            let _ = write!(out, "| {} | {initial} |", fam.number());
            for a in &algos {
                let cell = match row.iter().find(|c| c.algo == *a).map(|c| &c.result) {
                    Some(Ok((e, k, _))) => format!("{e:.2} ({k})"),
                    Some(Err(_)) => "failed".to_string(),
                    None => "-".to_string(),
                };
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
    }
    out
}

pub fn run(args: BenchArgs) -> ExitCode {
    let plan = match BenchPlan::from_args(&args) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&plan.out_dir) {
        eprintln!("error: {}: {e}", plan.out_dir.display());
        return ExitCode::from(1);
    }
    let outcomes: Vec<CellOutcome> = plan
        .cells
        .par_iter()
        .map(|(spec, algo, budget)| run_cell(&plan.out_dir, spec, *algo, *budget))
        .collect();

    for o in &outcomes {
        match &o.result {
            Ok((e, k, t)) => eprintln!("{} n={} {}: {e:.4} ({k} iterations, {t})", o.spec.family, o.spec.size, o.algo),
            Err(msg) => eprintln!("{} n={} {}: failed: {msg}", o.spec.family, o.spec.size, o.algo),
        }
    }

    let files = [
        ("summary.csv", summary_csv(&outcomes, plan.deterministic)),
        ("summary.md", summary_markdown(&plan, &outcomes)),
    ];
    for (name, text) in files {
        let path = plan.out_dir.join(name);
        if let Err(e) = std::fs::write(&path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
