//! First-order solvers for `min ||A - D Q||_F` over `D = J - R` (J skew,
//! R PSD) and `Q` PSD, plus their initializations.

mod bcd;
mod fgm;
mod grad;
mod init;
mod inner;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use bcd::solve_bcd;
pub use fgm::{next_alpha, momentum, solve_fgm};
pub use grad::solve_grad;
pub use init::{init_identity, init_inverse_form, InverseInitConfig};
pub use inner::{inner_fgm_convex, InnerOutcome};

use crate::error::{Error, Result};
use crate::matrix::{sym_eig, Matrix};
use crate::objective::{report_error, DhState};
use crate::projections::project_psd;

/// Tuning knobs shared by the three solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Outer iterations. Always enforced, also when a time budget is set.
    pub max_iter: usize,
    /// Wall-clock budget, checked once per outer iteration.
    pub time_budget: Option<Duration>,
    /// Step divisor used by the backtracking line search (> 1).
    pub backtrack_factor: f64,
    pub max_backtracks: usize,
    /// First extrapolation parameter of the fast gradient scheme, in (0, 1).
    pub alpha1: f64,
    /// Inner fast-gradient iterations per block coordinate subproblem.
    pub inner_k: usize,
    /// Inner early stop: consecutive-iterate distance relative to the first step.
    pub inner_rel_tol: f64,
    /// Forced fast-gradient restart every this many iterations.
    pub restart_period: Option<usize>,
    /// Record every `trace_stride`-th iteration (the last one is always kept).
    pub trace_stride: usize,
    pub power_cold_steps: usize,
    pub power_warm_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            time_budget: None,
            backtrack_factor: 2.0,
            max_backtracks: 20,
            alpha1: 0.5,
            inner_k: 1000,
            inner_rel_tol: 0.01,
            restart_period: None,
            trace_stride: 1,
            power_cold_steps: 30,
            power_warm_steps: 5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if !(self.backtrack_factor > 1.0 && self.backtrack_factor.is_finite()) {
            return bad("backtrack_factor must be > 1");
        }
        if !(self.alpha1 > 0.0 && self.alpha1 < 1.0) {
            return bad("alpha1 must lie strictly inside (0, 1)");
        }
        if self.inner_k == 0 {
            return bad("inner_k must be positive");
        }
        if !(self.inner_rel_tol >= 0.0 && self.inner_rel_tol.is_finite()) {
            return bad("inner_rel_tol must be >= 0");
        }
        if self.trace_stride == 0 {
            return bad("trace_stride must be positive");
        }
        if self.restart_period == Some(0) {
            return bad("restart_period must be positive");
        }
        if self.power_cold_steps == 0 || self.power_warm_steps == 0 {
            return bad("power-method step counts must be positive");
        }
        if let Some(t) = self.time_budget {
            if t.is_zero() {
                return bad("time_budget must be positive");
            }
        }
        Ok(())
    }

    pub(crate) fn tracker(&self) -> crate::objective::LipschitzTracker {
        crate::objective::LipschitzTracker::new(self.power_cold_steps, self.power_warm_steps)
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Wall-clock budget exhausted.
    Budget,
    MaxIter,
    /// No steplength decreased the objective.
    Stalled,
    /// Residual is zero to working precision.
    Optimal,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Budget => "budget",
            Termination::MaxIter => "max_iter",
            Termination::Stalled => "stalled",
            Termination::Optimal => "optimal",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub elapsed: f64,
    pub error: f64,
    pub restarted: bool,
}

/// Per-iteration error history of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// Appends a record. Records with a non-increasing iteration index are
    /// dropped; elapsed time is clamped to be non-decreasing.
    pub fn push(&mut self, mut rec: TraceRecord) {
        if let Some(prev) = self.records.last() {
            if rec.iteration <= prev.iteration {
                return;
            }
            rec.elapsed = rec.elapsed.max(prev.elapsed);
        }
        self.records.push(rec);
    }

    pub fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.error)
    }

    /// CSV with header `iter,time_s,error,restarted`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,time_s,error,restarted\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{:.6},{:.17e},{}\n",
                r.iteration,
                r.elapsed,
                r.error,
                u8::from(r.restarted)
            ));
        }
        out
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub state: DhState,
    pub initial_error: f64,
    /// `||A - (J - R) Q||_F` of `state`.
    pub final_error: f64,
    pub iterations: usize,
    pub trace: ConvergenceTrace,
    pub termination: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Bcd,
    Grad,
    Fgm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Bcd, Algorithm::Grad, Algorithm::Fgm];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Bcd => "bcd",
            Algorithm::Grad => "grad",
            Algorithm::Fgm => "fgm",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bcd" => Ok(Algorithm::Bcd),
            "grad" => Ok(Algorithm::Grad),
            "fgm" => Ok(Algorithm::Fgm),
            other => Err(Error::InvalidArgument(format!("unknown algorithm `{other}`"))),
        }
    }
}

pub fn solve(algo: Algorithm, a: &Matrix, init: &DhState, config: &SolverConfig) -> Result<SolveResult> {
    match algo {
        Algorithm::Bcd => solve_bcd(a, init, config),
        Algorithm::Grad => solve_grad(a, init, config),
        Algorithm::Fgm => solve_fgm(a, init, config),
    }
}

/// Splits `D` into `J = (D - D^T)/2` and `R = -(D + D^T)/2`. Slightly
/// indefinite `R` (relative to its norm, within 1e-8) is projected back onto
/// the PSD cone; anything worse is rejected.
pub fn finalize(d: &Matrix) -> Result<(Matrix, Matrix)> {
    let j = (d - d.transpose()) * 0.5;
    let r = (d + d.transpose()) * -0.5;
    let eig = sym_eig(&r)?;
    let lmin = eig.min_value();
    if lmin >= 0.0 {
        return Ok((j, r));
    }
    let scale = eig.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if lmin < -1e-8 * scale {
        return Err(Error::InvalidArgument(format!(
            "D is not in the dissipative set (lambda_min(R) = {lmin:e})"
        )));
    }
    Ok((j, project_psd(&r)?))
}

/// Shared bookkeeping for a run: clock, budget, trace stride.
pub(crate) struct RunMonitor<'a> {
    config: &'a SolverConfig,
    start: Instant,
    pub trace: ConvergenceTrace,
}

impl<'a> RunMonitor<'a> {
    pub fn new(config: &'a SolverConfig, initial_error: f64) -> Self {
        let mut trace = ConvergenceTrace::default();
        trace.records.push(TraceRecord {
            iteration: 0,
            elapsed: 0.0,
            error: initial_error,
            restarted: false,
        });
        Self {
            config,
            start: Instant::now(),
            trace,
        }
    }

    /// Checked at the top of every outer iteration `k` (1-based).
    pub fn should_stop(&self, k: usize) -> Option<Termination> {
        if k > self.config.max_iter {
            return Some(Termination::MaxIter);
        }
        match self.config.time_budget {
            Some(budget) if self.start.elapsed() >= budget => Some(Termination::Budget),
            _ => None,
        }
    }

    pub fn record(&mut self, k: usize, error: impl FnOnce() -> f64, restarted: bool) {
        if k.is_multiple_of(self.config.trace_stride) || restarted {
            self.push(k, error(), restarted);
        }
    }

    /// Makes sure iteration `k` is in the trace.
    pub fn close(&mut self, k: usize, error: f64) {
        if self.trace.last().is_none_or(|r| r.iteration < k) {
            self.push(k, error, false);
        }
    }

    fn push(&mut self, k: usize, error: f64, restarted: bool) {
        self.trace.push(TraceRecord {
            iteration: k,
            elapsed: self.start.elapsed().as_secs_f64(),
            error,
            restarted,
        });
    }
}

/// Residual small enough to count as an exact factorization.
pub(crate) fn is_optimal(a: &Matrix, error: f64) -> bool {
    error <= 1e-14 * a.norm().max(1.0)
}

pub(crate) fn check_problem(a: &Matrix, init: &DhState, config: &SolverConfig) -> Result<()> {
    config.validate()?;
    crate::matrix::ensure_square(a)?;
    crate::matrix::ensure_finite(a)?;
    if init.dim() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "initial state is {}x{}, A is {}x{}",
            init.dim(),
            init.dim(),
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn finish(
    a: &Matrix,
    d: &Matrix,
    q: &Matrix,
    initial_error: f64,
    iterations: usize,
    mut monitor: RunMonitor<'_>,
    termination: Termination,
) -> Result<SolveResult> {
    monitor.close(iterations, report_error(a, d, q));
    let (j, r) = finalize(d)?;
    let state = DhState::new(j, r, crate::matrix::symmetric_part(q))?;
    let final_error = report_error(a, &state.d, &state.q);
    Ok(SolveResult {
        state,
        initial_error,
        final_error,
        iterations,
        trace: monitor.trace,
        termination,
    })
}
