use crate::error::Result;
use crate::matrix::Matrix;
use crate::objective::{balance_factor, lipschitz_pair, objective, report_error, DhState, LipschitzTracker};
use crate::projections::{project_dh, project_psd};

use super::{check_problem, finish, is_optimal, RunMonitor, SolveResult, SolverConfig, Termination};

/// An accepted projected step.
pub(crate) struct Trial {
    pub d: Matrix,
    pub q: Matrix,
    pub f: f64,
}

/// Projected step from `(from_d, from_q)` along `(dir_d, dir_q)` with steplength
/// `1 / lipschitz`, divided by `backtrack_factor` until the objective drops
/// strictly below `f_ref`. `None` when no tried steplength decreases it.
#[allow(clippy::too_many_arguments)]
pub(crate) fn backtracking_step(
    a: &Matrix,
    from_d: &Matrix,
    dir_d: &Matrix,
    from_q: &Matrix,
    dir_q: &Matrix,
    f_ref: f64,
    lipschitz: f64,
    config: &SolverConfig,
) -> Result<Option<Trial>> {
    let mut step = if lipschitz > 0.0 && lipschitz.is_finite() {
        1.0 / lipschitz
    } else {
        1.0
    };
    for _ in 0..=config.max_backtracks {
        let d = project_dh(&(from_d + dir_d * step))?.d;
        let q = project_psd(&(from_q + dir_q * step))?;
        let f = objective(a, &d, &q);
        if f < f_ref {
            return Ok(Some(Trial { d, q, f }));
        }
        step /= config.backtrack_factor;
    }
    Ok(None)
}

/// Rescales `(D, Q)` (and the companion pair, if any, by the same factor) so
/// both partial Lipschitz estimates agree; returns the common estimate.
pub(crate) fn balance(
    d: &mut Matrix,
    q: &mut Matrix,
    companion: Option<(&mut Matrix, &mut Matrix)>,
    tracker: &mut LipschitzTracker,
) -> f64 {
    let (l_d, l_q) = lipschitz_pair(d, q, tracker);
    match balance_factor(l_d, l_q) {
        Some(s) => {
            *d *= s;
            *q /= s;
            if let Some((y, z)) = companion {
                *y *= s;
                *z /= s;
            }
            (l_d * l_q).sqrt()
        }
        None => l_d.max(l_q),
    }
}

/// Projected gradient descent with backtracking and `D`/`Q` balancing.
/// `D` and `Q` are updated simultaneously from the same point.
pub fn solve_grad(a: &Matrix, init: &DhState, config: &SolverConfig) -> Result<SolveResult> {
    check_problem(a, init, config)?;
    let mut d = init.d.clone();
    let mut q = init.q.clone();
    let initial_error = report_error(a, &d, &q);
    let mut monitor = RunMonitor::new(config, initial_error);
    let mut tracker = config.tracker();
    let mut f = objective(a, &d, &q);
    let mut lipschitz = balance(&mut d, &mut q, None, &mut tracker);

    let mut k = 0;
    let termination = loop {
        if is_optimal(a, (2.0 * f).sqrt()) {
            break Termination::Optimal;
        }
        if let Some(t) = monitor.should_stop(k + 1) {
            break t;
        }
        let residual = a - &d * &q;
        let dir_d = &residual * q.transpose();
        let dir_q = d.tr_mul(&residual);
        let Some(trial) = backtracking_step(a, &d, &dir_d, &q, &dir_q, f, lipschitz, config)? else {
            break Termination::Stalled;
        };
        k += 1;
        d = trial.d;
        q = trial.q;
        f = trial.f;
        lipschitz = balance(&mut d, &mut q, None, &mut tracker);
        monitor.record(k, || (2.0 * f).sqrt(), false);
    };
    finish(a, &d, &q, initial_error, k, monitor, termination)
}
