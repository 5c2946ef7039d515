use crate::error::Result;
use crate::matrix::{sym_eig, Matrix};
use crate::objective::{grad_d, grad_q, objective, report_error, DhState};
use crate::projections::{project_dh, project_psd};

use super::inner::inner_fgm_convex;
use super::{check_problem, finish, is_optimal, RunMonitor, SolveResult, SolverConfig, Termination};

/// `lambda_max(M^T M)` from a symmetric eigendecomposition.
fn gram_lambda_max(m: &Matrix) -> Result<f64> {
    Ok(sym_eig(&m.tr_mul(m))?.max_value().max(0.0))
}

/// Two-block coordinate descent: alternately minimize over `D` with `Q` fixed
/// and over `Q` with `D` fixed, each convex subproblem solved approximately
/// by the fast gradient method. A block update that would raise the
/// objective is discarded.
pub fn solve_bcd(a: &Matrix, init: &DhState, config: &SolverConfig) -> Result<SolveResult> {
    check_problem(a, init, config)?;
    let mut d = init.d.clone();
    let mut q = init.q.clone();
    let initial_error = report_error(a, &d, &q);
    let mut monitor = RunMonitor::new(config, initial_error);
    let mut f = objective(a, &d, &q);

    let mut k = 0;
    let termination = loop {
        if is_optimal(a, (2.0 * f).sqrt()) {
            break Termination::Optimal;
        }
        if let Some(t) = monitor.should_stop(k + 1) {
            break t;
        }
        let f_start = f;

        // Q fixed: L = lambda_max(Q Q^T)
        let l_d = gram_lambda_max(&q)?;
        let cand = inner_fgm_convex(
            |x| grad_d(a, x, &q),
            |x| Ok(project_dh(x)?.d),
            l_d,
            &d,
            config.inner_k,
            config.inner_rel_tol,
        )?;
        let f_cand = objective(a, &cand.x, &q);
        if f_cand <= f {
            d = cand.x;
            f = f_cand;
        }

        // D fixed: L = lambda_max(D^T D)
        let l_q = gram_lambda_max(&d)?;
        let cand = inner_fgm_convex(
            |x| grad_q(a, &d, x),
            project_psd,
            l_q,
            &q,
            config.inner_k,
            config.inner_rel_tol,
        )?;
        let f_cand = objective(a, &d, &cand.x);
        if f_cand <= f {
            q = cand.x;
            f = f_cand;
        }

        k += 1;
        monitor.record(k, || (2.0 * f).sqrt(), false);
        if f >= f_start {
            break Termination::Stalled;
        }
    };
    finish(a, &d, &q, initial_error, k, monitor, termination)
}
