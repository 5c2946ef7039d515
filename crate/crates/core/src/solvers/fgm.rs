use crate::error::Result;
use crate::matrix::Matrix;
use crate::objective::{objective, report_error, DhState};

use super::grad::{backtracking_step, balance};
use super::{check_problem, finish, is_optimal, RunMonitor, SolveResult, SolverConfig, Termination};

/// Positive root of `a^2 = (1 - a) * alpha^2`.
pub fn next_alpha(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    0.5 * (a2 * (a2 + 4.0)).sqrt() - 0.5 * a2
}

/// Extrapolation weight `alpha (1 - alpha) / (alpha^2 + alpha_next)`.
pub fn momentum(alpha: f64, alpha_next: f64) -> f64 {
    alpha * (1.0 - alpha) / (alpha * alpha + alpha_next)
}

/// Fast projected gradient with extrapolation and restarts.
///
/// The extrapolated pair `(Y, Z)` is stepped along
/// `(A - Y Q) Q^T` and `D^T (A - D Z)`, both evaluated before the update.
/// A step is accepted only if it lowers the objective below its value at the
/// current `(D, Q)`; otherwise the scheme restarts from `(D, Q)`, and a failure
/// right after a restart ends the run.
pub fn solve_fgm(a: &Matrix, init: &DhState, config: &SolverConfig) -> Result<SolveResult> {
    check_problem(a, init, config)?;
    let mut d = init.d.clone();
    let mut q = init.q.clone();
    let initial_error = report_error(a, &d, &q);
    let mut monitor = RunMonitor::new(config, initial_error);
    let mut tracker = config.tracker();
    let mut f = objective(a, &d, &q);
    let mut lipschitz = balance(&mut d, &mut q, None, &mut tracker);

    let mut y = d.clone();
    let mut z = q.clone();
    let mut alpha = config.alpha1;
    // true while (Y, Z) == (D, Q), i.e. the next step is a plain gradient step
    let mut plain = true;

    let mut k = 0;
    let termination = loop {
        if is_optimal(a, (2.0 * f).sqrt()) {
            break Termination::Optimal;
        }
        if let Some(t) = monitor.should_stop(k + 1) {
            break t;
        }
        let dir_y = (a - &y * &q) * q.transpose();
        let dir_z = d.tr_mul(&(a - &d * &z));
        let step = backtracking_step(a, &y, &dir_y, &z, &dir_z, f, lipschitz, config)?;
        k += 1;

        let restarted = match step {
            None if plain => {
                k -= 1;
                break Termination::Stalled;
            }
            None => {
                y.copy_from(&d);
                z.copy_from(&q);
                alpha = config.alpha1;
                plain = true;
                true
            }
            Some(trial) => {
                let alpha_next = next_alpha(alpha);
                let beta = momentum(alpha, alpha_next);
                y = &trial.d + (&trial.d - &d) * beta;
                z = &trial.q + (&trial.q - &q) * beta;
                d = trial.d;
                q = trial.q;
                f = trial.f;
                alpha = alpha_next;
                plain = false;
                match config.restart_period {
                    Some(p) if k % p == 0 => {
                        y.copy_from(&d);
                        z.copy_from(&q);
                        alpha = config.alpha1;
                        plain = true;
                        true
                    }
                    _ => false,
                }
            }
        };
        lipschitz = balance(&mut d, &mut q, Some((&mut y, &mut z)), &mut tracker);
        monitor.record(k, || (2.0 * f).sqrt(), restarted);
    };
    finish(a, &d, &q, initial_error, k, monitor, termination)
}
