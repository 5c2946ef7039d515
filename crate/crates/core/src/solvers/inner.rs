use crate::error::Result;
use crate::matrix::Matrix;

use super::fgm::{momentum, next_alpha};

const ALPHA1: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct InnerOutcome {
    pub x: Matrix,
    pub iterations: usize,
}

/// Nesterov's fast gradient method for a smooth convex `f` over a closed
/// convex set, given the gradient, the projection and a Lipschitz constant
/// `lipschitz` of the gradient.
///
/// Runs at most `max_iter` iterations and stops early once the distance
/// between consecutive iterates drops to `rel_tol` times the length of the
/// first step. A zero first step returns `x0` immediately.
pub fn inner_fgm_convex<G, P>(
    mut grad: G,
    mut project: P,
    lipschitz: f64,
    x0: &Matrix,
    max_iter: usize,
    rel_tol: f64,
) -> Result<InnerOutcome>
where
    G: FnMut(&Matrix) -> Matrix,
    P: FnMut(&Matrix) -> Result<Matrix>,
{
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Ok(InnerOutcome { x: x0.clone(), iterations: 0 });
    }
    let step = 1.0 / lipschitz;
    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut alpha = ALPHA1;
    let mut first_step = None;

    for k in 1..=max_iter {
        let prev = x;
        x = project(&(&y - grad(&y) * step))?;
        let moved = (&x - &prev).norm();
        let baseline = *first_step.get_or_insert(moved);
        if moved <= rel_tol * baseline {
            return Ok(InnerOutcome { x, iterations: k });
        }
        let alpha_next = next_alpha(alpha);
        let beta = momentum(alpha, alpha_next);
        y = &x + (&x - &prev) * beta;
        alpha = alpha_next;
    }
    Ok(InnerOutcome { x, iterations: max_iter })
}
