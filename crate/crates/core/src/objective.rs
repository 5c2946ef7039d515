//! The smooth objective `f(D, Q) = 1/2 ||A - D Q||_F^2`, its partial gradients,
//! their Lipschitz constants and the `D`/`Q` scale balancing.
//!
//! Only user-facing error figures drop the 1/2 and the square; see
//! [`report_error`].

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{ensure_same_shape, ensure_square, power_lambda_max_gram, sym_eig, Matrix};
use crate::projections::project_psd;

/// A feasible point `(J, R, Q)` with `D = J - R` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DhState {
    pub j: Matrix,
    pub r: Matrix,
    pub q: Matrix,
    pub d: Matrix,
}

impl DhState {
    pub fn new(j: Matrix, r: Matrix, q: Matrix) -> Result<Self> {
        let n = ensure_square(&j)?;
        ensure_same_shape(&j, &r, "J and R")?;
        ensure_same_shape(&j, &q, "J and Q")?;
        debug_assert_eq!(n, q.nrows());
        let d = &j - &r;
        Ok(Self { j, r, q, d })
    }

    /// Splits `D` into its skew and (negated) symmetric parts.
    pub fn from_dq(d: Matrix, q: Matrix) -> Result<Self> {
        ensure_square(&d)?;
        ensure_same_shape(&d, &q, "D and Q")?;
        let j = (&d - d.transpose()) * 0.5;
        let r = (&d + d.transpose()) * -0.5;
        Ok(Self { j, r, q, d })
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// `(J - R) Q`.
    pub fn assemble(&self) -> Matrix {
        &self.d * &self.q
    }

    /// Checks skewness of `J`, semidefiniteness of `R` and `Q` up to relative
    /// tolerance `tol`, and the cached `D`.
    pub fn check_feasible(&self, tol: f64) -> Result<()> {
        let skew_err = (&self.j + self.j.transpose()).norm();
        if skew_err > tol * self.j.norm().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "J is not skew-symmetric (||J + J^T|| = {skew_err:e})"
            )));
        }
        for (name, m) in [("R", &self.r), ("Q", &self.q)] {
            let asym = (m - m.transpose()).norm();
            if asym > tol * m.norm().max(1.0) {
                return Err(Error::InvalidArgument(format!("{name} is not symmetric")));
            }
            let eig = sym_eig(m)?;
            let scale = eig.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            if eig.min_value() < -tol * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidArgument(format!(
                    "{name} is not PSD (lambda_min = {:e})",
                    eig.min_value()
                )));
            }
        }
        let drift = (&self.d - (&self.j - &self.r)).amax();
        if drift > 1e-12 * self.d.amax().max(1.0) {
            return Err(Error::InvalidArgument("cached D differs from J - R".into()));
        }
        Ok(())
    }
}

/// `1/2 ||A - D Q||_F^2`. Panics on non-conformal shapes.
pub fn objective(a: &Matrix, d: &Matrix, q: &Matrix) -> f64 {
    0.5 * (a - d * q).norm_squared()
}

/// `||A - D Q||_F`, the distance reported to users.
pub fn report_error(a: &Matrix, d: &Matrix, q: &Matrix) -> f64 {
    (a - d * q).norm()
}

/// `grad_D f = -(A - D Q) Q^T`.
pub fn grad_d(a: &Matrix, d: &Matrix, q: &Matrix) -> Matrix {
    -((a - d * q) * q.transpose())
}

/// `grad_Q f = -D^T (A - D Q)`.
pub fn grad_q(a: &Matrix, d: &Matrix, q: &Matrix) -> Matrix {
    -d.tr_mul(&(a - d * q))
}

/// Warm-started power-method tracker for `lambda_max(Q Q^T)` and
/// `lambda_max(D^T D)`. One tracker belongs to one solver run.
#[derive(Debug, Clone)]
pub struct LipschitzTracker {
    warm_d: Option<DVector<f64>>,
    warm_q: Option<DVector<f64>>,
    pub cold_steps: usize,
    pub warm_steps: usize,
}

impl Default for LipschitzTracker {
    fn default() -> Self {
        Self::new(30, 5)
    }
}

impl LipschitzTracker {
    pub fn new(cold_steps: usize, warm_steps: usize) -> Self {
        Self {
            warm_d: None,
            warm_q: None,
            cold_steps: cold_steps.max(1),
            warm_steps: warm_steps.max(1),
        }
    }

    pub fn reset(&mut self) {
        self.warm_d = None;
        self.warm_q = None;
    }

    fn steps(&self, warm: &Option<DVector<f64>>) -> usize {
        if warm.is_some() {
            self.warm_steps
        } else {
            self.cold_steps
        }
    }
}

/// Returns `(L_D, L_Q) = (lambda_max(Q Q^T), lambda_max(D^T D))`, both
/// power-method estimates (never above the true values).
pub fn lipschitz_pair(d: &Matrix, q: &Matrix, tracker: &mut LipschitzTracker) -> (f64, f64) {
    // Q Q^T = (Q^T)^T Q^T
    let steps = tracker.steps(&tracker.warm_d);
    let (l_d, vd) = power_lambda_max_gram(&q.transpose(), tracker.warm_d.as_ref(), steps);
    tracker.warm_d = Some(vd);

    let steps = tracker.steps(&tracker.warm_q);
    let (l_q, vq) = power_lambda_max_gram(d, tracker.warm_q.as_ref(), steps);
    tracker.warm_q = Some(vq);
    (l_d, l_q)
}

/// Scale `s` such that `s D` and `Q / s` share the same Lipschitz constant,
/// or `None` when either constant is numerically zero.
pub fn balance_factor(l_d: f64, l_q: f64) -> Option<f64> {
    if !(l_d > f64::MIN_POSITIVE && l_q > f64::MIN_POSITIVE) || !(l_d * l_q).is_finite() {
        return None;
    }
    let s = (l_d / l_q).sqrt().sqrt();
    (s.is_finite() && s > 0.0).then_some(s)
}

/// Rebalanced pair with the factor that was applied.
#[derive(Debug, Clone)]
pub struct Rebalanced {
    pub d: Matrix,
    pub q: Matrix,
    pub factor: f64,
}

/// Rescales `D <- s D`, `Q <- Q / s` so that `lambda_max(Q Q^T) = lambda_max(D^T D)`,
/// using exact spectral norms. Returns `None` (a no-op) when either factor is
/// numerically zero.
pub fn rebalance(d: &Matrix, q: &Matrix) -> Option<Rebalanced> {
    let sigma = |m: &Matrix| m.singular_values().iter().fold(0.0_f64, |a, &b| a.max(b));
    let l_d = sigma(q).powi(2);
    let l_q = sigma(d).powi(2);
    let factor = balance_factor(l_d, l_q)?;
    Some(Rebalanced {
        d: d * factor,
        q: q / factor,
        factor,
    })
}

/// Norm of the projected-gradient step `(D, Q) - (P_D(D - tau g_D), P_psd(Q - tau g_Q))`.
pub fn projected_gradient_residual(a: &Matrix, d: &Matrix, q: &Matrix, tau: f64) -> Result<f64> {
    let gd = grad_d(a, d, q);
    let gq = grad_q(a, d, q);
    let dn = crate::projections::project_dh(&(d - gd * tau))?.d;
    let qn = project_psd(&(q - gq * tau))?;
    Ok(((d - dn).norm_squared() + (q - qn).norm_squared()).sqrt())
}
