use crate::error::{Error, Result};
use crate::matrix::{ensure_finite, ensure_square, symmetric_part, sym_eig, Matrix};
use crate::objective::DhState;
use crate::projections::{project_dh, project_psd, project_psd_shifted};

/// `Q = I` with the optimal `(J, R)` for it: `J = skew(A)`,
/// `R = P_psd(-(A + A^T)/2)`.
pub fn init_identity(a: &Matrix) -> Result<DhState> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    let j = (a - a.transpose()) * 0.5;
    let r = project_psd(&(symmetric_part(a) * -1.0))?;
    DhState::new(j, r, Matrix::identity(n, n))
}

/// Alternation settings for [`init_inverse_form`].
#[derive(Debug, Clone, PartialEq)]
pub struct InverseInitConfig {
    pub max_outer: usize,
    /// Projected gradient steps on `P` per outer iteration.
    pub inner_steps: usize,
    /// Stop once the residual improves by less than this, relatively.
    pub rel_tol: f64,
    /// Largest accepted condition number of `P`.
    pub max_condition: f64,
}

impl Default for InverseInitConfig {
    fn default() -> Self {
        Self {
            max_outer: 500,
            inner_steps: 5,
            rel_tol: 1e-10,
            max_condition: 1e12,
        }
    }
}

/// Approximately solves `min ||A P - (J - R)||_F` over `J` skew, `R` PSD and
/// `P >= I` by alternating an exact projection for `(J, R)` with projected
/// gradient steps on `P`, then returns `(J, R, P^{-1})`.
pub fn init_inverse_form(a: &Matrix, config: &InverseInitConfig) -> Result<DhState> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    if config.max_outer == 0 || config.inner_steps == 0 {
        return Err(Error::InvalidArgument("inverse init needs at least one step".into()));
    }
    let lipschitz = sym_eig(&a.tr_mul(a))?.max_value();
    let step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 0.0 };

    let mut p = Matrix::identity(n, n);
    let mut proj = project_dh(&(a * &p))?;
    let mut residual = (a * &p - &proj.d).norm();
    for _ in 0..config.max_outer {
        if residual == 0.0 || step == 0.0 {
            break;
        }
        for _ in 0..config.inner_steps {
            let g = a.tr_mul(&(a * &p - &proj.d));
            p = project_psd_shifted(&(&p - g * step), 1.0)?;
        }
        proj = project_dh(&(a * &p))?;
        let next = (a * &p - &proj.d).norm();
        let improved = residual - next;
        residual = next;
        if improved <= config.rel_tol * residual.max(1.0) {
            break;
        }
    }

    let eig = sym_eig(&p)?;
    let (lo, hi) = (eig.min_value(), eig.max_value());
    let condition = hi / lo;
    if !(lo > 0.0) || !(condition <= config.max_condition) {
        return Err(Error::IllConditioned { condition });
    }
    let q = eig.reassemble_with(|v| 1.0 / v);
    DhState::new(proj.j, proj.r, q)
}
