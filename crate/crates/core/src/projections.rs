//! Frobenius-norm projections onto the skew-symmetric subspace, the PSD cone,
//! the dissipative set `{J - R : J = -J^T, R >= 0}` and the shifted cone
//! `{P >= floor * I}`.

use crate::error::{Error, Result};
use crate::matrix::{ensure_square, sym_eig, Matrix};

/// `(Z - Z^T) / 2`.
pub fn project_skew(z: &Matrix) -> Result<Matrix> {
    ensure_square(z)?;
    Ok((z - z.transpose()) * 0.5)
}

/// Clamps the eigenvalues of the symmetric part of `z` at zero.
pub fn project_psd(z: &Matrix) -> Result<Matrix> {
    ensure_square(z)?;
    let eig = sym_eig(z)?;
    if eig.min_value() >= 0.0 {
        return Ok(crate::matrix::symmetric_part(z));
    }
    Ok(eig.reassemble_with(|v| v.max(0.0)))
}

/// Clamps the eigenvalues of the symmetric part of `z` from below at `floor`.
pub fn project_psd_shifted(z: &Matrix, floor: f64) -> Result<Matrix> {
    ensure_square(z)?;
    if !(floor >= 0.0 && floor.is_finite()) {
        return Err(Error::InvalidArgument(format!("floor must be >= 0, got {floor}")));
    }
    let eig = sym_eig(z)?;
    if eig.min_value() >= floor {
        return Ok(crate::matrix::symmetric_part(z));
    }
    Ok(eig.reassemble_with(|v| v.max(floor)))
}

/// Nearest point of the dissipative set.
#[derive(Debug, Clone)]
pub struct DhProjection {
    /// `J - R`
    pub d: Matrix,
    pub j: Matrix,
    pub r: Matrix,
}

/// Projection onto `{J - R : J skew, R PSD}`: the two pieces decouple, giving
/// `J = skew(Z)` and `R = P_psd(-Z)`.
pub fn project_dh(z: &Matrix) -> Result<DhProjection> {
    let j = project_skew(z)?;
    let r = project_psd(&-z)?;
    let d = &j - &r;
    Ok(DhProjection { d, j, r })
}
