//! Recovery of a `(J, R, Q)` factorization for an asymptotically stable matrix
//! from the solution of `A P + P A^T = -I`.

use crate::error::{Error, Result};
use crate::matrix::{ensure_finite, ensure_square, spectral_abscissa, sym_eig, symmetric_part, Matrix};
use crate::objective::DhState;

/// Largest size accepted by the dense vectorized solve (`n^2` unknowns).
pub const MAX_LYAPUNOV_DIM: usize = 30;

/// Solves `A P + P A^T = -I` through the Kronecker system
/// `(I (x) A + A (x) I) vec(P) = -vec(I)`.
pub fn solve_lyapunov_identity(a: &Matrix) -> Result<Matrix> {
    let n = ensure_square(a)?;
    if n > MAX_LYAPUNOV_DIM {
        return Err(Error::InvalidArgument(format!(
            "Lyapunov recovery is limited to n <= {MAX_LYAPUNOV_DIM}, got {n}"
        )));
    }
    let nn = n * n;
    // column-major vec: vec(P)[i + n j] = P[i, j]
    let mut k = Matrix::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            // (A P)[i, j] = sum_l A[i, l] P[l, j]
            for l in 0..n {
                k[(row, l + n * j)] += a[(i, l)];
            }
            // (P A^T)[i, j] = sum_l P[i, l] A[j, l]
            for l in 0..n {
                k[(row, i + n * l)] += a[(j, l)];
            }
        }
    }
    let mut rhs = nalgebra::DVector::zeros(nn);
    for i in 0..n {
        rhs[i + n * i] = -1.0;
    }
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or(Error::NoConvergence("Lyapunov linear solve (singular system)"))?;
    Ok(symmetric_part(&Matrix::from_column_slice(n, n, sol.as_slice())))
}

/// Factorization `A = (J - R) Q` of an asymptotically stable `A` with
/// `J = skew(A P)`, `R = -sym(A P)`, `Q = P^{-1}` and `P` the solution of
/// `A P + P A^T = -I`.
pub fn lyapunov_dh_recovery(a: &Matrix) -> Result<DhState> {
    ensure_square(a)?;
    ensure_finite(a)?;
    let abscissa = spectral_abscissa(a)?;
    if !(abscissa < 0.0) {
        return Err(Error::NotAsymptoticallyStable { abscissa });
    }
    let p = solve_lyapunov_identity(a)?;
    let eig = sym_eig(&p)?;
    if !(eig.min_value() > 0.0) {
        return Err(Error::NotAsymptoticallyStable { abscissa });
    }
    let q = eig.reassemble_with(|v| 1.0 / v);
    let ap = a * &p;
    let j = (&ap - ap.transpose()) * 0.5;
    let r = (&ap + ap.transpose()) * -0.5;
    DhState::new(j, r, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_identity_closed_form() {
        let a = -Matrix::identity(3, 3);
        let p = solve_lyapunov_identity(&a).unwrap();
        assert!((&p - Matrix::identity(3, 3) * 0.5).amax() < 1e-14);
        let s = lyapunov_dh_recovery(&a).unwrap();
        assert!(s.j.amax() < 1e-15);
        assert!((&s.r - Matrix::identity(3, 3) * 0.5).amax() < 1e-14);
        assert!((&s.q - Matrix::identity(3, 3) * 2.0).amax() < 1e-13);
        assert!((s.assemble() - &a).amax() < 1e-14);
    }

    #[test]
    fn damped_rotation_residual() {
        let a = Matrix::from_row_slice(2, 2, &[-0.1, 1.0, -1.0, -0.1]);
        let s = lyapunov_dh_recovery(&a).unwrap();
        assert!((s.assemble() - &a).norm() <= 1e-10);
        let p = solve_lyapunov_identity(&a).unwrap();
        let lhs = &a * &p + &p * a.transpose();
        assert!((lhs + Matrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn refuses_unstable_and_marginal_input() {
        let rot = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            lyapunov_dh_recovery(&rot),
            Err(Error::NotAsymptoticallyStable { .. })
        ));
        assert!(lyapunov_dh_recovery(&Matrix::identity(2, 2)).is_err());
    }

    #[test]
    fn refuses_large_input() {
        let a = -Matrix::identity(31, 31);
        assert!(matches!(lyapunov_dh_recovery(&a), Err(Error::InvalidArgument(_))));
    }
}
