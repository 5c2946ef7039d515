//! Test-only helpers: random inputs and reference algorithms that do not share
//! code with the library paths they check.
#![allow(dead_code)]

use nearstable::{Matrix, SplitMix64};

pub fn gaussian(n: usize, m: usize, rng: &mut SplitMix64) -> Matrix {
    Matrix::from_fn(n, m, |_, _| rng.next_normal())
}

pub fn random_symmetric(n: usize, rng: &mut SplitMix64) -> Matrix {
    let g = gaussian(n, n, rng);
    (&g + g.transpose()) * 0.5
}

pub fn random_skew(n: usize, rng: &mut SplitMix64) -> Matrix {
    let g = gaussian(n, n, rng);
    (&g - g.transpose()) * 0.5
}

/// `G^T G` for a Gaussian `G`.
pub fn random_psd(n: usize, rng: &mut SplitMix64) -> Matrix {
    let g = gaussian(n, n, rng);
    g.tr_mul(&g)
}

/// Random orthogonal matrix from Gram-Schmidt (two passes) on a Gaussian matrix.
pub fn random_orthogonal(n: usize, rng: &mut SplitMix64) -> Matrix {
    let mut q = gaussian(n, n, rng);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj = q.column(j).dot(&q.column(k));
                let col_k = q.column(k).clone_owned();
                q.column_mut(j).axpy(-proj, &col_k, 1.0);
            }
        }
        let norm = q.column(j).norm();
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    q
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(s: &Matrix) -> Vec<f64> {
    let n = s.nrows();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (s[(i, j)] + s[(j, i)])).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flatten().map(|v| v * v).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - sn * akq;
                    row[q] = sn * akp + c * akq;
                }
                let (row_p, row_q) = (a[p].clone(), a[q].clone());
                for k in 0..n {
                    a[p][k] = c * row_p[k] - sn * row_q[k];
                    a[q][k] = sn * row_p[k] + c * row_q[k];
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Central finite-difference gradient of `f` at `x`, entry by entry.
pub fn finite_difference(f: impl Fn(&Matrix) -> f64, x: &Matrix, h: f64) -> Matrix {
    let mut g = Matrix::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[(i, j)] += h;
            xm[(i, j)] -= h;
            g[(i, j)] = (f(&xp) - f(&xm)) / (2.0 * h);
        }
    }
    g
}

/// Plain projected gradient with step `1 / lipschitz`, run for `steps` steps.
pub fn projected_gradient_oracle(
    grad: impl Fn(&Matrix) -> Matrix,
    project: impl Fn(&Matrix) -> Matrix,
    lipschitz: f64,
    x0: &Matrix,
    steps: usize,
) -> Matrix {
    let mut x = x0.clone();
    for _ in 0..steps {
        x = project(&(&x - grad(&x) / lipschitz));
    }
    x
}
