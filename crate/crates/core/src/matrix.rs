//! Dense matrix helpers, spectral primitives and the plain-text matrix format.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix. All public constructors in this crate reject NaN/Inf.
pub type Matrix = DMatrix<f64>;

pub(crate) fn ensure_square(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_same_shape(a: &Matrix, b: &Matrix, what: &str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Fails on the first NaN or infinite entry.
pub fn ensure_finite(m: &Matrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Builds a matrix from row slices, validating shape and finiteness.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "row {bad} has {} entries, expected {ncols}",
            rows[bad].len()
        )));
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn frob_norm(m: &Matrix) -> f64 {
    m.norm()
}

/// `(S + S^T) / 2`.
pub fn symmetric_part(s: &Matrix) -> Matrix {
    (s + s.transpose()) * 0.5
}

/// Orthonormal eigenbasis and eigenvalues (non-decreasing) of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub basis: Matrix,
    pub values: Vec<f64>,
}

impl EigenDecomposition {
    /// `U diag(f(values)) U^T`.
    pub fn reassemble_with(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mut scaled = self.basis.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let w = f(v);
            scaled.column_mut(j).scale_mut(w);
        }
        symmetric_part(&(scaled * self.basis.transpose()))
    }

    pub fn reconstruct(&self) -> Matrix {
        self.reassemble_with(|v| v)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Symmetric eigendecomposition. The input is symmetrized before factoring.
pub fn sym_eig(s: &Matrix) -> Result<EigenDecomposition> {
    let n = ensure_square(s)?;
    let sym = symmetric_part(s);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::NoConvergence("symmetric eigendecomposition"))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let basis = Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence("symmetric eigendecomposition"));
    }
    Ok(EigenDecomposition { basis, values })
}

/// All eigenvalues of a general square matrix, with multiplicity, unordered.
///
/// Shifted QR can stagnate on highly structured inputs such as cyclic shifts.
/// If it does, the computation is retried on `H M H` for a few Householder
/// reflectors `H`, which leaves the spectrum unchanged.
pub fn general_eigenvalues(m: &Matrix) -> Result<Vec<Complex<f64>>> {
    let n = ensure_square(m)?;
    let finite = |v: &[Complex<f64>]| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    for attempt in 0..4 {
        let input = if attempt == 0 { m.clone() } else { reflect(m, attempt) };
        if let Some(schur) = input.try_schur(f64::EPSILON, 1000 * n.max(10)) {
            let values: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
            if finite(&values) {
                return Ok(values);
            }
        }
    }
    Err(Error::NoConvergence("Schur decomposition"))
}

/// `H M H` with `H = I - 2 v v^T` for a deterministic dense unit vector `v`.
fn reflect(m: &Matrix, variant: usize) -> Matrix {
    let n = m.nrows();
    let v = DVector::from_fn(n, |i, _| {
        1.0 + ((i + 1) as f64 * (0.618_033_988_749_894_9 + 0.1 * variant as f64)).fract()
    });
    let v = &v / v.norm();
    let h = Matrix::identity(n, n) - (&v * v.transpose()) * 2.0;
    &h * m * &h
}

/// Largest real part over the eigenvalues of `m`.
pub fn spectral_abscissa(m: &Matrix) -> Result<f64> {
    Ok(general_eigenvalues(m)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Deterministic dense start vector for the power method.
pub(crate) fn cold_start(n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |i, _| 1.0 + ((i + 1) as f64 * 0.618_033_988_749_894_9).fract());
    let norm = v.norm();
    v / norm
}

fn power_iterate(
    n: usize,
    apply: impl Fn(&DVector<f64>) -> DVector<f64>,
    warm: Option<&DVector<f64>>,
    steps: usize,
) -> (f64, DVector<f64>) {
    let mut v = match warm {
        Some(w) if w.len() == n && w.norm() > 0.0 => w / w.norm(),
        _ => cold_start(n),
    };
    let mut estimate = 0.0;
    for _ in 0..steps.max(1) {
        let w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 || !norm.is_finite() {
            return (0.0, v);
        }
        estimate = v.dot(&w);
        v = w / norm;
    }
    (estimate.max(0.0), v)
}

/// A few power-method steps for the largest eigenvalue of a symmetric PSD
/// matrix. The Rayleigh quotient never overestimates `lambda_max`; the returned
/// unit vector is meant to warm-start the next call.
pub fn power_lambda_max(
    s: &Matrix,
    warm: Option<&DVector<f64>>,
    steps: usize,
) -> (f64, DVector<f64>) {
    power_iterate(s.nrows(), |v| s * v, warm, steps)
}

/// Same as [`power_lambda_max`] for `M^T M`, without forming the product.
pub fn power_lambda_max_gram(
    m: &Matrix,
    warm: Option<&DVector<f64>>,
    steps: usize,
) -> (f64, DVector<f64>) {
    power_iterate(m.ncols(), |v| m.tr_mul(&(m * v)), warm, steps)
}

/// Parses the text matrix format: a `rows cols` header followed by one line per
/// row of whitespace-separated decimals. Blank lines and lines starting with
/// `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            message: format!("bad header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: hline,
            message: "header must be `rows cols`".into(),
        });
    };
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: hline,
            message: "dimensions must be positive".into(),
        });
    }

    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: format!("expected {rows} rows, found {i}"),
        })?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: lno,
                message: e.to_string(),
            })?;
        if values.len() != cols {
            return Err(Error::Parse {
                line: lno,
                message: format!("expected {cols} values, found {}", values.len()),
            });
        }
        for (j, v) in values.into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: lno,
                    message: format!("non-finite value in column {}", j + 1),
                });
            }
            m[(i, j)] = v;
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            message: "trailing data after last row".into(),
        });
    }
    Ok(m)
}

/// Formats a matrix with 17 significant digits per entry.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e}", m[(i, j)]))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix(reader: impl BufRead) -> Result<Matrix> {
    let text = std::io::read_to_string(reader)?;
    parse_matrix(&text)
}

pub fn write_matrix(mut writer: impl Write, m: &Matrix) -> Result<()> {
    writer.write_all(format_matrix(m).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(rows: &[&[f64]]) -> Matrix {
        from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn frob_norm_small_cases() {
        assert_eq!(frob_norm(&Matrix::zeros(3, 3)), 0.0);
        assert_eq!(frob_norm(&Matrix::identity(4, 4)), 2.0);
        assert_eq!(frob_norm(&dm(&[&[3.0, 4.0], &[0.0, 0.0]])), 5.0);
    }

    #[test]
    fn from_rows_rejects_nan_and_ragged() {
        assert!(matches!(
            from_rows(&[vec![1.0, f64::NAN]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(from_rows(&[]).is_err());
    }

    #[test]
    fn sym_eig_identity_and_diagonal() {
        let e = sym_eig(&Matrix::identity(3, 3)).unwrap();
        for v in &e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let btb = e.basis.tr_mul(&e.basis);
        assert!((btb - Matrix::identity(3, 3)).amax() < 1e-12);

        let d = Matrix::from_diagonal(&DVector::from_vec(vec![5.0, -2.0, 0.0]));
        let e = sym_eig(&d).unwrap();
        assert_eq!(e.values.len(), 3);
        for (got, want) in e.values.iter().zip([-2.0, 0.0, 5.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn sym_eig_rejects_rectangular() {
        assert!(matches!(
            sym_eig(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn general_eigenvalues_rotation_and_triangular() {
        let rot = dm(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let mut ev = general_eigenvalues(&rot).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - Complex::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - Complex::new(0.0, 1.0)).norm() < 1e-12);

        let tri = dm(&[&[2.0, 1.0, 4.0], &[0.0, -3.0, 7.0], &[0.0, 0.0, 0.5]]);
        let mut re: Vec<f64> = general_eigenvalues(&tri).unwrap().iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([-3.0, 0.5, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_abscissa_basic() {
        let neg = -Matrix::identity(3, 3);
        assert!((spectral_abscissa(&neg).unwrap() + 1.0).abs() < 1e-14);
        let rot = dm(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(spectral_abscissa(&rot).unwrap().abs() < 1e-14);
    }

    #[test]
    fn power_method_examples() {
        let (est, v) = power_lambda_max(&Matrix::identity(4, 4), None, 1);
        assert!((est - 1.0).abs() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);

        let d = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 9.0]));
        let (est, _) = power_lambda_max(&d, None, 25);
        assert!((est - 9.0).abs() < 1e-6);

        let (est, v) = power_lambda_max(&Matrix::zeros(3, 3), None, 5);
        assert_eq!(est, 0.0);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gram_power_matches_explicit_product() {
        let m = dm(&[&[3.0, 0.0], &[0.0, 1.0]]);
        let (est, _) = power_lambda_max_gram(&m, None, 60);
        assert!((est - 9.0).abs() < 1e-9);
    }

    #[test]
    fn text_format_roundtrip_and_comments() {
        let m = dm(&[&[0.1, -2.5e-17], &[1.0 / 3.0, 12345.678901234567]]);
        let text = format_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(m, back);

        let commented = "# header comment\n2 2\n1 2\n# mid\n3 4\n";
        assert_eq!(parse_matrix(commented).unwrap(), dm(&[&[1.0, 2.0], &[3.0, 4.0]]));
    }

    #[test]
    fn text_format_errors_carry_line_numbers() {
        assert!(matches!(parse_matrix("2 2\n1 2\n3 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("2 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("2 2\n1 2\n3 4\n5 6\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_matrix("1 1\nNaN\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
    }
}
