//! Stability verification: eigenvalues in the closed left half-plane, with
//! every eigenvalue on the imaginary axis semisimple.

use nalgebra::{Complex, DMatrix};

use crate::error::Result;
use crate::matrix::{ensure_square, general_eigenvalues, Matrix};
use crate::objective::DhState;

/// `(J - R) Q`.
pub fn assemble(state: &DhState) -> Matrix {
    state.assemble()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable,
    Unstable,
    /// The multiplicity count flips within a decade of the rank tolerance.
    Indeterminate,
}

impl StabilityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityVerdict::Stable => "stable",
            StabilityVerdict::Unstable => "unstable",
            StabilityVerdict::Indeterminate => "indeterminate",
        }
    }
}

/// A cluster of eigenvalues within `axis_tol` of the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisCluster {
    /// Mean of the clustered eigenvalues.
    pub center: Complex<f64>,
    pub algebraic: usize,
    pub geometric: usize,
    /// `Stable` when semisimple, `Unstable` when defective.
    pub verdict: StabilityVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub abscissa: f64,
    pub eigenvalues: Vec<Complex<f64>>,
    /// Parallel to `eigenvalues`: `|Re| <= axis_tol`.
    pub near_axis: Vec<bool>,
    pub clusters: Vec<AxisCluster>,
    pub verdict: StabilityVerdict,
}

/// Default tolerances `(axis_tol, rank_tol)` scaled by the spectral norm.
pub fn default_tolerances(x: &Matrix) -> (f64, f64) {
    let norm2 = spectral_norm(x);
    (1e-8 * norm2, 1e-10 * norm2)
}

pub fn spectral_norm(x: &Matrix) -> f64 {
    x.singular_values().iter().fold(0.0_f64, |a, &b| a.max(b))
}

fn numerical_rank(m: &DMatrix<Complex<f64>>, tol: f64) -> usize {
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

/// Checks stability of `x`. Eigenvalues with `|Re| <= axis_tol` are grouped
/// (single linkage at distance `axis_tol`) to count algebraic multiplicity;
/// geometric multiplicity is `n - rank(X - lambda I)` at `rank_tol`.
pub fn check_stability(x: &Matrix, axis_tol: f64, rank_tol: f64) -> Result<StabilityReport> {
    let n = ensure_square(x)?;
    let eigenvalues = general_eigenvalues(x)?;
    let abscissa = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let near_axis: Vec<bool> = eigenvalues.iter().map(|z| z.re.abs() <= axis_tol).collect();

    // single-linkage clustering of the near-axis eigenvalues
    let idx: Vec<usize> = (0..n).filter(|&i| near_axis[i]).collect();
    let mut label: Vec<usize> = (0..idx.len()).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if (eigenvalues[idx[a]] - eigenvalues[idx[b]]).norm() <= axis_tol {
                let (ra, rb) = (root(&mut label, a), root(&mut label, b));
                label[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = std::collections::BTreeMap::new();
    for (a, &eig_index) in idx.iter().enumerate() {
        let r = root(&mut label, a);
        let g = *group_of.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(eig_index);
    }

    let xc: DMatrix<Complex<f64>> = x.map(|v| Complex::new(v, 0.0));
    let mut clusters = Vec::with_capacity(groups.len());
    for members in groups {
        let center = members.iter().map(|&i| eigenvalues[i]).sum::<Complex<f64>>() / members.len() as f64;
        let shifted = &xc - DMatrix::<Complex<f64>>::identity(n, n) * center;
        let geometric_at = |tol: f64| n - numerical_rank(&shifted, tol);
        let algebraic = members.len();
        let geometric = geometric_at(rank_tol);
        let loose = geometric_at(rank_tol * 10.0);
        let tight = geometric_at(rank_tol / 10.0);
        let semisimple = |g: usize| g >= algebraic;
        let verdict = if semisimple(loose) != semisimple(tight) {
            StabilityVerdict::Indeterminate
        } else if semisimple(geometric) {
            StabilityVerdict::Stable
        } else {
            StabilityVerdict::Unstable
        };
        clusters.push(AxisCluster { center, algebraic, geometric, verdict });
    }

    let verdict = if abscissa > axis_tol || clusters.iter().any(|c| c.verdict == StabilityVerdict::Unstable) {
        StabilityVerdict::Unstable
    } else if clusters.iter().any(|c| c.verdict == StabilityVerdict::Indeterminate) {
        StabilityVerdict::Indeterminate
    } else {
        StabilityVerdict::Stable
    };

    Ok(StabilityReport { abscissa, eigenvalues, near_axis, clusters, verdict })
}

/// [`check_stability`] with the default norm-scaled tolerances.
pub fn check_stability_default(x: &Matrix) -> Result<StabilityReport> {
    let (axis_tol, rank_tol) = default_tolerances(x);
    check_stability(x, axis_tol, rank_tol)
}
