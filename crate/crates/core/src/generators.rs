//! Benchmark matrix families and the portable random stream used for them.
//!
//! Types 3 and 4 are drawn from [`SplitMix64`] in row-major order, so any
//! implementation of the same stream reproduces them bit for bit:
//! uniforms are `(next >> 11) * 2^-53`, Gaussians come from Box-Muller on
//! consecutive uniform pairs `(u1, u2)` as `r cos(2 pi u2)` then `r sin(2 pi u2)`
//! with `r = sqrt(-2 ln(1 - u1))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("matrix size must be >= 2, got {n}")));
    }
    Ok(())
}

/// Ones on the subdiagonal and `-0.1` in the top-right corner.
pub fn gen_type1(n: usize) -> Result<Matrix> {
    check_size(n)?;
    let mut m = Matrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    m[(0, n - 1)] = -0.1;
    Ok(m)
}

/// Grcar matrix: `-1` on the subdiagonal, `1` on the diagonal and the first
/// `k` superdiagonals.
pub fn gen_type2_grcar(n: usize, k: usize) -> Result<Matrix> {
    check_size(n)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("grcar k must satisfy 1 <= k < n, got k = {k}, n = {n}")));
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            -1.0
        } else if j >= i && j - i <= k {
            1.0
        } else {
            0.0
        }
    }))
}

fn fill_row_major(n: usize, mut draw: impl FnMut() -> f64) -> Matrix {
    let data: Vec<f64> = (0..n * n).map(|_| draw()).collect();
    Matrix::from_row_slice(n, n, &data)
}

/// i.i.d. N(0, 1) entries.
pub fn gen_type3_gaussian(n: usize, seed: u64) -> Result<Matrix> {
    check_size(n)?;
    let mut rng = SplitMix64::new(seed);
    Ok(fill_row_major(n, || rng.next_normal()))
}

/// i.i.d. U[0, 1) entries.
pub fn gen_type4_uniform(n: usize, seed: u64) -> Result<Matrix> {
    check_size(n)?;
    let mut rng = SplitMix64::new(seed);
    Ok(fill_row_major(n, || rng.next_uniform()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixFamily {
    Type1,
    Type2Grcar,
    Type3Gaussian,
    Type4Uniform,
}

impl MatrixFamily {
    pub const ALL: [MatrixFamily; 4] = [
        MatrixFamily::Type1,
        MatrixFamily::Type2Grcar,
        MatrixFamily::Type3Gaussian,
        MatrixFamily::Type4Uniform,
    ];

    /// 1-based type number.
    pub fn number(self) -> u8 {
        match self {
            MatrixFamily::Type1 => 1,
            MatrixFamily::Type2Grcar => 2,
            MatrixFamily::Type3Gaussian => 3,
            MatrixFamily::Type4Uniform => 4,
        }
    }

    pub fn from_number(t: u8) -> Result<Self> {
        match t {
            1 => Ok(MatrixFamily::Type1),
            2 => Ok(MatrixFamily::Type2Grcar),
            3 => Ok(MatrixFamily::Type3Gaussian),
            4 => Ok(MatrixFamily::Type4Uniform),
            _ => Err(Error::InvalidArgument(format!("unknown matrix type {t} (expected 1-4)"))),
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, MatrixFamily::Type3Gaussian | MatrixFamily::Type4Uniform)
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type{}", self.number())
    }
}

impl FromStr for MatrixFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches("type");
        let num: u8 = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown matrix type `{s}`")))?;
        Self::from_number(num)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestMatrixSpec {
    pub family: MatrixFamily,
    pub size: usize,
    /// Only used by the random families.
    pub seed: u64,
    /// Only used by the Grcar family.
    pub grcar_k: usize,
}

impl TestMatrixSpec {
    pub fn new(family: MatrixFamily, size: usize) -> Self {
        Self { family, size, seed: 0, grcar_k: 3 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn generate(spec: &TestMatrixSpec) -> Result<Matrix> {
    match spec.family {
        MatrixFamily::Type1 => gen_type1(spec.size),
        MatrixFamily::Type2Grcar => gen_type2_grcar(spec.size, spec.grcar_k),
        MatrixFamily::Type3Gaussian => gen_type3_gaussian(spec.size, spec.seed),
        MatrixFamily::Type4Uniform => gen_type4_uniform(spec.size, spec.seed),
    }
}
