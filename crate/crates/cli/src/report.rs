use nearstable::{Matrix, SolveResult};
use serde::Serialize;

/// Result file written by `solve --out`.
#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub final_error: f64,
    pub initial_error: f64,
    pub iterations: usize,
    pub termination: String,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    pub spectral_abscissa: f64,
}

pub fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl SolveReport {
    pub fn new(result: &SolveResult, spectral_abscissa: f64) -> Self {
        Self {
            final_error: result.final_error,
            initial_error: result.initial_error,
            iterations: result.iterations,
            termination: result.termination.to_string(),
            j: rows(&result.state.j),
            r: rows(&result.state.r),
            q: rows(&result.state.q),
            spectral_abscissa,
        }
    }
}
