use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("matrix is not asymptotically stable (spectral abscissa {abscissa:e})")]
    NotAsymptoticallyStable { abscissa: f64 },

    #[error("matrix inversion is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
