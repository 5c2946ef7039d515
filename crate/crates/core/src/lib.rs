//! Nearest stable matrices through dissipative-Hamiltonian factorizations.
//!
//! Every stable matrix can be written as `X = (J - R) Q` with `J` skew-symmetric,
//! `R` positive semidefinite and `Q` positive definite. Relaxing `Q` to be
//! semidefinite gives an optimization problem over a convex feasible set,
//!
//! ```text
//!     min  ||A - (J - R) Q||_F^2   s.t.  J = -J^T,  R >= 0,  Q >= 0,
//! ```
//!
//! which this crate attacks with three first-order methods: block coordinate
//! descent ([`solve_bcd`]), projected gradient ([`solve_grad`]) and a fast
//! projected gradient with restarts ([`solve_fgm`]). Any feasible point
//! assembles to a matrix whose eigenvalues lie in the closed left half-plane.
//!
//! ```
//! use nearstable::{gen_type1, init_identity, solve_fgm, SolverConfig};
//!
//! let a = gen_type1(10).unwrap();
//! let init = init_identity(&a).unwrap();
//! let config = SolverConfig { max_iter: 500, ..SolverConfig::default() };
//! let result = solve_fgm(&a, &init, &config).unwrap();
//! assert!(result.final_error < 1.50);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod generators;
pub mod lyapunov;
pub mod matrix;
pub mod objective;
pub mod projections;
pub mod solvers;
pub mod stability;

pub use error::{Error, Result};
pub use generators::{
    gen_type1, gen_type2_grcar, gen_type3_gaussian, gen_type4_uniform, generate, MatrixFamily,
    SplitMix64, TestMatrixSpec,
};
pub use lyapunov::lyapunov_dh_recovery;
pub use matrix::{
    format_matrix, frob_norm, general_eigenvalues, parse_matrix, power_lambda_max, read_matrix, spectral_abscissa, sym_eig,
    write_matrix, EigenDecomposition, Matrix,
};
pub use objective::{
    grad_d, grad_q, lipschitz_pair, objective, rebalance, report_error, DhState, LipschitzTracker,
};
pub use projections::{project_dh, project_psd, project_psd_shifted, project_skew};
pub use solvers::{
    finalize, init_identity, init_inverse_form, inner_fgm_convex, solve, solve_bcd, solve_fgm,
    solve_grad, Algorithm, ConvergenceTrace, InverseInitConfig, SolveResult, SolverConfig,
    Termination, TraceRecord,
};
pub use stability::{assemble, check_stability, StabilityReport, StabilityVerdict};
