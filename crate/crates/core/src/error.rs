use thiserror::Error;

/// Errors raised by the matrix, calculus and Gaussian layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows but row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix is not Hermitian: max deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigendecomposition did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    ConvergenceFailure { sweeps: usize, residual: f64 },

    #[error("minor enumeration for n={n}, k={k} needs {count} minors; dimension exceeds cap {cap}")]
    CapExceeded { n: usize, k: usize, count: u128, cap: usize },

    #[error("determinant scaling overflowed at delta={delta:e} (log magnitude {log_magnitude:.3})")]
    DeterminantOverflow { delta: f64, log_magnitude: f64 },

    #[error("kernels differ: range projector distance {distance:e} exceeds {tolerance:e}")]
    KernelMismatch { distance: f64, tolerance: f64 },

    #[error("rank drifted from {expected} to {found} under perturbation; step too large")]
    RankDrift { expected: usize, found: usize },

    #[error("projector is not idempotent: ||P^2 - P||_F = {residual:e}")]
    InvalidProjector { residual: f64 },

    #[error("covariance is not positive semidefinite: min eigenvalue {min_eigenvalue:e}, max {max_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, max_eigenvalue: f64 },

    #[error("covariance has non-zero imaginary part {max_imag:e}")]
    NotReal { max_imag: f64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
