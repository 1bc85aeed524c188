//! Pseudo determinants of Hermitian matrices and their derivatives.
//!
//! * [`matrix`]: Hermitian storage, Jacobi eigendecomposition, numerical rank, minors.
//! * [`calculus`]: `Det(A)`, `A+`, `can(A) = Det(A) A+`, directional derivatives, and
//!   independent oracles (shifted-determinant limit, minor sums).
//! * [`gaussian`]: degenerate Gaussian density, log-likelihood gradient, and the
//!   rank-deficient covariance MLE.
//!
//! ```
//! use pseudodet::calculus::{canonical_gradient, pdet};
//! use pseudodet::matrix::{HermitianMatrix, Spectrum};
//!
//! let a = HermitianMatrix::ones(2);
//! let s = Spectrum::new(&a, None).unwrap();
//! assert!((pdet(&s).value - 2.0).abs() < 1e-14);
//! let g = canonical_gradient(&s);
//! assert!(g.can.frobenius_distance(&a.scaled(0.5)) < 1e-14);
//! ```

pub mod calculus;
mod error;
pub mod gaussian;
pub mod matrix;
mod options;

pub use error::{Error, Result};
pub use options::Options;
