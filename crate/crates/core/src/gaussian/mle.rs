use nalgebra::DVector;

use super::likelihood::{loglik_gradient_on, residual_matrix, Dataset, ResidualMatrix};
use super::model::require_real;
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Spectrum};
use crate::options::Options;

/// Idempotency tolerance for user-supplied projectors.
pub const PROJECTOR_TOL: f64 = 1e-8;

/// Which stationary solution to return.
#[derive(Debug, Clone, PartialEq)]
pub enum MleMode {
    /// Assume `Ker(R) = Ker(Sigma)`: `Sigma_hat = R / N`.
    KernelFree,
    /// Range of `Sigma` fixed in advance by the orthogonal projector `P`:
    /// `Sigma_hat = P (R / N) P`.
    FixedRange(HermitianMatrix),
}

impl MleMode {
    pub fn name(&self) -> &'static str {
        match self {
            MleMode::KernelFree => "kernel_free",
            MleMode::FixedRange(_) => "fixed_range",
        }
    }
}

pub fn mle_covariance(data: &Dataset, mu: &DVector<f64>, mode: &MleMode) -> Result<HermitianMatrix> {
    let r = residual_matrix(data, mu)?;
    let scaled = &r.r / r.samples as f64;
    let estimate = match mode {
        MleMode::KernelFree => scaled,
        MleMode::FixedRange(p) => {
            if p.n() != mu.len() {
                return Err(Error::DimensionMismatch { expected: mu.len(), found: p.n() });
            }
            require_real(p)?;
            let p = p.real();
            let residual = (&p * &p - &p).norm();
            if residual > PROJECTOR_TOL {
                return Err(Error::InvalidProjector { residual });
            }
            &p * scaled * &p
        }
    };
    Ok(HermitianMatrix::symmetrized(&estimate.map(|x| num_complex::Complex64::new(x, 0.0))))
}

/// `||P G P||_F` where `G` is the log-likelihood gradient at `sigma` and `P` its range
/// projector; zero at a stationary point.
pub fn projected_gradient_norm(sigma: &HermitianMatrix, r: &ResidualMatrix, opts: &Options) -> Result<f64> {
    if r.r.nrows() != sigma.n() {
        return Err(Error::DimensionMismatch { expected: sigma.n(), found: r.r.nrows() });
    }
    require_real(sigma)?;
    let spectrum = Spectrum::new(sigma, opts.rel_tol)?;
    let g = loglik_gradient_on(&spectrum, r);
    let p = spectrum.range_projector().real();
    Ok((&p * g * &p).norm())
}

pub fn sample_mean(data: &Dataset) -> DVector<f64> {
    data.as_matrix().row_sum().transpose() / data.len() as f64
}
