//! Degenerate (singular-covariance) Gaussian: density, scaled log-likelihood and its
//! gradient, the two maximum likelihood branches, and a seeded sampler.

mod likelihood;
mod mle;
mod model;
mod sample;

pub use likelihood::{
    log_density, log_likelihood, loglik_gradient, pinv_differential, residual_matrix,
    scaled_log_likelihood, Dataset, LogLikelihoodValue, ResidualMatrix,
};
pub use mle::{mle_covariance, projected_gradient_norm, sample_mean, MleMode};
pub use model::{GaussianModel, PSD_TOL, SUPPORT_TOL};
pub use sample::sample_degenerate;
