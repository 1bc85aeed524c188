//! Dense Hermitian matrices, their eigendecomposition, numerical rank, minors, and
//! kernel comparison.

mod hermitian;
mod minors;
mod spectral;

pub use hermitian::{build_hermitian, hermitian_deviation, BuildPolicy, CMatrix, HermitianMatrix, HERMITIAN_TOL};
pub(crate) use hermitian::check_same_dim;
pub use minors::{
    binomial, check_minor_budget, enumerate_minors, minor_cap_from_env, minor_count, minor_indices,
    MinorIndex, DEFAULT_MINOR_CAP, MINOR_CAP_ENV,
};
pub use spectral::{
    decompose, decompose_with_budget, default_rel_tol, projector_distance, range_projector,
    rank_profile, same_kernel, RankProfile, SpectralDecomposition, Spectrum, KERNEL_TOL, MAX_SWEEPS,
    ZERO_SPECTRUM_FLOOR,
};
