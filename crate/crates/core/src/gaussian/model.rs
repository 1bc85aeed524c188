use nalgebra::{DMatrix, DVector};

use crate::calculus::{pdet, pinv};
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Spectrum};

/// Default off-support threshold for [`log_density`](super::log_density).
pub const SUPPORT_TOL: f64 = 1e-8;

/// Relative slack allowed below zero in the PSD check.
pub const PSD_TOL: f64 = 1e-10;

/// Degenerate Gaussian `N(mu, Sigma)` with `Sigma` real symmetric PSD, possibly singular.
///
/// Pseudo inverse, pseudo determinant, rank, range projector and a square-root factor are
/// computed once at construction.
#[derive(Debug, Clone)]
pub struct GaussianModel {
    mean: DVector<f64>,
    cov: HermitianMatrix,
    spectrum: Spectrum,
    pinv: DMatrix<f64>,
    pdet: f64,
    projector: DMatrix<f64>,
    factor: DMatrix<f64>,
    support_tol: f64,
}

/// Checks the spectrum is PSD within [`PSD_TOL`].
pub(crate) fn check_psd(spectrum: &Spectrum) -> Result<()> {
    let min = spectrum.min_eigenvalue();
    let max = spectrum.max_eigenvalue();
    if min < -PSD_TOL * max.max(0.0) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min, max_eigenvalue: max });
    }
    Ok(())
}

pub(crate) fn require_real(m: &HermitianMatrix) -> Result<()> {
    let max_imag = m.max_imag();
    if max_imag != 0.0 {
        return Err(Error::NotReal { max_imag });
    }
    Ok(())
}

impl GaussianModel {
    pub fn new(mean: DVector<f64>, cov: HermitianMatrix, rel_tol: Option<f64>) -> Result<Self> {
        if mean.len() != cov.n() {
            return Err(Error::DimensionMismatch { expected: cov.n(), found: mean.len() });
        }
        require_real(&cov)?;
        let mut spectrum = Spectrum::new(&cov, rel_tol)?;
        check_psd(&spectrum)?;
        // eigenvalues that passed the PSD slack but sit below zero are kernel, not range
        let eig = &spectrum.decomposition.eigenvalues;
        spectrum.profile.kept_indices.retain(|&i| eig[i] > 0.0);
        spectrum.profile.rank = spectrum.profile.kept_indices.len();

        let pinv = pinv(&spectrum).real();
        let pdet = pdet(&spectrum).value;
        let projector = spectrum.range_projector().real();
        let factor = spectrum.real_square_root_factor();
        Ok(Self { mean, cov, spectrum, pinv, pdet, projector, factor, support_tol: SUPPORT_TOL })
    }

    pub fn with_support_tol(mut self, tol: f64) -> Self {
        self.support_tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &HermitianMatrix {
        &self.cov
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn rank(&self) -> usize {
        self.spectrum.rank()
    }

    /// Cached `Sigma+`.
    pub fn pinv(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    /// Cached `Det(Sigma)`.
    pub fn pdet(&self) -> f64 {
        self.pdet
    }

    /// Cached `Sigma Sigma+`.
    pub fn projector(&self) -> &DMatrix<f64> {
        &self.projector
    }

    /// `n x k` factor `F` with `F F^T = Sigma` restricted to the range.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn support_tol(&self) -> f64 {
        self.support_tol
    }

    /// `||(I - P) r||_2` for a residual `r = x - mu`.
    pub fn off_support_distance(&self, r: &DVector<f64>) -> f64 {
        (r - &self.projector * r).norm()
    }

    pub fn is_on_support(&self, r: &DVector<f64>) -> bool {
        self.off_support_distance(r) <= self.support_tol * (1.0 + r.norm())
    }
}
