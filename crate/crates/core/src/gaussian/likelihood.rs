use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::model::{check_psd, require_real, GaussianModel};
use crate::calculus::{pdet, pinv};
use crate::error::{Error, Result};
use crate::matrix::{check_same_dim, CMatrix, HermitianMatrix, Spectrum};
use crate::options::Options;

/// `N` samples of dimension `n`, stored one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: DMatrix<f64>,
}

impl Dataset {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?;
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidArgument("samples must have at least one coordinate".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self { samples: DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]) })
    }

    pub fn from_matrix(samples: DMatrix<f64>) -> Result<Self> {
        if samples.nrows() == 0 {
            return Err(Error::EmptyDataset);
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.samples.ncols()
    }

    pub fn sample(&self, i: usize) -> DVector<f64> {
        self.samples.row(i).transpose()
    }

    pub fn samples(&self) -> impl Iterator<Item = DVector<f64>> + '_ {
        (0..self.len()).map(|i| self.sample(i))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.samples
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

/// `R = sum_i (x_i - mu)(x_i - mu)^T` together with the sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    pub r: DMatrix<f64>,
    pub samples: usize,
}

pub fn residual_matrix(data: &Dataset, mu: &DVector<f64>) -> Result<ResidualMatrix> {
    data.check_dim(mu.len())?;
    let n = mu.len();
    let mut r = DMatrix::zeros(n, n);
    for x in data.samples() {
        let d = x - mu;
        r.ger(1.0, &d, &d, 1.0);
    }
    Ok(ResidualMatrix { r, samples: data.len() })
}

/// A log density or log-likelihood; `-inf` exactly when some point is off the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLikelihoodValue {
    pub value: f64,
    pub on_support: bool,
}

impl LogLikelihoodValue {
    pub fn off_support() -> Self {
        Self { value: f64::NEG_INFINITY, on_support: false }
    }

    fn finite(value: f64) -> Self {
        Self { value, on_support: true }
    }
}

/// `-1/2 [k log(2 pi) + log Det(Sigma)] - 1/2 r^T Sigma+ r` on `mu + range(Sigma)`, `-inf`
/// off it.
pub fn log_density(x: &DVector<f64>, model: &GaussianModel) -> Result<LogLikelihoodValue> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: x.len() });
    }
    let r = x - model.mean();
    if !model.is_on_support(&r) {
        return Ok(LogLikelihoodValue::off_support());
    }
    let k = model.rank() as f64;
    let quad = r.dot(&(model.pinv() * &r));
    Ok(LogLikelihoodValue::finite(-0.5 * (k * (2.0 * PI).ln() + model.pdet().ln()) - 0.5 * quad))
}

/// `-N log Det(Sigma) - tr(Sigma+ R)`, the log-likelihood up to a factor of 1/2 and an
/// additive constant.
pub fn log_likelihood(data: &Dataset, model: &GaussianModel) -> Result<LogLikelihoodValue> {
    data.check_dim(model.dim())?;
    if data.samples().any(|x| !model.is_on_support(&(x - model.mean()))) {
        return Ok(LogLikelihoodValue::off_support());
    }
    let r = residual_matrix(data, model.mean())?;
    let n = r.samples as f64;
    Ok(LogLikelihoodValue::finite(-n * model.pdet().ln() - model.pinv().dot(&r.r.transpose())))
}

/// The same objective evaluated from a covariance spectrum and a residual matrix, with no
/// support check. Useful for finite differences at pinned rank.
pub fn scaled_log_likelihood(cov: &Spectrum, r: &ResidualMatrix) -> f64 {
    let p = pinv(cov).real();
    -(r.samples as f64) * pdet(cov).value.ln() - p.dot(&r.r.transpose())
}

/// `d Sigma+ = -S dS S + S S dS (I - Sigma S) + (I - S Sigma) dS S S` with `S = Sigma+`.
pub fn pinv_differential(sigma: &HermitianMatrix, d_sigma: &HermitianMatrix, opts: &Options) -> Result<CMatrix> {
    check_same_dim(sigma, d_sigma)?;
    let spectrum = Spectrum::new(sigma, opts.rel_tol)?;
    Ok(pinv_differential_on(&spectrum, d_sigma))
}

pub(crate) fn pinv_differential_on(spectrum: &Spectrum, d_sigma: &HermitianMatrix) -> CMatrix {
    let n = spectrum.n();
    let s = pinv(spectrum).into_matrix();
    let sigma = spectrum.matrix.as_matrix();
    let ds = d_sigma.as_matrix();
    let eye = CMatrix::identity(n, n);
    let ss = &s * &s;
    -(&s * ds * &s) + &ss * ds * (&eye - sigma * &s) + (&eye - &s * sigma) * ds * &ss
}

/// Matrix `G` with `d l = tr(G dSigma)`:
/// `G = -N S + S R S - (I - Sigma S) R S S - S S R (I - S Sigma)` with `S = Sigma+`.
pub fn loglik_gradient(sigma: &HermitianMatrix, r: &ResidualMatrix, opts: &Options) -> Result<DMatrix<f64>> {
    if r.r.nrows() != sigma.n() {
        return Err(Error::DimensionMismatch { expected: sigma.n(), found: r.r.nrows() });
    }
    require_real(sigma)?;
    let spectrum = Spectrum::new(sigma, opts.rel_tol)?;
    check_psd(&spectrum)?;
    Ok(loglik_gradient_on(&spectrum, r))
}

pub(crate) fn loglik_gradient_on(spectrum: &Spectrum, r: &ResidualMatrix) -> DMatrix<f64> {
    let n = spectrum.n();
    let s = pinv(spectrum).real();
    let sigma = spectrum.matrix.real();
    let eye = DMatrix::<f64>::identity(n, n);
    let ss = &s * &s;
    let rr = &r.r;
    &s * -(r.samples as f64) + &s * rr * &s - (&eye - &sigma * &s) * rr * &ss - &ss * rr * (&eye - &s * &sigma)
}
