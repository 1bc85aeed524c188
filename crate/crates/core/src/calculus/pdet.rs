use num_complex::Complex64;

use super::minor_sums::minor_sums;
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, Spectrum};

/// How a pseudo determinant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdetMethod {
    Spectral,
    Limit,
    Minor,
}

impl PdetMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PdetMethod::Spectral => "spectral",
            PdetMethod::Limit => "limit",
            PdetMethod::Minor => "minor",
        }
    }
}

impl std::str::FromStr for PdetMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(PdetMethod::Spectral),
            "limit" => Ok(PdetMethod::Limit),
            "minor" => Ok(PdetMethod::Minor),
            other => Err(Error::InvalidArgument(format!("unknown pdet method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdetResult {
    pub value: f64,
    pub rank: usize,
    pub method: PdetMethod,
}

/// Product of the kept eigenvalues; exactly 1 at rank 0.
pub fn pdet(spectrum: &Spectrum) -> PdetResult {
    PdetResult {
        value: spectrum.kept_eigenvalues().product(),
        rank: spectrum.rank(),
        method: PdetMethod::Spectral,
    }
}

/// Default shift schedule for [`pdet_limit`].
pub const DEFAULT_DELTAS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// One term of the shifted-determinant sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub delta: f64,
    pub value: f64,
}

/// `det(A + delta I) / delta^(n-k)` for each shift, via pivoted LU with the scaling done in
/// log space.
pub fn pdet_limit(a: &HermitianMatrix, rank: usize, deltas: &[f64]) -> Result<Vec<LimitEstimate>> {
    let n = a.n();
    if rank > n {
        return Err(Error::InvalidArgument(format!("rank {rank} exceeds dimension {n}")));
    }
    if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::InvalidArgument("deltas must be positive and finite".into()));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("deltas must be strictly decreasing".into()));
    }
    let exponent = (n - rank) as f64;
    deltas
        .iter()
        .map(|&delta| {
            let shifted: CMatrix = a.as_matrix() + CMatrix::identity(n, n) * Complex64::new(delta, 0.0);
            let value = scaled_determinant(shifted, exponent * delta.ln(), delta)?;
            Ok(LimitEstimate { delta, value })
        })
        .collect()
}

/// Real part of `det(m) * exp(-log_scale)`.
fn scaled_determinant(m: CMatrix, log_scale: f64, delta: f64) -> Result<f64> {
    let n = m.nrows();
    let lu = m.lu();
    let u = lu.u();
    let mut log_magnitude = -log_scale;
    let mut phase: Complex64 = lu.p().determinant();
    for i in 0..n {
        let pivot = u[(i, i)];
        let r = pivot.norm();
        if r == 0.0 {
            return Ok(0.0);
        }
        log_magnitude += r.ln();
        phase *= pivot / r;
    }
    // exp over/underflows outside roughly [-708, 709]
    if !(-708.0..=709.0).contains(&log_magnitude) {
        return Err(Error::DeterminantOverflow { delta, log_magnitude });
    }
    Ok(phase.re * log_magnitude.exp())
}

/// `sqrt(sum_P |det A_P|^2)` over all `k x k` minors, which equals `|Det(A)|`.
pub fn pdet_minor(a: &HermitianMatrix, rank: usize, cap: usize) -> Result<f64> {
    if rank == 0 {
        crate::matrix::check_minor_budget(a.n(), 0, cap)?;
        return Ok(1.0);
    }
    Ok(minor_sums(a, rank, cap, false)?.weight_total.sqrt())
}
