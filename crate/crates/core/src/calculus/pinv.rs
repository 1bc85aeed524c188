use num_complex::Complex64;

use super::minor_sums::minor_sums;
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, Spectrum};

/// Pseudo inverse route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinvMethod {
    Spectral,
    Berg,
}

impl PinvMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PinvMethod::Spectral => "spectral",
            PinvMethod::Berg => "berg",
        }
    }
}

impl std::str::FromStr for PinvMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(PinvMethod::Spectral),
            "berg" => Ok(PinvMethod::Berg),
            other => Err(Error::InvalidArgument(format!("unknown pinv method '{other}'"))),
        }
    }
}

/// `sum_{kept} u_j u_j* / lambda_j`.
pub fn pinv(spectrum: &Spectrum) -> HermitianMatrix {
    spectrum.kept_sum(|l| 1.0 / l)
}

/// Minor-weighted average of minor inverses:
/// `sum_P |det A_P|^2 embed(A_P^-1) / sum_P |det A_P|^2`.
///
/// The inverse of minor `(rows R, cols C)` lands in block `[C, R]`. Rank 0 yields the zero
/// matrix.
pub fn pinv_berg(a: &HermitianMatrix, rank: usize, cap: usize) -> Result<HermitianMatrix> {
    if rank == 0 {
        crate::matrix::check_minor_budget(a.n(), 0, cap)?;
        return Ok(HermitianMatrix::zeros(a.n()));
    }
    let sums = minor_sums(a, rank, cap, true)?;
    let acc = sums.weighted_inverse.expect("requested weighted inverse");
    if sums.weight_total == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "every {rank}x{rank} minor is singular; rank overstated"
        )));
    }
    let out = acc / Complex64::new(sums.weight_total, 0.0);
    Ok(HermitianMatrix::symmetrized(&out))
}

/// Frobenius residuals of the four Penrose conditions, each divided by the norm of the
/// matrix it reproduces (or 1 when that norm is 0):
/// `A X A = A`, `X A X = X`, `(A X)* = A X`, `(X A)* = X A`.
pub fn penrose_residuals(a: &HermitianMatrix, x: &CMatrix) -> [f64; 4] {
    let a = a.as_matrix();
    let ax = a * x;
    let xa = x * a;
    let rel = |num: f64, den: f64| if den > 0.0 { num / den } else { num };
    [
        rel((&ax * a - a).norm(), a.norm()),
        rel((&xa * x - x).norm(), x.norm()),
        rel((ax.adjoint() - &ax).norm(), ax.norm()),
        rel((xa.adjoint() - &xa).norm(), xa.norm()),
    ]
}
