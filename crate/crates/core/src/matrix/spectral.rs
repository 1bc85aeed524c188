//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, numerical rank, and
//! range projectors.
//!
//! Jacobi is slow for large `n` but delivers small eigenvalues to absolute accuracy
//! `O(eps * ||A||)`, which is what the rank decision and every downstream quantity
//! (pseudo determinant, pseudo inverse, projectors) depend on.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermitian::{check_same_dim, CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Upper bound on Jacobi sweeps before reporting `ConvergenceFailure`.
pub const MAX_SWEEPS: usize = 64;

/// Default relative rank cutoff for an `n x n` matrix: `1e-12 * n`.
pub fn default_rel_tol(n: usize) -> f64 {
    1e-12 * n.max(1) as f64
}

/// Absolute cutoff used when every eigenvalue is zero.
pub const ZERO_SPECTRUM_FLOOR: f64 = 1e-300;

/// Eigenvalues sorted by decreasing magnitude with aligned orthonormal eigenvectors
/// (columns of `eigenvectors`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Numerical rank decision for a [`SpectralDecomposition`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankProfile {
    pub rank: usize,
    /// Absolute eigenvalue cutoff that was applied.
    pub tolerance: f64,
    pub kept_indices: Vec<usize>,
}

/// Decomposes with the default sweep budget.
pub fn decompose(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    decompose_with_budget(a, MAX_SWEEPS)
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += 2.0 * m[(p, q)].norm_sqr();
        }
    }
    acc.sqrt()
}

pub fn decompose_with_budget(a: &HermitianMatrix, max_sweeps: usize) -> Result<SpectralDecomposition> {
    let n = a.n();
    let mut m = a.as_matrix().clone();
    let mut v = CMatrix::identity(n, n);
    let scale = m.norm();

    if scale > 0.0 {
        let stop = 1e-17 * scale;
        let skip = 1e-18 * scale / n as f64;
        let mut sweeps = 0;
        loop {
            let off = off_diagonal_norm(&m);
            if off <= stop {
                break;
            }
            if sweeps == max_sweeps {
                return Err(Error::ConvergenceFailure { sweeps, residual: off / scale });
            }
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q, skip);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[j]
            .abs()
            .total_cmp(&diag[i].abs())
            .then(diag[j].total_cmp(&diag[i]))
    });
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// One two-sided unitary rotation annihilating `m[p][q]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, skip: f64) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g <= skip {
        return;
    }
    let phase = apq / g;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = D R with D = diag(1, conj(phase)) on (p, q) and R the real Jacobi rotation.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase.conj() * -s;
    let g_qq = phase.conj() * c;

    let n = m.nrows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(app - t * g, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> nalgebra::DVector<Complex64> {
        self.eigenvectors.column(j).into_owned()
    }

    /// `sum_j weight(lambda_j) u_j u_j*` over the given indices.
    pub fn weighted_sum<F>(&self, indices: &[usize], weight: F) -> CMatrix
    where
        F: Fn(f64) -> f64,
    {
        let n = self.n();
        let mut out = CMatrix::zeros(n, n);
        for &j in indices {
            let w = weight(self.eigenvalues[j]);
            let u = self.eigenvectors.column(j);
            for c in 0..n {
                let uc = u[c].conj() * w;
                for r in 0..n {
                    out[(r, c)] += u[r] * uc;
                }
            }
        }
        out
    }

    /// `U diag(lambda) U*` over all eigenpairs.
    pub fn reconstruct(&self) -> CMatrix {
        let all: Vec<usize> = (0..self.n()).collect();
        self.weighted_sum(&all, |l| l)
    }

    /// `||U* U - I||_F`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n();
        (self.eigenvectors.adjoint() * &self.eigenvectors - CMatrix::identity(n, n)).norm()
    }
}

/// Keeps eigenvalues with `|lambda| > rel_tol * max|lambda|` (cutoff
/// [`ZERO_SPECTRUM_FLOOR`] when the spectrum is identically zero).
pub fn rank_profile(d: &SpectralDecomposition, rel_tol: f64) -> RankProfile {
    let largest = d.eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    let tolerance = if largest == 0.0 {
        ZERO_SPECTRUM_FLOOR
    } else {
        rel_tol * largest
    };
    let kept_indices: Vec<usize> = d
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() > tolerance)
        .map(|(i, _)| i)
        .collect();
    RankProfile { rank: kept_indices.len(), tolerance, kept_indices }
}

impl RankProfile {
    /// Forces rank `k`: keeps the `k` largest-magnitude eigenvalues regardless of size.
    pub fn pinned(d: &SpectralDecomposition, k: usize) -> Self {
        let k = k.min(d.n());
        let tolerance = if k < d.n() { d.eigenvalues[k].abs() } else { 0.0 };
        RankProfile { rank: k, tolerance, kept_indices: (0..k).collect() }
    }
}

/// A matrix together with its decomposition and rank decision.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub matrix: HermitianMatrix,
    pub decomposition: SpectralDecomposition,
    pub profile: RankProfile,
}

impl Spectrum {
    /// Decomposes `a` and applies the relative rank cutoff (`None` selects
    /// [`default_rel_tol`]).
    pub fn new(a: &HermitianMatrix, rel_tol: Option<f64>) -> Result<Self> {
        let rel_tol = rel_tol.unwrap_or_else(|| default_rel_tol(a.n()));
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("rel_tol must be positive, got {rel_tol}")));
        }
        let decomposition = decompose(a)?;
        let profile = rank_profile(&decomposition, rel_tol);
        Ok(Self { matrix: a.clone(), decomposition, profile })
    }

    /// Decomposes `a` with the rank forced to `k`.
    pub fn pinned(a: &HermitianMatrix, k: usize) -> Result<Self> {
        let decomposition = decompose(a)?;
        let profile = RankProfile::pinned(&decomposition, k);
        Ok(Self { matrix: a.clone(), decomposition, profile })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn rank(&self) -> usize {
        self.profile.rank
    }

    pub fn kept_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.profile.kept_indices.iter().map(|&i| self.decomposition.eigenvalues[i])
    }

    /// `sum_{kept} weight(lambda_j) u_j u_j*`, returned as a Hermitian matrix.
    pub fn kept_sum<F: Fn(f64) -> f64>(&self, weight: F) -> HermitianMatrix {
        let m = self.decomposition.weighted_sum(&self.profile.kept_indices, weight);
        HermitianMatrix::symmetrized(&m)
    }

    /// Orthogonal projector `A A+` onto the range.
    pub fn range_projector(&self) -> HermitianMatrix {
        self.kept_sum(|_| 1.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.decomposition.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.decomposition.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Columns `sqrt(lambda_j) u_j` for the kept eigenpairs, as a real `n x k` matrix.
    /// Only meaningful for real PSD input.
    pub fn real_square_root_factor(&self) -> DMatrix<f64> {
        let n = self.n();
        let kept = &self.profile.kept_indices;
        DMatrix::from_fn(n, kept.len(), |r, c| {
            let j = kept[c];
            self.decomposition.eigenvectors[(r, j)].re * self.decomposition.eigenvalues[j].max(0.0).sqrt()
        })
    }
}

/// `A A+` under the default rank rule.
pub fn range_projector(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(Spectrum::new(a, None)?.range_projector())
}

/// Default tolerance for [`same_kernel`].
pub const KERNEL_TOL: f64 = 1e-8;

/// Kernel equality via range projectors: `||A A+ - B B+||_F <= tol`.
pub fn same_kernel(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    check_same_dim(a, b)?;
    Ok(projector_distance(&Spectrum::new(a, None)?, &Spectrum::new(b, None)?) <= tol)
}

/// `||A A+ - B B+||_F`.
pub fn projector_distance(a: &Spectrum, b: &Spectrum) -> f64 {
    a.range_projector().frobenius_distance(&b.range_projector())
}
