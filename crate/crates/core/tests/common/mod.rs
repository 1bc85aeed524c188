//! Seeded random matrices with prescribed spectra, shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pseudodet::matrix::{BuildPolicy, CMatrix, HermitianMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut TestRng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_orthogonal(n: usize, rng: &mut TestRng) -> DMatrix<f64> {
    gaussian_matrix(n, n, rng).qr().q()
}

pub fn random_unitary(n: usize, rng: &mut TestRng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    g.qr().q()
}

pub fn real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `U diag(eigs) U*`, built exactly Hermitian.
pub fn with_spectrum(u: &CMatrix, eigs: &[f64]) -> HermitianMatrix {
    let n = u.nrows();
    let d = CMatrix::from_diagonal(&DVector::from_iterator(n, eigs.iter().map(|&l| Complex64::new(l, 0.0))));
    HermitianMatrix::from_matrix(u * d * u.adjoint(), BuildPolicy::Symmetrize).unwrap()
}

/// Eigenvalue magnitudes in [0.5, 2] with random signs unless `psd`.
pub fn random_spectrum(n: usize, rank: usize, psd: bool, rng: &mut TestRng) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i >= rank {
                return 0.0;
            }
            let mag = rng.random_range(0.5..2.0);
            if psd || rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

pub struct Case {
    pub a: HermitianMatrix,
    pub basis: CMatrix,
    pub eigs: Vec<f64>,
    pub rank: usize,
}

impl Case {
    /// Hermitian `U_k M U_k*` with `M` positive definite: same kernel as `a`.
    pub fn kernel_preserving_direction(&self, rng: &mut TestRng) -> HermitianMatrix {
        let k = self.rank;
        let n = self.a.n();
        let g = gaussian_matrix(k, k, rng);
        let m = &g * g.transpose() + DMatrix::identity(k, k) * 0.5;
        let uk = self.basis.columns(0, k).into_owned();
        let out = &uk * real(&m) * uk.adjoint();
        assert_eq!(out.nrows(), n);
        HermitianMatrix::from_matrix(out, BuildPolicy::Symmetrize).unwrap()
    }

    /// `(I - P) W (I - P)` for random Hermitian `W`, i.e. supported on the kernel.
    pub fn kernel_supported(&self, rng: &mut TestRng) -> HermitianMatrix {
        let n = self.a.n();
        let k = self.rank;
        let w = gaussian_matrix(n, n, rng);
        let w = real(&(&w + w.transpose()));
        let uk = self.basis.columns(0, k).into_owned();
        let p = &uk * uk.adjoint();
        let q = CMatrix::identity(n, n) - p;
        HermitianMatrix::from_matrix(&q * w * &q, BuildPolicy::Symmetrize).unwrap()
    }
}

/// Real symmetric matrix of dimension `n` and rank `rank`.
pub fn real_case(n: usize, rank: usize, psd: bool, rng: &mut TestRng) -> Case {
    let eigs = random_spectrum(n, rank, psd, rng);
    let basis = real(&random_orthogonal(n, rng));
    Case { a: with_spectrum(&basis, &eigs), basis, eigs, rank }
}

pub fn complex_case(n: usize, rank: usize, psd: bool, rng: &mut TestRng) -> Case {
    let eigs = random_spectrum(n, rank, psd, rng);
    let basis = random_unitary(n, rng);
    Case { a: with_spectrum(&basis, &eigs), basis, eigs, rank }
}

/// `count` real symmetric cases with `n` in 1..=max_n and every rank 0..=n represented.
pub fn real_corpus(count: usize, max_n: usize, psd: bool, seed: u64) -> Vec<Case> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % max_n;
            let rank = (i / max_n) % (n + 1);
            real_case(n, rank, psd, &mut rng)
        })
        .collect()
}

pub fn complex_corpus(count: usize, max_n: usize, psd: bool, seed: u64) -> Vec<Case> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % max_n;
            let rank = (i / max_n) % (n + 1);
            complex_case(n, rank, psd, &mut rng)
        })
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
