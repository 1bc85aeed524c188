use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used for intermediate (not necessarily Hermitian) products.
pub type CMatrix = DMatrix<Complex64>;

/// Relative Hermitian tolerance; the absolute floor is the same value.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// What to do with input that is not exactly Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuildPolicy {
    /// Accept only matrices already Hermitian within [`HERMITIAN_TOL`].
    #[default]
    Reject,
    /// Replace the input by its Hermitian part `(M + M*) / 2`.
    Symmetrize,
}

/// A dense `n x n` Hermitian matrix.
///
/// The stored entries are exactly Hermitian: `a[i][j] == conj(a[j][i])` bit for bit and
/// the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

/// Builds a Hermitian matrix from row-major complex entries.
pub fn build_hermitian(raw: &[Vec<Complex64>], policy: BuildPolicy) -> Result<HermitianMatrix> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::InvalidArgument("matrix must have at least one row".into()));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NonSquare { rows: n, row: i, cols: row.len() });
        }
    }
    let m = CMatrix::from_fn(n, n, |i, j| raw[i][j]);
    HermitianMatrix::from_matrix(m, policy)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else if i < j {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        } else {
            ((m[(j, i)] + m[(i, j)].conj()) * 0.5).conj()
        }
    })
}

/// Largest `|m[i][j] - conj(m[j][i])|` over the matrix.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

impl HermitianMatrix {
    pub fn from_matrix(m: CMatrix, policy: BuildPolicy) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare { rows: m.nrows(), row: 0, cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidArgument("matrix must have at least one row".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        if policy == BuildPolicy::Reject {
            let deviation = hermitian_deviation(&m);
            let tolerance = HERMITIAN_TOL * max_abs(&m).max(1.0);
            if deviation > tolerance {
                return Err(Error::NotHermitian { deviation, tolerance });
            }
        }
        Ok(Self { inner: hermitian_part(&m) })
    }

    pub fn from_real(m: &DMatrix<f64>, policy: BuildPolicy) -> Result<Self> {
        Self::from_matrix(m.map(|x| Complex64::new(x, 0.0)), policy)
    }

    /// Builds from real row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>], policy: BuildPolicy) -> Result<Self> {
        let raw: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        build_hermitian(&raw, policy)
    }

    /// Hermitian part of an arbitrary square matrix; used internally on products that are
    /// Hermitian up to rounding.
    pub(crate) fn symmetrized(m: &CMatrix) -> Self {
        Self { inner: hermitian_part(m) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { inner: CMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: CMatrix::identity(n, n) }
    }

    /// The constant all-ones matrix.
    pub fn ones(n: usize) -> Self {
        Self { inner: CMatrix::from_element(n, n, Complex64::new(1.0, 0.0)) }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            inner: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.inner)
    }

    pub fn max_imag(&self) -> f64 {
        self.inner.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() == 0.0
    }

    /// Real part of the entries.
    pub fn real(&self) -> DMatrix<f64> {
        self.inner.map(|z| z.re)
    }

    pub fn imag(&self) -> DMatrix<f64> {
        self.inner.map(|z| z.im)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn frobenius_distance(&self, other: &HermitianMatrix) -> f64 {
        (&self.inner - &other.inner).norm()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.inner[(i, i)].re).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { inner: self.inner.map(|z| z * c) }
    }

    /// Row-major entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.n(), rhs.n(), "dimension mismatch in Hermitian addition");
        HermitianMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.n(), rhs.n(), "dimension mismatch in Hermitian subtraction");
        HermitianMatrix { inner: &self.inner - &rhs.inner }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, c: f64) -> HermitianMatrix {
        self.scaled(c)
    }
}

/// Returns `Err(DimensionMismatch)` unless both matrices have dimension `n`.
pub(crate) fn check_same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    Ok(())
}
