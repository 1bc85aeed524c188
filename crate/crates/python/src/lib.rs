//! Python bindings. Matrices cross the boundary as nested lists of floats, with an
//! optional imaginary part for complex Hermitian input.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pseudodet::calculus::{self, DirectionalProbe, FdScheme, PdetMethod, PinvMethod};
use pseudodet::gaussian::{self, Dataset, MleMode};
use pseudodet::matrix::{self, BuildPolicy, CMatrix, Spectrum};
use pseudodet::{Error, Options};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pseudodet, PseudodetError, PyValueError, "Base class for library errors.");
create_exception!(pseudodet, KernelMismatchError, PseudodetError, "Direction does not preserve the kernel.");
create_exception!(pseudodet, NumericalError, PseudodetError, "Numerical or precondition failure.");

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::KernelMismatch { .. } => KernelMismatchError::new_err(msg),
        Error::NonSquare { .. }
        | Error::NotHermitian { .. }
        | Error::DimensionMismatch { .. }
        | Error::EmptyDataset
        | Error::InvalidArgument(_) => PseudodetError::new_err(msg),
        _ => NumericalError::new_err(msg),
    }
}

type PyRes<T> = Result<T, PyErr>;

fn rows_to_real(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, Error> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(format!("ragged rows: {} vs {cols} entries", bad.len())));
    }
    Ok(DMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

fn real_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Assemble a Hermitian matrix from real and optional imaginary parts.
pub fn hermitian_from_parts(
    real: &[Vec<f64>],
    imag: Option<&[Vec<f64>]>,
    policy: BuildPolicy,
) -> Result<matrix::HermitianMatrix, Error> {
    let re = rows_to_real(real)?;
    let im = match imag {
        Some(rows) => {
            let im = rows_to_real(rows)?;
            if im.shape() != re.shape() {
                return Err(Error::InvalidArgument(format!(
                    "imaginary part is {:?}, real part is {:?}",
                    im.shape(),
                    re.shape()
                )));
            }
            im
        }
        None => DMatrix::zeros(re.nrows(), re.ncols()),
    };
    let m = CMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
    matrix::HermitianMatrix::from_matrix(m, policy)
}

fn policy(symmetrize: bool) -> BuildPolicy {
    if symmetrize {
        BuildPolicy::Symmetrize
    } else {
        BuildPolicy::Reject
    }
}

fn options(rel_tol: Option<f64>) -> Options {
    match rel_tol {
        Some(t) => Options::default().with_rel_tol(t),
        None => Options::default(),
    }
}

/// Hermitian matrix, validated on construction.
#[pyclass(name = "HermitianMatrix", module = "pseudodet", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyHermitian {
    inner: matrix::HermitianMatrix,
}

impl From<matrix::HermitianMatrix> for PyHermitian {
    fn from(inner: matrix::HermitianMatrix) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyHermitian {
    #[new]
    #[pyo3(signature = (real, imag=None, symmetrize=false))]
    fn new(real: Vec<Vec<f64>>, imag: Option<Vec<Vec<f64>>>, symmetrize: bool) -> PyRes<Self> {
        hermitian_from_parts(&real, imag.as_deref(), policy(symmetrize)).map(Self::from).map_err(to_py)
    }

    #[staticmethod]
    fn zeros(n: usize) -> Self {
        matrix::HermitianMatrix::zeros(n).into()
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        matrix::HermitianMatrix::identity(n).into()
    }

    #[staticmethod]
    fn ones(n: usize) -> Self {
        matrix::HermitianMatrix::ones(n).into()
    }

    #[staticmethod]
    fn diag(values: Vec<f64>) -> Self {
        matrix::HermitianMatrix::diag(&values).into()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn real(&self) -> Vec<Vec<f64>> {
        real_to_rows(&self.inner.real())
    }

    #[getter]
    fn imag(&self) -> Vec<Vec<f64>> {
        real_to_rows(&self.inner.imag())
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    fn scaled(&self, c: f64) -> Self {
        self.inner.scaled(c).into()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn distance(&self, other: &PyHermitian) -> f64 {
        self.inner.frobenius_distance(&other.inner)
    }

    /// Eigenvalues sorted by magnitude, largest first.
    fn eigenvalues(&self) -> PyRes<Vec<f64>> {
        Ok(matrix::decompose(&self.inner).map_err(to_py)?.eigenvalues.as_slice().to_vec())
    }

    #[pyo3(signature = (rel_tol=None))]
    fn rank(&self, rel_tol: Option<f64>) -> PyRes<usize> {
        Ok(spectrum(&self.inner, rel_tol)?.rank())
    }

    fn __add__(&self, other: &PyHermitian) -> PyRes<Self> {
        check_dims(&self.inner, &other.inner)?;
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &PyHermitian) -> PyRes<Self> {
        check_dims(&self.inner, &other.inner)?;
        Ok((&self.inner - &other.inner).into())
    }

    fn __repr__(&self) -> String {
        if self.inner.is_real() {
            format!("HermitianMatrix({:?})", self.real())
        } else {
            format!("HermitianMatrix({:?}, imag={:?})", self.real(), self.imag())
        }
    }
}

fn check_dims(a: &matrix::HermitianMatrix, b: &matrix::HermitianMatrix) -> PyRes<()> {
    if a.n() != b.n() {
        return Err(to_py(Error::DimensionMismatch { expected: a.n(), found: b.n() }));
    }
    Ok(())
}

fn spectrum(a: &matrix::HermitianMatrix, rel_tol: Option<f64>) -> PyRes<Spectrum> {
    Spectrum::new(a, rel_tol).map_err(to_py)
}

/// Pseudo determinant: product of the non-zero eigenvalues (1 for the zero matrix).
/// `method` is "spectral", "limit" or "minor"; the minor form returns |Det|.
#[pyfunction]
#[pyo3(signature = (a, method="spectral", rel_tol=None, minor_cap=matrix::DEFAULT_MINOR_CAP))]
fn pdet(a: &PyHermitian, method: &str, rel_tol: Option<f64>, minor_cap: usize) -> PyRes<f64> {
    let s = spectrum(&a.inner, rel_tol)?;
    match method.parse::<PdetMethod>().map_err(to_py)? {
        PdetMethod::Spectral => Ok(calculus::pdet(&s).value),
        PdetMethod::Limit => {
            let seq = calculus::pdet_limit(&a.inner, s.rank(), &calculus::DEFAULT_DELTAS).map_err(to_py)?;
            Ok(seq.last().map_or(f64::NAN, |e| e.value))
        }
        PdetMethod::Minor => calculus::pdet_minor(&a.inner, s.rank(), minor_cap).map_err(to_py),
    }
}

/// `(delta, estimate)` pairs of `det(A + delta I) / delta^(n - k)`.
#[pyfunction]
#[pyo3(signature = (a, deltas=None, rel_tol=None))]
fn pdet_limit(a: &PyHermitian, deltas: Option<Vec<f64>>, rel_tol: Option<f64>) -> PyRes<Vec<(f64, f64)>> {
    let s = spectrum(&a.inner, rel_tol)?;
    let deltas = deltas.unwrap_or_else(|| calculus::DEFAULT_DELTAS.to_vec());
    let seq = calculus::pdet_limit(&a.inner, s.rank(), &deltas).map_err(to_py)?;
    Ok(seq.iter().map(|e| (e.delta, e.value)).collect())
}

/// Moore-Penrose pseudo inverse; `method` is "spectral" or "berg".
#[pyfunction]
#[pyo3(signature = (a, method="spectral", rel_tol=None, minor_cap=matrix::DEFAULT_MINOR_CAP))]
fn pinv(a: &PyHermitian, method: &str, rel_tol: Option<f64>, minor_cap: usize) -> PyRes<PyHermitian> {
    let s = spectrum(&a.inner, rel_tol)?;
    let p = match method.parse::<PinvMethod>().map_err(to_py)? {
        PinvMethod::Spectral => calculus::pinv(&s),
        PinvMethod::Berg => calculus::pinv_berg(&a.inner, s.rank(), minor_cap).map_err(to_py)?,
    };
    Ok(p.into())
}

/// Relative residuals of the four Penrose conditions for `x` as a pseudo inverse of `a`.
#[pyfunction]
fn penrose_residuals(a: &PyHermitian, x: &PyHermitian) -> PyRes<[f64; 4]> {
    check_dims(&a.inner, &x.inner)?;
    Ok(calculus::penrose_residuals(&a.inner, x.inner.as_matrix()))
}

/// Dict with `det`, `rank`, `pinv` and `can = det * pinv`.
#[pyfunction]
#[pyo3(signature = (a, rel_tol=None))]
fn canonical_gradient<'py>(py: Python<'py>, a: &PyHermitian, rel_tol: Option<f64>) -> PyRes<Bound<'py, PyDict>> {
    let b = calculus::canonical_gradient(&spectrum(&a.inner, rel_tol)?);
    let d = PyDict::new(py);
    d.set_item("det", b.det)?;
    d.set_item("rank", b.rank)?;
    d.set_item("pinv", PyHermitian::from(b.pinv))?;
    d.set_item("can", PyHermitian::from(b.can))?;
    Ok(d)
}

/// `Det(A) tr(B A+)`; raises `KernelMismatchError` unless `b` has the kernel of `a`.
#[pyfunction]
#[pyo3(signature = (a, b, rel_tol=None))]
fn directional_derivative(a: &PyHermitian, b: &PyHermitian, rel_tol: Option<f64>) -> PyRes<f64> {
    calculus::directional_derivative(&a.inner, &b.inner, &options(rel_tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, da, rel_tol=None))]
fn pdet_differential(a: &PyHermitian, da: &PyHermitian, rel_tol: Option<f64>) -> PyRes<f64> {
    calculus::pdet_differential(&a.inner, &da.inner, &options(rel_tol)).map_err(to_py)
}

/// Finite-difference derivative of the pseudo determinant along `b` with rank pinned.
#[pyfunction]
#[pyo3(signature = (a, b, tau=calculus::DEFAULT_FD_STEP, forward=false, rel_tol=None))]
fn fd_directional_derivative(a: &PyHermitian, b: &PyHermitian, tau: f64, forward: bool, rel_tol: Option<f64>) -> PyRes<f64> {
    let opts = options(rel_tol);
    let probe = DirectionalProbe::new(&a.inner, b.inner.clone(), tau, &opts).map_err(to_py)?;
    let scheme = if forward { FdScheme::Forward } else { FdScheme::Central };
    calculus::fd_directional_derivative(&probe, &a.inner, scheme, &opts).map_err(to_py)
}

/// Dict with the residuals of `A G = A A+ Det(A)` and `G A = A+ A Det(A)` and `passed`.
#[pyfunction]
#[pyo3(signature = (a, g, tol=1e-9, rel_tol=None))]
fn check_class_equations<'py>(
    py: Python<'py>,
    a: &PyHermitian,
    g: &PyHermitian,
    tol: f64,
    rel_tol: Option<f64>,
) -> PyRes<Bound<'py, PyDict>> {
    let r = calculus::check_class_equations(&a.inner, &g.inner, tol, &options(rel_tol)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("residual1", r.residual1)?;
    d.set_item("residual2", r.residual2)?;
    d.set_item("passed", r.passed)?;
    Ok(d)
}

/// True iff `g` solves the class equations and has the same kernel as `a`.
#[pyfunction]
#[pyo3(signature = (a, g, rel_tol=None))]
fn verify_uniqueness(a: &PyHermitian, g: &PyHermitian, rel_tol: Option<f64>) -> PyRes<bool> {
    calculus::verify_uniqueness(&a.inner, &g.inner, &options(rel_tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=matrix::KERNEL_TOL))]
fn same_kernel(a: &PyHermitian, b: &PyHermitian, tol: f64) -> PyRes<bool> {
    matrix::same_kernel(&a.inner, &b.inner, tol).map_err(to_py)
}

fn dataset(rows: &[Vec<f64>]) -> PyRes<Dataset> {
    Dataset::from_rows(rows).map_err(to_py)
}

/// Gaussian with a possibly singular covariance, supported on `mean + range(cov)`.
#[pyclass(name = "GaussianModel", module = "pseudodet", frozen)]
pub struct PyGaussian {
    inner: gaussian::GaussianModel,
}

#[pymethods]
impl PyGaussian {
    #[new]
    #[pyo3(signature = (mean, cov, rel_tol=None, support_tol=gaussian::SUPPORT_TOL))]
    fn new(mean: Vec<f64>, cov: &PyHermitian, rel_tol: Option<f64>, support_tol: f64) -> PyRes<Self> {
        let model = gaussian::GaussianModel::new(DVector::from_vec(mean), cov.inner.clone(), rel_tol).map_err(to_py)?;
        Ok(Self { inner: model.with_support_tol(support_tol) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn pdet(&self) -> f64 {
        self.inner.pdet()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean().as_slice().to_vec()
    }

    #[getter]
    fn cov(&self) -> PyHermitian {
        self.inner.cov().clone().into()
    }

    #[getter]
    fn pinv(&self) -> Vec<Vec<f64>> {
        real_to_rows(self.inner.pinv())
    }

    #[getter]
    fn projector(&self) -> Vec<Vec<f64>> {
        real_to_rows(self.inner.projector())
    }

    /// Log density at `x`; `-inf` off the support.
    fn log_density(&self, x: Vec<f64>) -> PyRes<f64> {
        Ok(gaussian::log_density(&DVector::from_vec(x), &self.inner).map_err(to_py)?.value)
    }

    fn density(&self, x: Vec<f64>) -> PyRes<f64> {
        Ok(self.log_density(x)?.exp())
    }

    fn is_on_support(&self, x: Vec<f64>) -> PyRes<bool> {
        let x = DVector::from_vec(x);
        if x.len() != self.inner.dim() {
            return Err(to_py(Error::DimensionMismatch { expected: self.inner.dim(), found: x.len() }));
        }
        Ok(self.inner.is_on_support(&(x - self.inner.mean())))
    }

    /// Sum of log densities over the rows of `data`.
    fn log_likelihood(&self, data: Vec<Vec<f64>>) -> PyRes<f64> {
        Ok(gaussian::log_likelihood(&dataset(&data)?, &self.inner).map_err(to_py)?.value)
    }

    /// `count` seeded draws, one row per sample.
    #[pyo3(signature = (count, seed=0))]
    fn sample(&self, count: usize, seed: u64) -> PyRes<Vec<Vec<f64>>> {
        let data = gaussian::sample_degenerate(&self.inner, count, seed).map_err(to_py)?;
        Ok(real_to_rows(data.as_matrix()))
    }
}

/// Covariance MLE `R / N`, or `P (R / N) P` when a range projector is given.
#[pyfunction]
#[pyo3(signature = (data, mean=None, projector=None))]
fn mle_covariance(data: Vec<Vec<f64>>, mean: Option<Vec<f64>>, projector: Option<&PyHermitian>) -> PyRes<PyHermitian> {
    let data = dataset(&data)?;
    let mu = mean.map_or_else(|| DVector::zeros(data.dim()), DVector::from_vec);
    let mode = match projector {
        Some(p) => MleMode::FixedRange(p.inner.clone()),
        None => MleMode::KernelFree,
    };
    Ok(gaussian::mle_covariance(&data, &mu, &mode).map_err(to_py)?.into())
}

/// Norm of the log-likelihood gradient restricted to the range of `sigma`.
#[pyfunction]
#[pyo3(signature = (sigma, data, mean=None, rel_tol=None))]
fn projected_gradient_norm(sigma: &PyHermitian, data: Vec<Vec<f64>>, mean: Option<Vec<f64>>, rel_tol: Option<f64>) -> PyRes<f64> {
    let data = dataset(&data)?;
    let mu = mean.map_or_else(|| DVector::zeros(data.dim()), DVector::from_vec);
    let r = gaussian::residual_matrix(&data, &mu).map_err(to_py)?;
    gaussian::projected_gradient_norm(&sigma.inner, &r, &options(rel_tol)).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "pseudodet")]
fn pseudodet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PseudodetError", py.get_type::<PseudodetError>())?;
    m.add("KernelMismatchError", py.get_type::<KernelMismatchError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_class::<PyHermitian>()?;
    m.add_class::<PyGaussian>()?;
    m.add_function(wrap_pyfunction!(pdet, m)?)?;
    m.add_function(wrap_pyfunction!(pdet_limit, m)?)?;
    m.add_function(wrap_pyfunction!(pinv, m)?)?;
    m.add_function(wrap_pyfunction!(penrose_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(directional_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(pdet_differential, m)?)?;
    m.add_function(wrap_pyfunction!(fd_directional_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(check_class_equations, m)?)?;
    m.add_function(wrap_pyfunction!(verify_uniqueness, m)?)?;
    m.add_function(wrap_pyfunction!(same_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(mle_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(projected_gradient_norm, m)?)?;
    Ok(())
}
