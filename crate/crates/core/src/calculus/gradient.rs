//! The canonical gradient `can(A) = Det(A) A+`, the kernel-restricted directional
//! derivative, and the derivative class equations.

use num_complex::Complex64;

use super::minor_sums::minor_sums;
use super::pdet::pdet;
use super::pinv::pinv;
use crate::error::{Error, Result};
use crate::matrix::{check_same_dim, projector_distance, CMatrix, HermitianMatrix, Spectrum};
use crate::options::Options;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientBundle {
    pub det: f64,
    pub rank: usize,
    pub pinv: HermitianMatrix,
    pub can: HermitianMatrix,
}

pub fn canonical_gradient(spectrum: &Spectrum) -> GradientBundle {
    let det = pdet(spectrum).value;
    let pinv = pinv(spectrum);
    let can = pinv.scaled(det);
    GradientBundle { det, rank: spectrum.rank(), pinv, can }
}

/// Canonical gradient from minors: `(1/Det(A)) sum_P |det A_P|^2 embed(A_P^-1)`, with the
/// signed spectral `Det(A)` as normalizer.
pub fn canonical_gradient_minor(spectrum: &Spectrum, cap: usize) -> Result<HermitianMatrix> {
    let a = &spectrum.matrix;
    let k = spectrum.rank();
    if k == 0 {
        crate::matrix::check_minor_budget(a.n(), 0, cap)?;
        return Ok(HermitianMatrix::zeros(a.n()));
    }
    let det = pdet(spectrum).value;
    let sums = minor_sums(a, k, cap, true)?;
    let acc = sums.weighted_inverse.expect("requested weighted inverse");
    Ok(HermitianMatrix::symmetrized(&(acc / Complex64::new(det, 0.0))))
}

/// `Re tr(X Y)` without forming the product.
pub fn trace_product(x: &CMatrix, y: &CMatrix) -> f64 {
    let n = x.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc.re
}

fn kernel_checked(a: &HermitianMatrix, b: &HermitianMatrix, opts: &Options) -> Result<Spectrum> {
    check_same_dim(a, b)?;
    let sa = Spectrum::new(a, opts.rel_tol)?;
    let sb = Spectrum::new(b, opts.rel_tol)?;
    let distance = projector_distance(&sa, &sb);
    if distance > opts.kernel_tol {
        return Err(Error::KernelMismatch { distance, tolerance: opts.kernel_tol });
    }
    Ok(sa)
}

fn differential_on(spectrum: &Spectrum, direction: &HermitianMatrix) -> f64 {
    let det = pdet(spectrum).value;
    det * trace_product(pinv(spectrum).as_matrix(), direction.as_matrix())
}

/// `Det(A) tr(B A+)`, defined only when `Ker(B) = Ker(A)`.
pub fn directional_derivative(a: &HermitianMatrix, b: &HermitianMatrix, opts: &Options) -> Result<f64> {
    let sa = kernel_checked(a, b, opts)?;
    Ok(differential_on(&sa, b))
}

/// `d Det(A) = Det(A) tr(A+ dA)` for a kernel-preserving differential `dA`.
///
/// Evaluated through the same routine as [`directional_derivative`], so the two agree
/// bit for bit.
pub fn pdet_differential(a: &HermitianMatrix, da: &HermitianMatrix, opts: &Options) -> Result<f64> {
    let sa = kernel_checked(a, da, opts)?;
    Ok(differential_on(&sa, da))
}

/// A kernel-preserving direction and finite-difference step.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalProbe {
    direction: HermitianMatrix,
    step: f64,
}

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

impl DirectionalProbe {
    /// Fails with `KernelMismatch` unless `Ker(direction) = Ker(a)`.
    pub fn new(a: &HermitianMatrix, direction: HermitianMatrix, step: f64, opts: &Options) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
        }
        kernel_checked(a, &direction, opts)?;
        Ok(Self { direction, step })
    }

    pub fn direction(&self) -> &HermitianMatrix {
        &self.direction
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdScheme {
    #[default]
    Central,
    Forward,
}

/// Spectrum of `a` with rank forced to `k`; fails with `RankDrift` if the rank rule would
/// have chosen differently.
pub fn pinned_spectrum(a: &HermitianMatrix, k: usize, rel_tol: Option<f64>) -> Result<Spectrum> {
    let free = Spectrum::new(a, rel_tol)?;
    if free.rank() != k {
        return Err(Error::RankDrift { expected: k, found: free.rank() });
    }
    let mut pinned = free;
    pinned.profile = crate::matrix::RankProfile::pinned(&pinned.decomposition, k);
    Ok(pinned)
}

/// Finite-difference estimate of the directional derivative along the probe, with the
/// rank of every perturbed matrix pinned to `rank(A)`.
pub fn fd_directional_derivative(
    probe: &DirectionalProbe,
    a: &HermitianMatrix,
    scheme: FdScheme,
    opts: &Options,
) -> Result<f64> {
    check_same_dim(a, &probe.direction)?;
    let base = Spectrum::new(a, opts.rel_tol)?;
    let k = base.rank();
    let tau = probe.step;
    let step = probe.direction.scaled(tau);
    let plus = pdet(&pinned_spectrum(&(a + &step), k, opts.rel_tol)?).value;
    match scheme {
        FdScheme::Central => {
            let minus = pdet(&pinned_spectrum(&(a - &step), k, opts.rel_tol)?).value;
            Ok((plus - minus) / (2.0 * tau))
        }
        FdScheme::Forward => Ok((plus - pdet(&base).value) / tau),
    }
}

/// Residuals of `A G = A A+ Det(A)` and `G A = A+ A Det(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEquationReport {
    pub lhs1: CMatrix,
    pub rhs1: CMatrix,
    pub lhs2: CMatrix,
    pub rhs2: CMatrix,
    pub residual1: f64,
    pub residual2: f64,
    pub passed: bool,
}

pub fn check_class_equations(
    a: &HermitianMatrix,
    g: &HermitianMatrix,
    tol: f64,
    opts: &Options,
) -> Result<ClassEquationReport> {
    check_same_dim(a, g)?;
    let s = Spectrum::new(a, opts.rel_tol)?;
    Ok(class_report(&s, g, tol))
}

fn class_report(s: &Spectrum, g: &HermitianMatrix, tol: f64) -> ClassEquationReport {
    let a = s.matrix.as_matrix();
    let det = Complex64::new(pdet(s).value, 0.0);
    let p = pinv(s);
    let p = p.as_matrix();
    let g = g.as_matrix();
    let lhs1 = a * g;
    let rhs1 = (a * p) * det;
    let lhs2 = g * a;
    let rhs2 = (p * a) * det;
    let residual1 = (&lhs1 - &rhs1).norm();
    let residual2 = (&lhs2 - &rhs2).norm();
    ClassEquationReport {
        passed: residual1.max(residual2) <= tol,
        lhs1,
        rhs1,
        lhs2,
        rhs2,
        residual1,
        residual2,
    }
}

/// True iff `G` solves the class equations (at `opts.class_tol`) and shares the kernel of
/// `A`; by uniqueness such a `G` is `can(A)`.
pub fn verify_uniqueness(a: &HermitianMatrix, g: &HermitianMatrix, opts: &Options) -> Result<bool> {
    check_same_dim(a, g)?;
    let sa = Spectrum::new(a, opts.rel_tol)?;
    if !class_report(&sa, g, opts.class_tol).passed {
        return Ok(false);
    }
    let sg = Spectrum::new(g, opts.rel_tol)?;
    Ok(projector_distance(&sa, &sg) <= opts.kernel_tol)
}
