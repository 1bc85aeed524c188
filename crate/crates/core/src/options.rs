use crate::matrix::{DEFAULT_MINOR_CAP, KERNEL_TOL};

/// Tolerances shared by the calculus and Gaussian layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Relative eigenvalue cutoff for rank decisions; `None` means `1e-12 * n`.
    pub rel_tol: Option<f64>,
    /// Range-projector distance below which two kernels count as equal.
    pub kernel_tol: f64,
    /// Residual bound for the derivative class equations.
    pub class_tol: f64,
    /// Largest dimension accepted by the minor-sum oracles.
    pub minor_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            rel_tol: None,
            kernel_tol: KERNEL_TOL,
            class_tol: 1e-9,
            minor_cap: DEFAULT_MINOR_CAP,
        }
    }
}

impl Options {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = Some(rel_tol);
        self
    }

    pub fn with_minor_cap(mut self, cap: usize) -> Self {
        self.minor_cap = cap;
        self
    }
}
