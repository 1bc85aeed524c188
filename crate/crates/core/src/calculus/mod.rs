//! Pseudo determinant, pseudo inverse and canonical gradient, each with an independent
//! oracle (shifted-determinant limit, minor sums), plus derivative-class checks.

mod gradient;
mod minor_sums;
mod pdet;
mod pinv;

pub use gradient::{
    canonical_gradient, canonical_gradient_minor, check_class_equations, directional_derivative,
    fd_directional_derivative, pdet_differential, pinned_spectrum, trace_product, verify_uniqueness,
    ClassEquationReport, DirectionalProbe, FdScheme, GradientBundle, DEFAULT_FD_STEP,
};
pub use minor_sums::{minor_sums, MinorSums};
pub use pdet::{pdet, pdet_limit, pdet_minor, LimitEstimate, PdetMethod, PdetResult, DEFAULT_DELTAS};
pub use pinv::{penrose_residuals, pinv, pinv_berg, PinvMethod};
