use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::likelihood::Dataset;
use super::model::GaussianModel;
use crate::error::{Error, Result};

/// Draws `x_i = mu + U_k Lambda_k^{1/2} z_i` with `z_i ~ N(0, I_k)` from a ChaCha8 stream
/// seeded by `seed`. Identical inputs produce identical samples.
pub fn sample_degenerate(model: &GaussianModel, count: usize, seed: u64) -> Result<Dataset> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor = model.factor();
    let k = factor.ncols();
    let n = model.dim();
    let mut out = DMatrix::zeros(count, n);
    for i in 0..count {
        let z = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        let x = model.mean() + factor * z;
        out.set_row(i, &x.transpose());
    }
    Dataset::from_matrix(out)
}
