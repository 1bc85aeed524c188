//! Sums over all `k x k` minors, shared by the minor-sum determinant and pseudo inverse.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::{check_minor_budget, minor_indices, CMatrix, HermitianMatrix};

/// `sum_P |det A_P|^2` and `sum_P |det A_P|^2 embed(A_P^-1)`.
///
/// `embed` writes the inverse of the `(rows, cols)` minor into the `(cols, rows)` block of
/// an `n x n` zero matrix. Singular minors contribute nothing. Summation order is the
/// lexicographic minor order.
#[derive(Debug, Clone)]
pub struct MinorSums {
    pub weight_total: f64,
    pub weighted_inverse: Option<CMatrix>,
    pub minors_visited: usize,
    pub singular_skipped: usize,
}

pub fn minor_sums(a: &HermitianMatrix, k: usize, cap: usize, with_inverse: bool) -> Result<MinorSums> {
    let n = a.n();
    check_minor_budget(n, k, cap)?;
    let m = a.as_matrix();
    let mut weight_total = 0.0;
    let mut acc = with_inverse.then(|| CMatrix::zeros(n, n));
    let mut visited = 0;
    let mut skipped = 0;

    if k == 0 {
        return Ok(MinorSums { weight_total: 1.0, weighted_inverse: acc, minors_visited: 1, singular_skipped: 0 });
    }

    for p in minor_indices(n, k) {
        visited += 1;
        let sub = CMatrix::from_fn(k, k, |i, j| m[(p.rows[i], p.cols[j])]);
        let lu = sub.lu();
        let det = lu.determinant();
        let w = det.norm_sqr();
        if w == 0.0 {
            skipped += 1;
            continue;
        }
        if let Some(acc) = acc.as_mut() {
            let Some(inv) = lu.try_inverse() else {
                skipped += 1;
                continue;
            };
            let w = Complex64::new(w, 0.0);
            for (i, &c) in p.cols.iter().enumerate() {
                for (j, &r) in p.rows.iter().enumerate() {
                    acc[(c, r)] += inv[(i, j)] * w;
                }
            }
        }
        weight_total += w;
    }
    Ok(MinorSums { weight_total, weighted_inverse: acc, minors_visited: visited, singular_skipped: skipped })
}
