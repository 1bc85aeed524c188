use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest dimension for which minor enumeration is allowed by default.
pub const DEFAULT_MINOR_CAP: usize = 12;

/// Environment variable that overrides [`DEFAULT_MINOR_CAP`].
pub const MINOR_CAP_ENV: &str = "PSEUDODET_MINOR_CAP";

/// A `k x k` submatrix selector: sorted row and column index sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

/// Cap from [`MINOR_CAP_ENV`] if set and parseable, else the default.
pub fn minor_cap_from_env() -> usize {
    std::env::var(MINOR_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MINOR_CAP)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Number of `(rows, cols)` pairs for order `k` in dimension `n`.
pub fn minor_count(n: usize, k: usize) -> u128 {
    let c = binomial(n, k);
    c * c
}

/// Checks `k <= n` and `n <= cap`.
pub fn check_minor_budget(n: usize, k: usize, cap: usize) -> Result<()> {
    if k > n {
        return Err(Error::InvalidArgument(format!("minor order {k} exceeds dimension {n}")));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, k, count: minor_count(n, k), cap });
    }
    Ok(())
}

/// Lazily yields every `(rows, cols)` pair in lexicographic order, rows outermost.
pub fn minor_indices(n: usize, k: usize) -> impl Iterator<Item = MinorIndex> {
    let sets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let cols = sets.clone();
    sets.into_iter().flat_map(move |rows| {
        cols.clone()
            .into_iter()
            .map(move |cols| MinorIndex { rows: rows.clone(), cols })
    })
}

/// All `C(n,k)^2` minors of order `k`, subject to the dimension cap.
pub fn enumerate_minors(n: usize, k: usize, cap: usize) -> Result<Vec<MinorIndex>> {
    check_minor_budget(n, k, cap)?;
    Ok(minor_indices(n, k).collect())
}
