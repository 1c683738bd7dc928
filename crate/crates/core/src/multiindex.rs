//! The spectral index set `ℕⁿ`: levels, eigenvalues and dyadic blocks.
//!
//! Enumeration is lexicographic within a level and level-major across levels,
//! which fixes the layout of every coefficient table and CSV in the crate.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A multi-index `μ = (μ₁, …, μₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(entries: &[u32]) -> Self {
        assert!(!entries.is_empty(), "multi-index needs dimension >= 1");
        MultiIndex(SmallVec::from_slice(entries))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|μ| = Σ μᵢ`.
    pub fn level(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    /// Eigenvalue `2|μ| + n` of the Hermite operator on `Φ_μ`.
    pub fn eigenvalue(&self) -> u64 {
        2 * self.level() + self.dim() as u64
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

pub fn eigenvalue(mu: &MultiIndex) -> u64 {
    mu.eigenvalue()
}

/// Eigenvalue shared by every index on level `k` in dimension `n`.
pub fn level_eigenvalue(n: usize, k: u64) -> u64 {
    2 * k + n as u64
}

/// Binomial coefficient, exact for the ranges used here.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of indices on level `k`: `C(k+n−1, n−1)`.
pub fn level_count(n: usize, k: u64) -> u64 {
    assert!(n >= 1);
    binomial(k + n as u64 - 1, n as u64 - 1)
}

/// Number of indices with level at most `k`: `C(k+n, n)`.
pub fn count_up_to(n: usize, k: u64) -> u64 {
    binomial(k + n as u64, n as u64)
}

/// All `μ` with `|μ| = k`, in lexicographic order.
pub fn enumerate_level(n: usize, k: u64) -> Vec<MultiIndex> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(level_count(n, k) as usize);
    let mut buf: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
    fill_level(&mut buf, 0, k, &mut out);
    out
}

fn fill_level(buf: &mut SmallVec<[u32; 4]>, pos: usize, remaining: u64, out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining as u32;
        out.push(MultiIndex(buf.clone()));
        return;
    }
    for first in 0..=remaining {
        buf[pos] = first as u32;
        fill_level(buf, pos + 1, remaining - first, out);
    }
}

/// Position of `μ` within [`enumerate_level`]`(n, |μ|)`.
pub fn rank_in_level(mu: &MultiIndex) -> u64 {
    let n = mu.dim();
    let mut remaining = mu.level();
    let mut rank = 0;
    for (pos, &m) in mu.entries()[..n - 1].iter().enumerate() {
        let rest = n - pos - 1;
        for first in 0..m as u64 {
            rank += level_count(rest, remaining - first);
        }
        remaining -= m as u64;
    }
    rank
}

/// Dyadic block containing eigenvalue `λ`: the `j ≥ −1` with `2^j < λ ≤ 2^{j+1}`.
pub fn block_of_eigenvalue(lambda: u64) -> i32 {
    assert!(lambda >= 1);
    (64 - (lambda - 1).leading_zeros()) as i32 - 1
}

pub fn block_of_level(n: usize, k: u64) -> i32 {
    block_of_eigenvalue(level_eigenvalue(n, k))
}

/// Levels `k` whose eigenvalue `2k+n` lies in `(2^j, 2^{j+1}]`; `None` for an empty block.
pub fn block_level_range(n: usize, j: i32) -> Option<RangeInclusive<u64>> {
    assert!(j >= -1, "blocks start at j = -1");
    let n = n as i64;
    // 2^{j+1} as an integer (j + 1 >= 0)
    let upper = 1i64 << (j + 1);
    if upper < n {
        return None;
    }
    let k_max = (upper - n) / 2;
    let k_min = if j < 0 {
        0
    } else {
        let lower = 1i64 << j;
        if lower < n {
            0
        } else {
            (lower - n) / 2 + 1
        }
    };
    (k_min <= k_max).then(|| k_min as u64..=k_max as u64)
}

/// All `μ ∈ ℕⁿ` with `2^j < 2|μ|+n ≤ 2^{j+1}`, level-major then lexicographic.
pub fn block_indices(n: usize, j: i32) -> Vec<MultiIndex> {
    match block_level_range(n, j) {
        None => Vec::new(),
        Some(levels) => levels.flat_map(|k| enumerate_level(n, k)).collect(),
    }
}

/// Number of indices in block `j` without enumerating them.
pub fn block_cardinality(n: usize, j: i32) -> u64 {
    match block_level_range(n, j) {
        None => 0,
        Some(levels) => {
            let (lo, hi) = (*levels.start(), *levels.end());
            let below = if lo == 0 { 0 } else { count_up_to(n, lo - 1) };
            count_up_to(n, hi) - below
        }
    }
}
