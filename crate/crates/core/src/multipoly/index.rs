use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multi-index in `N_0^d`. Ordering is lexicographic, first entry most
/// significant, which is also the iteration order of [`IndexBox`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        assert!(!entries.is_empty(), "multi-index must have dimension >= 1");
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex::new(vec![0; dim])
    }

    /// `e_j` scaled by `k`.
    pub fn axis(dim: usize, j: usize, k: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = k;
        MultiIndex::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `|alpha|`, the sum of the entries.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn componentwise_max(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub(crate) fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.dim() });
        }
        Ok(())
    }
}

impl std::ops::Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = usize;

    fn index(&self, j: usize) -> &usize {
        &self.0[j]
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex::new(v)
    }
}

impl<const D: usize> From<[usize; D]> for MultiIndex {
    fn from(v: [usize; D]) -> Self {
        MultiIndex::new(v.to_vec())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The box `Gamma_n = { alpha : 0 <= alpha_j <= n_j }`.
///
/// Elements are addressed densely in lexicographic order (last entry
/// fastest), so a `Vec` of length [`IndexBox::len`] can carry one value
/// per element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexBox {
    bound: MultiIndex,
}

impl IndexBox {
    pub fn new(bound: impl Into<MultiIndex>) -> Self {
        IndexBox { bound: bound.into() }
    }

    pub fn bound(&self) -> &MultiIndex {
        &self.bound
    }

    pub fn dim(&self) -> usize {
        self.bound.dim()
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        alpha.le(&self.bound)
    }

    /// `prod (n_j + 1)`.
    pub fn len(&self) -> usize {
        self.bound.0.iter().map(|n| n + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dense position of `alpha`, or `None` if it lies outside the box.
    pub fn offset(&self, alpha: &MultiIndex) -> Option<usize> {
        if !self.contains(alpha) {
            return None;
        }
        let mut pos = 0;
        for (a, n) in alpha.0.iter().zip(&self.bound.0) {
            pos = pos * (n + 1) + a;
        }
        Some(pos)
    }

    /// Inverse of [`IndexBox::offset`].
    pub fn index_at(&self, mut pos: usize) -> MultiIndex {
        let mut out = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            let side = self.bound.0[j] + 1;
            out[j] = pos % side;
            pos /= side;
        }
        MultiIndex(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.len()).map(move |pos| self.index_at(pos))
    }
}
