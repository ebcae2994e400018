use std::fmt;

use crate::error::{Error, Result};

/// Largest point count a [`SubsetId`] can address.
pub const MAX_POINTS: usize = 64;

/// A nonempty set of point indices, stored as a bit mask.
///
/// Ordering is numeric on the mask, which is the order used for witness
/// selection throughout the diameter-function checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetId(u64);

impl SubsetId {
    /// Wraps a raw mask; `None` for the empty set.
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(SubsetId(mask))
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_POINTS, "point index {i} exceeds mask width");
        SubsetId(1 << i)
    }

    pub fn pair(i: usize, j: usize) -> Self {
        SubsetId::singleton(i) | SubsetId::singleton(j)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!((1..=MAX_POINTS).contains(&n), "cannot form the full set of {n} points");
        SubsetId(u64::MAX >> (MAX_POINTS - n))
    }

    /// Builds a subset of `{0..n-1}` from indices; duplicates are ignored.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= n || i >= MAX_POINTS {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            mask |= 1 << i;
        }
        SubsetId::from_mask(mask).ok_or(Error::EmptySubset)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_POINTS && self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: SubsetId) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every nonempty subset of `{0..n-1}` in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetId> {
        assert!(n < MAX_POINTS, "cannot enumerate subsets of {n} points");
        (1u64..(1u64 << n)).map(SubsetId)
    }
}

impl std::ops::BitOr for SubsetId {
    type Output = SubsetId;

    fn bitor(self, rhs: SubsetId) -> SubsetId {
        SubsetId(self.0 | rhs.0)
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl serde::Serialize for SubsetId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
