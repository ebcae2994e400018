//! Certified ultrametric spaces and the basic quantities on them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::subset::SubsetId;

/// A triple `(x, y, z)` with `d(x,z) > d(x,y) ∨ d(y,z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub d_xz: Scalar,
    pub d_xy: Scalar,
    pub d_yz: Scalar,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d({x},{z}) = {} > d({x},{y}) ∨ d({y},{z}) = {} ∨ {}",
            self.d_xz,
            self.d_xy,
            self.d_yz,
            x = self.x,
            y = self.y,
            z = self.z
        )
    }
}

/// A distance matrix that passed the ultrametric inequality on every triple.
///
/// The only ways to obtain one are [`certify_ultrametric`] and constructions
/// inside this crate that preserve the inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricSpace {
    matrix: DistanceMatrix,
}

/// Checks `d(x,z) ≤ d(x,y) ∨ d(y,z)` over all ordered triples and returns the
/// lexicographically first `(x, y, z)` that fails.
#[allow(clippy::result_large_err)]
pub fn certify_ultrametric(m: DistanceMatrix) -> std::result::Result<UltrametricSpace, Violation> {
    let n = m.n();
    for x in 0..n {
        for y in 0..n {
            let d_xy = m.get(x, y);
            for z in 0..n {
                let d_xz = m.get(x, z);
                let d_yz = m.get(y, z);
                if d_xz > d_xy.max(d_yz) {
                    return Err(Violation {
                        x,
                        y,
                        z,
                        d_xz: d_xz.clone(),
                        d_xy: d_xy.clone(),
                        d_yz: d_yz.clone(),
                    });
                }
            }
        }
    }
    Ok(UltrametricSpace { matrix: m })
}

impl UltrametricSpace {
    /// Wraps a matrix that is ultrametric by construction. Debug builds still
    /// verify it.
    pub(crate) fn trusted(matrix: DistanceMatrix) -> Self {
        debug_assert!(certify_ultrametric(matrix.clone()).is_ok(), "construction broke the ultrametric inequality");
        UltrametricSpace { matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DistanceMatrix {
        self.matrix
    }

    pub fn d(&self, i: usize, j: usize) -> &Scalar {
        self.matrix.get(i, j)
    }

    /// Replaces point labels; distances are untouched.
    pub fn with_labels(self, labels: Option<Vec<String>>) -> Result<Self> {
        Ok(UltrametricSpace { matrix: self.matrix.with_labels(labels)? })
    }

    /// Diameter of a set of points, 0 for a singleton.
    pub fn diam(&self, subset: &[usize]) -> Result<Scalar> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let n = self.n();
        if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        let mut best = Scalar::zero();
        for (k, &i) in subset.iter().enumerate() {
            for &j in &subset[k + 1..] {
                if self.d(i, j) > &best {
                    best = self.d(i, j).clone();
                }
            }
        }
        Ok(best)
    }

    pub(crate) fn diam_of(&self, subset: SubsetId) -> Scalar {
        let points = subset.indices();
        self.diam(&points).expect("subset within range")
    }

    /// Diameter of the whole space.
    pub fn diameter(&self) -> Scalar {
        let n = self.n();
        let mut best = Scalar::zero();
        for i in 0..n {
            for j in i + 1..n {
                if self.d(i, j) > &best {
                    best = self.d(i, j).clone();
                }
            }
        }
        best
    }

    /// Distinct distance values in increasing order; always starts with 0.
    pub fn spectrum(&self) -> Vec<Scalar> {
        let n = self.n();
        let mut values = vec![Scalar::zero()];
        for i in 0..n {
            for j in i + 1..n {
                values.push(self.d(i, j).clone());
            }
        }
        values.sort();
        values.dedup();
        values
    }

    /// Classes of the relation `d(x,y) < diam X`.
    ///
    /// The relation is an equivalence on any ultrametric space with at least
    /// two points; classes are found from each unassigned point and then
    /// checked against every cross-class pair.
    #[allow(clippy::needless_range_loop)]
    pub fn equiv_partition(&self) -> Result<Partition> {
        let n = self.n();
        if n < 2 {
            return Err(Error::DegenerateSpace { n });
        }
        let diam = self.diameter();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            for y in x..n {
                if y == x || self.d(x, y) < &diam {
                    class[y] = next;
                }
            }
            next += 1;
        }
        for x in 0..n {
            for y in x + 1..n {
                let related = self.d(x, y) < &diam;
                assert_eq!(
                    related,
                    class[x] == class[y],
                    "relation d < diam is not transitive at ({x},{y}); the space is not ultrametric"
                );
            }
        }
        Ok(Partition::from_classes(&class))
    }

    /// The subspace on `points`, renumbered `0..points.len()` in the given
    /// order. Labels follow their points.
    pub fn restrict(&self, points: &[usize]) -> Result<UltrametricSpace> {
        let n = self.n();
        if points.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; n];
        for &i in points {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!("point {i} listed twice")));
            }
        }
        Ok(UltrametricSpace { matrix: self.matrix.submatrix(points) })
    }
}
