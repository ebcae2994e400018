//! Threshold-graph chains.
//!
//! An ultrametric with spectrum `0 < a₁ < … < aₙ` is the same thing as a
//! chain of complete multipartite graphs `G₁ ⊋ G₂ ⊋ … ⊋ Gₙ` on its points,
//! with `G₁` complete and `Gₙ` nonempty, via
//! `{x, y} ∈ E(Gᵢ) ⇔ ρ(x, y) ≥ aᵢ`.
//!
//! Graph indices in [`ChainError`] are 1-based, matching `G₁ … Gₙ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dipgraph::{is_complete_multipartite, NotMultipartite};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::space::UltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphChain {
    pub n_vertices: usize,
    /// `a₁ < … < aₙ`, all positive.
    pub levels: Vec<Scalar>,
    /// `G₁ … Gₙ`, all on `n_vertices` vertices.
    pub graphs: Vec<SimpleGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum ChainError {
    /// No graphs, or a different number of levels than graphs.
    Malformed { graphs: usize, levels: usize },
    /// Graph `index` is not on `n_vertices` vertices.
    VertexCountMismatch { index: usize, n: usize },
    /// Level `index` is not positive, or not above level `index - 1`.
    LevelsNotIncreasing { index: usize },
    /// More graphs than `n_vertices - 1`.
    TooLong { len: usize, n_vertices: usize },
    /// `G₁` misses the pair `(u, v)`.
    NotComplete { u: usize, v: usize },
    /// `Gₙ` has no edges.
    EmptyTop { index: usize },
    NotMultipartite { index: usize, witness: NotMultipartite },
    /// Edge `(u, v)` of `G_{index+1}` is missing from `G_index`.
    NotNested { index: usize, u: usize, v: usize },
    /// `G_{index+1}` has the same edges as `G_index`.
    NotProperSubset { index: usize },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::Malformed { graphs, levels } => {
                write!(f, "{graphs} graphs with {levels} levels")
            }
            ChainError::VertexCountMismatch { index, n } => {
                write!(f, "G{index} has {n} vertices")
            }
            ChainError::LevelsNotIncreasing { index } => {
                write!(f, "level a{index} is not positive and strictly increasing")
            }
            ChainError::TooLong { len, n_vertices } => {
                write!(f, "{len} graphs exceed card X - 1 for {n_vertices} vertices")
            }
            ChainError::NotComplete { u, v } => write!(f, "G1 is not complete: missing ({u},{v})"),
            ChainError::EmptyTop { index } => write!(f, "G{index} has no edges"),
            ChainError::NotMultipartite { index, witness } => {
                write!(f, "G{index} is not complete multipartite: {witness}")
            }
            ChainError::NotNested { index, u, v } => {
                write!(f, "edge ({u},{v}) of G{} is not in G{index}", index + 1)
            }
            ChainError::NotProperSubset { index } => {
                write!(f, "G{} has the same edges as G{index}", index + 1)
            }
        }
    }
}

/// The space on the distinct `values` (sorted, labeled by their decimal or
/// `p/q` text) with `d(x, y) = max(x, y)` for `x ≠ y`. Its spectrum is
/// exactly `values`.
pub fn realize_spectrum(values: &[Scalar]) -> Result<UltrametricSpace> {
    let mut points = values.to_vec();
    points.sort();
    points.dedup();
    if points.first().is_none_or(|v| !v.is_zero()) {
        return Err(Error::MissingZero);
    }
    let labels = Some(points.iter().map(Scalar::to_string).collect());
    let m = DistanceMatrix::from_fn(points.len(), |i, j| points[i].clone().max(points[j].clone()))?
        .with_labels(labels)?;
    Ok(UltrametricSpace::trusted(m))
}

/// Checks, in order: shape, levels, length, `G₁` complete, `Gₙ` nonempty,
/// then for each `i` that `Gᵢ` is complete multipartite and that
/// `E(Gᵢ₊₁) ⊊ E(Gᵢ)`.
pub fn validate_chain(c: &GraphChain) -> std::result::Result<(), ChainError> {
    let len = c.graphs.len();
    if len == 0 || c.levels.len() != len {
        return Err(ChainError::Malformed { graphs: len, levels: c.levels.len() });
    }
    for (i, g) in c.graphs.iter().enumerate() {
        if g.n() != c.n_vertices {
            return Err(ChainError::VertexCountMismatch { index: i + 1, n: g.n() });
        }
    }
    let mut previous = Scalar::zero();
    for (i, level) in c.levels.iter().enumerate() {
        if level <= &previous {
            return Err(ChainError::LevelsNotIncreasing { index: i + 1 });
        }
        previous = level.clone();
    }
    if len + 1 > c.n_vertices {
        return Err(ChainError::TooLong { len, n_vertices: c.n_vertices });
    }
    let first = &c.graphs[0];
    for u in 0..c.n_vertices {
        for v in u + 1..c.n_vertices {
            if !first.has_edge(u, v) {
                return Err(ChainError::NotComplete { u, v });
            }
        }
    }
    if c.graphs[len - 1].edge_count() == 0 {
        return Err(ChainError::EmptyTop { index: len });
    }
    for (i, g) in c.graphs.iter().enumerate() {
        if let Err(witness) = is_complete_multipartite(g) {
            return Err(ChainError::NotMultipartite { index: i + 1, witness });
        }
        if let Some(next) = c.graphs.get(i + 1) {
            if let Some((u, v)) = next.edges().into_iter().find(|&(u, v)| !g.has_edge(u, v)) {
                return Err(ChainError::NotNested { index: i + 1, u, v });
            }
            if next.edge_count() == g.edge_count() {
                return Err(ChainError::NotProperSubset { index: i + 1 });
            }
        }
    }
    Ok(())
}

/// `ρ(x, y)` is the level of the deepest graph containing `{x, y}`.
///
/// Ultrametric because each `Gᵢ` is complete multipartite: if `ρ(x, z) = aᵢ`
/// then `x` and `z` lie in different parts of `Gᵢ`, so every `y` is adjacent
/// in `Gᵢ` to `x` or to `z`.
pub fn ultrametric_from_chain(c: &GraphChain) -> Result<UltrametricSpace> {
    validate_chain(c)?;
    let m = DistanceMatrix::from_fn(c.n_vertices, |x, y| {
        let deepest = c
            .graphs
            .iter()
            .rposition(|g| g.has_edge(x, y))
            .expect("G1 is complete");
        c.levels[deepest].clone()
    })?;
    let space = crate::space::certify_ultrametric(m)
        .unwrap_or_else(|v| panic!("chain construction produced a non-ultrametric: {v}"));
    Ok(space)
}

/// The chain of threshold graphs `Gᵢ = {{x, y} : ρ(x, y) ≥ aᵢ}` over the
/// positive spectrum values.
pub fn chain_from_ultrametric(s: &UltrametricSpace) -> Result<GraphChain> {
    let n = s.n();
    if n < 2 {
        return Err(Error::DegenerateSpace { n });
    }
    let levels: Vec<Scalar> = s.spectrum().into_iter().skip(1).collect();
    assert!(
        levels.len() < n,
        "{} positive distances on {n} points: an ultrametric has at most n - 1",
        levels.len()
    );
    let graphs = levels
        .iter()
        .map(|a| {
            let mut g = SimpleGraph::empty(n);
            for x in 0..n {
                for y in x + 1..n {
                    if s.d(x, y) >= a {
                        g.set(x, y, true);
                    }
                }
            }
            g
        })
        .collect();
    let chain = GraphChain { n_vertices: n, levels, graphs };
    debug_assert_eq!(validate_chain(&chain), Ok(()));
    Ok(chain)
}

/// Wire form `{ "n_vertices": int, "levels": [..], "graphs": [[[u, v], ..], ..] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainDoc {
    n_vertices: usize,
    levels: Vec<Scalar>,
    graphs: Vec<Vec<[usize; 2]>>,
}

impl GraphChain {
    pub fn to_json(&self) -> String {
        let doc = ChainDoc {
            n_vertices: self.n_vertices,
            levels: self.levels.clone(),
            graphs: self
                .graphs
                .iter()
                .map(|g| g.edges().into_iter().map(|(u, v)| [u, v]).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("chain serializes")
    }

    /// Parses the wire form. Graph well-formedness (loops, duplicates, range)
    /// is checked here; chain conditions are left to [`validate_chain`].
    pub fn from_json(raw: &str) -> Result<Self> {
        let doc: ChainDoc = serde_json::from_str(raw).map_err(|e| Error::Parse {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        let graphs = doc
            .graphs
            .iter()
            .map(|edges| {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|&[u, v]| (u, v)).collect();
                SimpleGraph::from_edges(doc.n_vertices, &pairs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphChain { n_vertices: doc.n_vertices, levels: doc.levels, graphs })
    }
}
