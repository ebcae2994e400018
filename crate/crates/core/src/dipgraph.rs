//! Diametrical pairs.
//!
//! In a finite ultrametric space with at least two points, the pairs at
//! distance `diam X` form a complete multipartite graph with at least two
//! parts, and every such graph arises this way. The parts are the classes of
//! the relation `d(x,y) < diam X`. Counting ordered diametrical pairs gives
//! `card dip(X) = Σ mᵢ(n − mᵢ) ≥ 2(n − 1)`, with equality exactly when one
//! point sits at distance `diam X` from all others and the rest are strictly
//! closer to each other (an apex extension).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::matrix::DistanceMatrix;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::space::UltrametricSpace;

/// Graph on the points of `s` whose edges are the diametrical pairs.
pub fn dip_graph(s: &UltrametricSpace) -> Result<SimpleGraph> {
    let n = s.n();
    if n < 2 {
        return Err(Error::DegenerateSpace { n });
    }
    let diam = s.diameter();
    let mut g = SimpleGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if s.d(u, v) == &diam {
                g.set(u, v, true);
            }
        }
    }
    Ok(g)
}

/// Evidence that a graph is not complete multipartite: `u` and `v` lie in
/// the same component of the complement but are adjacent in the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotMultipartite {
    pub u: usize,
    pub v: usize,
    pub component: Vec<usize>,
}

impl std::fmt::Display for NotMultipartite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertices {} and {} share a complement component {:?} but are adjacent",
            self.u, self.v, self.component
        )
    }
}

/// Recognizes complete multipartite graphs by checking that every connected
/// component of the complement is a clique.
pub fn is_complete_multipartite(g: &SimpleGraph) -> std::result::Result<Partition, NotMultipartite> {
    let co = g.complement();
    let components = co.components();
    for comp in &components {
        // Within a component, complement degree |comp| - 1 for every vertex
        // means the component is a clique.
        let clique = comp.iter().all(|&u| co.degree(u) == comp.len() - 1);
        if !clique {
            for (a, &u) in comp.iter().enumerate() {
                for &v in &comp[a + 1..] {
                    if !co.has_edge(u, v) {
                        return Err(NotMultipartite { u, v, component: comp.clone() });
                    }
                }
            }
            unreachable!("a non-clique component has a missing pair");
        }
    }
    Ok(Partition::new(components).expect("components partition the vertices"))
}

/// The space with distance `inner` inside parts and `outer` across parts.
/// With the defaults 1/2 and 1 its dip graph is the complete multipartite
/// graph of `p`.
pub fn ultrametric_from_partition(
    p: &Partition,
    inner: &Scalar,
    outer: &Scalar,
) -> Result<UltrametricSpace> {
    if p.k() < 2 {
        return Err(Error::UniversalRelation);
    }
    if inner.is_zero() || inner >= outer {
        return Err(Error::BadScales { inner: inner.clone(), outer: outer.clone() });
    }
    let class = p.class_of();
    let m = DistanceMatrix::from_fn(class.len(), |i, j| {
        if class[i] == class[j] {
            inner.clone()
        } else {
            outer.clone()
        }
    })?;
    Ok(UltrametricSpace::trusted(m))
}

/// Default within-part distance.
pub fn default_inner() -> Scalar {
    Scalar::ratio(1, 2)
}

/// Default cross-part distance.
pub fn default_outer() -> Scalar {
    Scalar::one()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DipReport {
    pub n: usize,
    /// Ordered pairs at distance `diam X`.
    pub dip_count: usize,
    /// Unordered diametrical pairs, i.e. edges of the dip graph.
    pub edge_count: usize,
    /// `2(n - 1)`.
    pub lower_bound: usize,
    pub equality: bool,
    /// The point at distance `diam X` from every other point, when
    /// `equality` holds. For `n = 2` the smaller index.
    pub center: Option<usize>,
    pub parts: Partition,
    pub part_sizes: Vec<usize>,
}

pub fn dip_report(s: &UltrametricSpace) -> Result<DipReport> {
    let g = dip_graph(s)?;
    let n = s.n();
    let parts = is_complete_multipartite(&g).expect("dip graphs of ultrametric spaces are complete multipartite");
    assert!(parts.k() >= 2, "dip graph collapsed to a single part");
    let part_sizes = parts.sizes();
    let edge_count = g.edge_count();
    let dip_count = 2 * edge_count;
    assert_eq!(
        dip_count,
        part_sizes.iter().map(|m| m * (n - m)).sum::<usize>(),
        "ordered dip count disagrees with the part sizes"
    );
    let lower_bound = 2 * (n - 1);
    assert!(dip_count >= lower_bound, "dip count below 2(n-1)");
    let equality = dip_count == lower_bound;
    let center = if equality {
        let c = parts
            .parts()
            .iter()
            .find(|p| p.len() == 1)
            .map(|p| p[0])
            .expect("equality forces a singleton part");
        let rest: Vec<usize> = (0..n).filter(|&i| i != c).collect();
        assert!(
            s.restrict(&rest)?.diameter() < s.diameter(),
            "points other than the center reach the diameter"
        );
        Some(c)
    } else {
        None
    };
    Ok(DipReport { n, dip_count, edge_count, lower_bound, equality, center, parts, part_sizes })
}

/// Adjoins a new point `n` at distance `t` from every point of `s`.
pub fn extend_with_apex(s: &UltrametricSpace, t: &Scalar) -> Result<UltrametricSpace> {
    insert_apex(s, t, s.n(), None)
}

/// Adjoins a point at distance `t` from every point of `s`, placed at index
/// `position`; points at or after `position` shift up by one. On a labeled
/// space the new point gets `label`, or a fresh `apex` label.
pub fn insert_apex(
    s: &UltrametricSpace,
    t: &Scalar,
    position: usize,
    label: Option<String>,
) -> Result<UltrametricSpace> {
    let n = s.n();
    if position > n {
        return Err(Error::IndexOutOfRange { index: position, n: n + 1 });
    }
    let diam = s.diameter();
    if t <= &diam {
        return Err(Error::ApexTooClose { level: t.clone(), diam });
    }
    let old = |i: usize| if i < position { i } else { i - 1 };
    let m = DistanceMatrix::from_fn(n + 1, |i, j| {
        if i == position || j == position {
            t.clone()
        } else {
            s.d(old(i), old(j)).clone()
        }
    })?;
    let labels = s.matrix().labels().map(|existing| {
        let fresh = label.unwrap_or_else(|| fresh_label(existing));
        let mut l = existing.to_vec();
        l.insert(position, fresh);
        l
    });
    UltrametricSpace::trusted(m).with_labels(labels)
}

fn fresh_label(existing: &[String]) -> String {
    let taken = |c: &str| existing.iter().any(|l| l == c);
    if !taken("apex") {
        return "apex".into();
    }
    (1..).map(|k| format!("apex_{k}")).find(|c| !taken(c)).expect("unbounded search")
}

/// A space split as an apex extension: `base` plus one point `center` at
/// distance `level` from all of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApexDecomposition {
    pub center: usize,
    pub level: Scalar,
    pub base: UltrametricSpace,
    center_label: Option<String>,
}

impl ApexDecomposition {
    /// Reassembles the original space.
    pub fn rebuild(&self) -> UltrametricSpace {
        insert_apex(&self.base, &self.level, self.center, self.center_label.clone())
            .expect("decomposition satisfies the apex preconditions")
    }
}

/// Splits off the center when `card dip(X) = 2(card X − 1)`; `None` otherwise.
pub fn apex_decomposition(s: &UltrametricSpace) -> Result<Option<ApexDecomposition>> {
    let report = dip_report(s)?;
    let Some(center) = report.center else {
        return Ok(None);
    };
    let rest: Vec<usize> = (0..s.n()).filter(|&i| i != center).collect();
    Ok(Some(ApexDecomposition {
        center,
        level: s.diameter(),
        base: s.restrict(&rest)?,
        center_label: s.matrix().labels().map(|l| l[center].clone()),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeBoundReport {
    pub n: usize,
    pub edge_count: usize,
    /// `n - 1`.
    pub bound: usize,
    pub equality: bool,
    pub star: bool,
}

/// Edge count of a complete multipartite graph against `n - 1`; equality
/// holds exactly for stars.
pub fn multipartite_edge_bound(g: &SimpleGraph, p: &Partition) -> Result<EdgeBoundReport> {
    let n = g.n();
    if p.n() != n || p.k() < 2 {
        return Err(Error::NotCompleteMultipartiteInput(None));
    }
    let expected = SimpleGraph::complete_multipartite(p);
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) != expected.has_edge(u, v) {
                return Err(Error::NotCompleteMultipartiteInput(Some((u, v))));
            }
        }
    }
    let sizes = p.sizes();
    let edge_count = sizes.iter().map(|m| m * (n - m)).sum::<usize>() / 2;
    assert_eq!(edge_count, g.edge_count());
    let bound = n - 1;
    assert!(edge_count >= bound, "complete multipartite graph below n - 1 edges");
    let equality = edge_count == bound;
    let star = p.k() == 2 && sizes.contains(&1);
    assert_eq!(equality, star, "edge bound equality must coincide with stars");
    Ok(EdgeBoundReport { n, edge_count, bound, equality, star })
}
