//! Brute-force reference implementations and seeded generators.
//!
//! The checks here take deliberately different routes from the main
//! implementations so that agreement between the two means something:
//! ultrametricity is tested through the isosceles characterization, dip
//! pairs by a plain double loop, and multipartite structure by searching set
//! partitions rather than complement components.
//!
//! All generators use ChaCha8 seeded from a `u64`, so a seed reproduces its
//! output exactly on every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::GraphChain;
use crate::dendro::{ultrametric_from_dendrogram, Dendrogram};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::matrix::DistanceMatrix;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::space::UltrametricSpace;

pub type Seed = u64;

/// Largest vertex count accepted by [`brute_multipartite_search`].
pub const PARTITION_SEARCH_CAP: usize = 12;

pub fn rng_from(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small positive rationals used as dendrogram levels: `k/d` with
/// `d ∈ {1, 2, 3, 4, 6}` and `k ≤ 4d`.
fn random_levels(count: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    let mut levels: Vec<Scalar> = Vec::with_capacity(count);
    while levels.len() < count {
        let denom = [1u64, 2, 3, 4, 6][rng.random_range(0..5)];
        let numer = rng.random_range(1..=4 * denom);
        let v = Scalar::ratio(numer, denom);
        if !levels.contains(&v) {
            levels.push(v);
        }
    }
    levels.sort_by(|a, b| b.cmp(a));
    levels
}

/// A random dendrogram on `0..n` using at most `depth` distinct levels.
pub fn random_dendrogram(n: usize, depth: usize, seed: Seed) -> Dendrogram {
    assert!(n >= 1 && depth >= 1, "need n >= 1 and depth >= 1");
    let mut rng = rng_from(seed);
    let levels = random_levels(depth, &mut rng);
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(&mut rng);
    grow(&points, 0, &levels, &mut rng)
}

fn grow(points: &[usize], idx: usize, levels: &[Scalar], rng: &mut ChaCha8Rng) -> Dendrogram {
    if let [only] = points {
        return Dendrogram::leaf(*only);
    }
    let level = levels[idx].clone();
    if idx + 1 == levels.len() {
        return Dendrogram::node(level, points.iter().map(|&p| Dendrogram::leaf(p)).collect());
    }
    let k = rng.random_range(2..=points.len().min(4));
    let mut groups: Vec<Vec<usize>> = points[..k].iter().map(|&p| vec![p]).collect();
    for &p in &points[k..] {
        groups[rng.random_range(0..k)].push(p);
    }
    let children = groups
        .iter()
        .map(|g| {
            let next = rng.random_range(idx + 1..levels.len());
            grow(g, next, levels, rng)
        })
        .collect();
    Dendrogram::node(level, children)
}

/// A random ultrametric on `n` points with at most `depth` positive distance
/// values, built through a random dendrogram.
pub fn random_ultrametric(n: usize, depth: usize, seed: Seed) -> UltrametricSpace {
    ultrametric_from_dendrogram(&random_dendrogram(n, depth, seed)).expect("generated dendrograms are valid")
}

/// A uniformly chosen class for each point, relabeled canonically. At least
/// `min_parts` parts when `n >= min_parts`.
pub fn random_partition(n: usize, max_parts: usize, min_parts: usize, rng: &mut impl Rng) -> Partition {
    assert!(n >= 1 && max_parts >= 1 && min_parts <= max_parts);
    loop {
        let classes: Vec<usize> = (0..n).map(|_| rng.random_range(0..max_parts)).collect();
        let p = Partition::from_classes(&classes);
        if p.k() >= min_parts.min(n) {
            return p;
        }
    }
}

/// Complete multipartite graph of a random partition, with one random pair
/// flipped when `perturb` is set.
pub fn random_multipartite_graph(n: usize, perturb: bool, seed: Seed) -> SimpleGraph {
    let mut rng = rng_from(seed);
    let max_parts = rng.random_range(1..=n);
    let p = random_partition(n, max_parts, 1, &mut rng);
    let mut g = SimpleGraph::complete_multipartite(&p);
    if perturb && n >= 2 {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let present = g.has_edge(u, v);
        g.set(u, v, !present);
    }
    g
}

/// A valid graph chain on `n ≥ 2` vertices built from a random sequence of
/// strict coarsenings of the discrete partition, each keeping at least two
/// parts, with random increasing levels.
pub fn random_chain(n: usize, seed: Seed) -> GraphChain {
    assert!(n >= 2, "a chain needs at least two vertices");
    let mut rng = rng_from(seed);
    let mut parts: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut partitions = vec![Partition::discrete(n)];
    while parts.len() > 2 && rng.random_bool(0.7) {
        let merges = rng.random_range(1..=parts.len() - 2);
        for _ in 0..merges {
            let a = rng.random_range(0..parts.len());
            let moved = parts.swap_remove(a);
            let b = rng.random_range(0..parts.len());
            parts[b].extend(moved);
        }
        partitions.push(Partition::new(parts.clone()).expect("merging keeps a partition"));
    }
    let mut level = Scalar::zero();
    let levels = partitions
        .iter()
        .map(|_| {
            let step = Scalar::ratio(rng.random_range(1..=6), [1, 2, 3, 4][rng.random_range(0..4)]);
            level = Scalar::new(level.as_rational() + step.as_rational()).expect("sum of nonnegatives");
            level.clone()
        })
        .collect();
    GraphChain {
        n_vertices: n,
        levels,
        graphs: partitions.iter().map(SimpleGraph::complete_multipartite).collect(),
    }
}

/// First triple `i < j < k` (lexicographic) whose two largest distances
/// differ, if any. A metric is ultrametric exactly when every triangle is
/// isosceles with the two long sides equal.
pub fn brute_isosceles_violation(m: &DistanceMatrix) -> Option<(usize, usize, usize)> {
    let n = m.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut sides = [m.get(i, j), m.get(j, k), m.get(i, k)];
                sides.sort();
                if sides[1] != sides[2] {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Ordered pairs `(x, y)` with `d(x, y) = diam X`.
pub fn brute_dip_pairs(s: &UltrametricSpace) -> Result<BTreeSet<(usize, usize)>> {
    let n = s.n();
    if n < 2 {
        return Err(Error::DegenerateSpace { n });
    }
    let mut diam = Scalar::zero();
    for x in 0..n {
        for y in 0..n {
            diam = diam.max(s.d(x, y).clone());
        }
    }
    let mut pairs = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if s.d(x, y) == &diam {
                pairs.insert((x, y));
            }
        }
    }
    Ok(pairs)
}

/// Restricted growth strings of length `n` in lexicographic order; each
/// string `a` has `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`, and the strings
/// are in bijection with the set partitions of `0..n`.
pub fn restricted_growth_strings(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (n > 0).then(|| vec![0; n]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // Advance: bump the rightmost position that may still grow.
        let a = current.as_mut().expect("checked above");
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
        }
        match (1..n).rev().find(|&i| a[i] <= prefix_max[i]) {
            Some(i) => {
                a[i] += 1;
                for x in &mut a[i + 1..] {
                    *x = 0;
                }
            }
            None => current = None,
        }
        Some(out)
    })
}

/// Every set partition of `0..n`, in restricted-growth order.
pub fn all_partitions(n: usize) -> impl Iterator<Item = Partition> {
    restricted_growth_strings(n).map(|rgs| Partition::from_classes(&rgs))
}

/// Searches the set partitions of the vertices, in restricted-growth order,
/// for one whose parts are independent and pairwise completely joined.
/// Branches are cut as soon as an assigned pair breaks either condition, so
/// the search is exhaustive without visiting every partition.
pub fn brute_multipartite_search(g: &SimpleGraph) -> Result<Option<Partition>> {
    let n = g.n();
    if n > PARTITION_SEARCH_CAP {
        return Err(Error::CapExceeded { what: "partition search", n, cap: PARTITION_SEARCH_CAP });
    }
    if n == 0 {
        return Ok(None);
    }
    let mut classes = vec![0usize; n];
    Ok(search(g, &mut classes, 1, 1).then(|| Partition::from_classes(&classes)))
}

fn search(g: &SimpleGraph, classes: &mut [usize], next: usize, blocks: usize) -> bool {
    if next == classes.len() {
        return true;
    }
    for c in 0..=blocks {
        let consistent = (0..next).all(|u| {
            let same = classes[u] == c;
            // same part ⇒ nonadjacent; different parts ⇒ adjacent
            same != g.has_edge(u, next)
        });
        if consistent {
            classes[next] = c;
            let grown = if c == blocks { blocks + 1 } else { blocks };
            if search(g, classes, next + 1, grown) {
                return true;
            }
        }
    }
    false
}
