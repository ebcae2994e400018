//! Dendrograms and their correspondence with ultrametrics.
//!
//! A dendrogram here is a rooted tree whose leaves are the points `0..n` and
//! whose internal nodes carry a positive level, strictly decreasing towards
//! the leaves. It *represents* the ultrametric in which `d(x, y)` is the
//! level of the lowest common ancestor of `x` and `y`. Conversely the
//! dendrogram of a space puts `diam X` at the root and recurses into the
//! classes of `d(x, y) < diam X`, so internal levels are cluster diameters
//! and the two conversions are mutually inverse on canonical trees.
//!
//! Children are kept in canonical order, by smallest leaf.
//!
//! # Newick
//!
//! [`to_newick`] writes leaves by label (or index) and, by default, annotates
//! each internal node with its level as a node height in brackets:
//! `((0,1)[0.5],2)[1];`. With branch lengths enabled it instead writes
//! `:length` after every non-root node, the length being the parent level
//! minus the child level (leaves sit at height 0): `((0:0.5,1:0.5):0.5,2:1);`.
//! Levels are written exactly, so non-terminating values appear as `p/q`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::space::UltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dendrogram {
    Leaf {
        leaf: usize,
    },
    Node {
        level: Scalar,
        children: Vec<Dendrogram>,
    },
}

impl Dendrogram {
    pub fn leaf(point: usize) -> Self {
        Dendrogram::Leaf { leaf: point }
    }

    /// An internal node; children are put in canonical order.
    pub fn node(level: Scalar, mut children: Vec<Dendrogram>) -> Self {
        children.sort_by_key(Dendrogram::min_leaf);
        Dendrogram::Node { level, children }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Dendrogram::Leaf { leaf } => *leaf,
            Dendrogram::Node { children, .. } => {
                children.iter().map(Dendrogram::min_leaf).min().unwrap_or(usize::MAX)
            }
        }
    }

    /// Leaf points in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Dendrogram::Leaf { leaf } => out.push(*leaf),
            Dendrogram::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// The level, or 0 for a leaf.
    pub fn height(&self) -> Scalar {
        match self {
            Dendrogram::Leaf { .. } => Scalar::zero(),
            Dendrogram::Node { level, .. } => level.clone(),
        }
    }

    /// Levels of all internal nodes, in depth-first order.
    pub fn levels(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let Dendrogram::Node { level, children } = node {
                out.push(level.clone());
                stack.extend(children.iter().rev());
            }
        }
        out
    }

    /// Recursively sorts children by smallest leaf.
    pub fn canonicalize(&mut self) {
        if let Dendrogram::Node { children, .. } = self {
            for c in children.iter_mut() {
                c.canonicalize();
            }
            children.sort_by_key(Dendrogram::min_leaf);
        }
    }

    /// Checks that internal nodes have at least two children and positive,
    /// strictly decreasing levels, and that the leaves are exactly `0..n`.
    /// Returns `n`.
    pub fn validate(&self) -> Result<usize> {
        let mut leaves = Vec::new();
        self.validate_at(&mut Vec::new(), None, &mut leaves)?;
        let n = leaves.len();
        let mut seen = vec![false; n];
        for (leaf, path) in leaves {
            if leaf >= n {
                return Err(Error::InvalidDendrogram {
                    path,
                    reason: format!("leaf {leaf} outside 0..{n}"),
                });
            }
            if std::mem::replace(&mut seen[leaf], true) {
                return Err(Error::InvalidDendrogram { path, reason: format!("leaf {leaf} repeated") });
            }
        }
        Ok(n)
    }

    fn validate_at(
        &self,
        path: &mut Vec<usize>,
        parent: Option<&Scalar>,
        leaves: &mut Vec<(usize, Vec<usize>)>,
    ) -> Result<()> {
        match self {
            Dendrogram::Leaf { leaf } => leaves.push((*leaf, path.clone())),
            Dendrogram::Node { level, children } => {
                let invalid = |reason: String| Error::InvalidDendrogram { path: path.clone(), reason };
                if children.len() < 2 {
                    return Err(invalid(format!("{} children, need at least 2", children.len())));
                }
                if level.is_zero() {
                    return Err(invalid("level must be positive".into()));
                }
                if let Some(p) = parent {
                    if level >= p {
                        return Err(invalid(format!("level {level} is not below parent level {p}")));
                    }
                }
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    c.validate_at(path, Some(level), leaves)?;
                    path.pop();
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dendrogram serializes")
    }

    /// Parses the nested JSON form and canonicalizes child order.
    pub fn from_json(raw: &str) -> Result<Self> {
        let mut d: Dendrogram = serde_json::from_str(raw).map_err(|e| Error::Parse {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        d.canonicalize();
        Ok(d)
    }
}

pub fn dendrogram_from_ultrametric(s: &UltrametricSpace) -> Dendrogram {
    let points: Vec<usize> = (0..s.n()).collect();
    cluster_tree(s, &points)
}

fn cluster_tree(s: &UltrametricSpace, points: &[usize]) -> Dendrogram {
    if let [only] = points {
        return Dendrogram::leaf(*only);
    }
    let level = s.diam(points).expect("nonempty cluster");
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &p in points {
        match classes.iter_mut().find(|class| s.d(class[0], p) < &level) {
            Some(class) => class.push(p),
            None => classes.push(vec![p]),
        }
    }
    debug_assert!(classes.len() >= 2);
    let children = classes.iter().map(|class| cluster_tree(s, class)).collect();
    Dendrogram::node(level, children)
}

/// `d(x, y)` = level of the lowest common ancestor of leaves `x` and `y`.
pub fn ultrametric_from_dendrogram(d: &Dendrogram) -> Result<UltrametricSpace> {
    let n = d.validate()?;
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    fill_lca(d, &mut rows);
    let m = DistanceMatrix::from_fn(n, |i, j| rows[i][j].clone())?;
    Ok(UltrametricSpace::trusted(m))
}

fn fill_lca(d: &Dendrogram, rows: &mut [Vec<Scalar>]) {
    if let Dendrogram::Node { level, children } = d {
        let groups: Vec<Vec<usize>> = children.iter().map(Dendrogram::leaves).collect();
        for (a, ga) in groups.iter().enumerate() {
            for gb in &groups[a + 1..] {
                for &x in ga {
                    for &y in gb {
                        rows[x][y] = level.clone();
                        rows[y][x] = level.clone();
                    }
                }
            }
        }
        for c in children {
            fill_lca(c, rows);
        }
    }
}

/// Newick text; see the module docs for the two annotation schemes.
pub fn to_newick(d: &Dendrogram, labels: Option<&[String]>, branch_lengths: bool) -> String {
    let mut out = String::new();
    write_newick(d, labels, branch_lengths, None, &mut out);
    out.push(';');
    out
}

fn write_newick(
    d: &Dendrogram,
    labels: Option<&[String]>,
    branch_lengths: bool,
    parent: Option<&Scalar>,
    out: &mut String,
) {
    match d {
        Dendrogram::Leaf { leaf } => {
            let name = labels.map_or_else(|| leaf.to_string(), |l| l[*leaf].clone());
            out.push_str(&quote_newick(&name));
        }
        Dendrogram::Node { level, children } => {
            out.push('(');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_newick(c, labels, branch_lengths, Some(level), out);
            }
            out.push(')');
            if !branch_lengths {
                let _ = write!(out, "[{level}]");
            }
        }
    }
    if branch_lengths {
        if let Some(p) = parent {
            let len = p.checked_sub(&d.height()).expect("levels decrease towards the leaves");
            let _ = write!(out, ":{len}");
        }
    }
}

fn quote_newick(name: &str) -> String {
    let special = |c: char| c.is_whitespace() || "()[]':;,".contains(c);
    if name.is_empty() || name.chars().any(special) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}
