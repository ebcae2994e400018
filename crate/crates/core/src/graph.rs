//! Simple undirected graphs on `0..n`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<bool>,
}

impl SimpleGraph {
    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        SimpleGraph { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set(u, v, true);
            }
        }
        g
    }

    /// Complete multipartite graph: edges are exactly the cross-part pairs.
    pub fn complete_multipartite(p: &Partition) -> Self {
        let class = p.class_of();
        let n = class.len();
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if class[u] != class[v] {
                    g.set(u, v, true);
                }
            }
        }
        g
    }

    /// Builds a graph from unordered pairs. Loops, duplicates (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            g.set(u, v, true);
        }
        Ok(g)
    }

    pub(crate) fn set(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v);
        self.adj[u * self.n + v] = present;
        self.adj[v * self.n + u] = present;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u * self.n + v]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..self.n).filter(|&v| self.has_edge(u, v)).count()
    }

    /// Same vertices; the edges are the nonadjacent distinct pairs.
    pub fn complement(&self) -> Self {
        let mut g = SimpleGraph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                g.set(u, v, !self.has_edge(u, v));
            }
        }
        g
    }

    /// True if every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.n == other.n && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    #[allow(clippy::needless_range_loop)]
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..self.n {
                    if !seen[v] && self.has_edge(u, v) {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() };
        serde_json::to_string(&doc).expect("graph serializes")
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(raw).map_err(|e| Error::Parse {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        doc.into_graph()
    }

    /// Graphviz rendering. Vertices are named by index and shown with
    /// `labels` when given; each part of `parts` becomes a same-rank cluster.
    pub fn to_dot(&self, labels: Option<&[String]>, parts: Option<&Partition>) -> String {
        let mut out = String::from("graph G {\n");
        let vertex_line = |out: &mut String, indent: &str, v: usize| {
            let label = labels.map_or_else(|| v.to_string(), |l| l[v].clone());
            let _ = writeln!(out, "{indent}{v} [label=\"{}\"];", escape_dot(&label));
        };
        match parts {
            Some(p) => {
                for (k, part) in p.parts().iter().enumerate() {
                    let _ = writeln!(out, "  subgraph cluster_{k} {{");
                    out.push_str("    rank=same;\n");
                    for &v in part {
                        vertex_line(&mut out, "    ", v);
                    }
                    out.push_str("  }\n");
                }
            }
            None => {
                for v in 0..self.n {
                    vertex_line(&mut out, "  ", v);
                }
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Wire form `{ "n": int, "edges": [[u, v], ..] }` with `u < v`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDoc {
    pub fn into_graph(self) -> Result<SimpleGraph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        SimpleGraph::from_edges(self.n, &edges)
    }
}

impl From<&SimpleGraph> for GraphDoc {
    fn from(g: &SimpleGraph) -> Self {
        GraphDoc { n: g.n(), edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }
}
