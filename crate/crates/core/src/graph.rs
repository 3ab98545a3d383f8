//! Weighted undirected simple graphs and the edge-list text format.
//!
//! ```text
//! # comment
//! 3
//! 0 1 1
//! 1 2 2.5
//! ```
//!
//! The first non-comment line is the vertex count, every following line is
//! `u v w`. Blank lines and lines starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{HcError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// An immutable weighted undirected graph on vertices `0..n`.
///
/// Edges are stored with `u < v`, sorted by `(u, v)`, at most one per pair,
/// with strictly positive finite weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut canon = Vec::new();
        let mut seen = HashSet::new();
        for (u, v, w) in edges {
            let e = canonical_edge(n, u, v, w).map_err(HcError::InvalidGraph)?;
            if !seen.insert((e.u, e.v)) {
                return Err(HcError::InvalidGraph(format!("duplicate edge {} {}", e.u, e.v)));
            }
            canon.push(e);
        }
        Ok(Self::from_canonical(n, canon))
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    fn from_canonical(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| (e.u, e.v));
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(x, _)| x);
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `v` with edge weights, sorted by neighbour id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Weight of the edge `{u, v}`, or 0 when absent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        match self.adj[u].binary_search_by_key(&v, |&(x, _)| x) {
            Ok(i) => self.adj[u][i].1,
            Err(_) => 0.0,
        }
    }

    /// Total weight of edges with exactly one endpoint flagged in `side`.
    pub fn cut_weight(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .map(|e| e.w)
            .sum()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for &(y, _) in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices`; local vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &(x, w) in &self.adj[v] {
                let j = local[x];
                if j != usize::MAX && i < j {
                    edges.push(Edge { u: i, v: j, w });
                }
            }
        }
        Self::from_canonical(vertices.len(), edges)
    }

    /// Same graph with one more edge; fails if the pair is already present.
    pub fn with_edge(&self, u: usize, v: usize, w: f64) -> Result<Graph> {
        Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|e| (e.u, e.v, e.w))
                .chain(std::iter::once((u, v, w))),
        )
    }

    /// Serialize to the edge-list format; weights use shortest round-trip decimals.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
        }
        out
    }
}

fn canonical_edge(n: usize, u: usize, v: usize, w: f64) -> std::result::Result<Edge, String> {
    if u >= n || v >= n {
        return Err(format!("vertex index out of range in edge {u} {v} (n = {n})"));
    }
    if u == v {
        return Err(format!("self-loop at vertex {u}"));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(format!("non-positive or non-finite weight {w}"));
    }
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    Ok(Edge { u, v, w })
}

/// Parse the edge-list text format. Errors carry 1-based line numbers.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| HcError::Parse { line: line_no, msg };
        let Some(count) = n else {
            let value = line
                .parse::<usize>()
                .map_err(|_| err(format!("expected vertex count, got {line:?}")))?;
            n = Some(value);
            continue;
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected \"u v w\", got {line:?}")));
        }
        let u = fields[0]
            .parse::<usize>()
            .map_err(|_| err(format!("bad vertex {:?}", fields[0])))?;
        let v = fields[1]
            .parse::<usize>()
            .map_err(|_| err(format!("bad vertex {:?}", fields[1])))?;
        let w = fields[2]
            .parse::<f64>()
            .map_err(|_| err(format!("bad weight {:?}", fields[2])))?;
        let e = canonical_edge(count, u, v, w).map_err(err)?;
        if !seen.insert((e.u, e.v)) {
            return Err(err(format!("duplicate edge {} {}", e.u, e.v)));
        }
        edges.push(e);
    }
    let n = n.ok_or(HcError::Parse { line: 0, msg: "missing vertex count".into() })?;
    Ok(Graph::from_canonical(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path() {
        let g = parse_edge_list("3\n0 1 1\n1 2 1").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn parses_fractional_weight_and_comments() {
        let g = parse_edge_list("# header\n2\n\n# edge\n1 0 2.5\n").unwrap();
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 2.5 }]);
    }

    #[test]
    fn duplicate_edge_reports_line() {
        match parse_edge_list("3\n0 1 1\n1 0 1") {
            Err(HcError::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_lines() {
        let line_of = |text: &str| match parse_edge_list(text) {
            Err(HcError::Parse { line, .. }) => line,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(line_of("2\n0 2 1"), 2);
        assert_eq!(line_of("2\n0 1 0"), 2);
        assert_eq!(line_of("2\n0 1 -1"), 2);
        assert_eq!(line_of("2\n0 0 1"), 2);
        assert_eq!(line_of("2\n0 1"), 2);
        assert_eq!(line_of("x"), 1);
        assert_eq!(line_of("2\n# c\n0 1 abc"), 3);
    }

    #[test]
    fn total_weight_examples() {
        let k3 = Graph::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(k3.total_weight(), 3.0);
        assert_eq!(Graph::empty(5).total_weight(), 0.0);
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::new(5, [(0, 3, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 3], vec![1, 2], vec![4]]);
        let h = g.induced(&[2, 1, 4]);
        assert_eq!(h.edges(), &[Edge { u: 0, v: 1, w: 2.0 }]);
        assert_eq!(g.weight(2, 1), 2.0);
        assert_eq!(g.weight(0, 1), 0.0);
    }
}
