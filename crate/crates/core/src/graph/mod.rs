//! Simple undirected graphs with optional face lists, colorings, and the exact
//! coloring oracle used as ground truth everywhere else in the crate.
//!
//! Nothing in this module knows about parity sequences or fans.

mod dimacs;
mod dot;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dimacs::{from_dimacs, to_dimacs};
pub use dot::{to_dot, DotStyle};
pub use oracle::{
    chromatic_number_upto4, count_colorings, find_coloring, k_colorable, ChromaticBound, Mode, Oracle,
    OracleBudget, OracleOutcome, OracleRun,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("edge endpoint {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("face {face} is malformed: {reason}")]
    BadFace { face: usize, reason: String },
    #[error("Euler check failed: V - E + F = {0}, expected 2")]
    Euler(i64),
    #[error("coloring covers {got} vertices, graph has {n}")]
    PartialColoring { got: usize, n: usize },
    #[error("color {color} outside palette 1..={palette}")]
    BadColor { color: u8, palette: u8 },
    #[error("palette size {0} unsupported")]
    BadPalette(u8),
    #[error("instance with {n} vertices exceeds the oracle budget of {limit} for {mode} mode")]
    BudgetExceeded { n: usize, limit: usize, mode: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Undirected simple graph. Edges are stored with `u < v` in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    faces: Option<Vec<Vec<usize>>>,
    labels: BTreeMap<usize, String>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::ParallelEdge(e.0, e.1));
            }
            adj[a].push(b);
            adj[b].push(a);
            list.push(e);
        }
        Ok(Graph { n, edges: list, adj, faces: None, labels: BTreeMap::new() })
    }

    /// Attach a face list. Every face must be a cycle of existing edges and the
    /// counts must satisfy V - E + F = 2.
    pub fn with_faces(mut self, faces: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(GraphError::BadFace { face: fi, reason: format!("length {}", face.len()) });
            }
            let distinct: BTreeSet<_> = face.iter().collect();
            if distinct.len() != face.len() {
                return Err(GraphError::BadFace { face: fi, reason: "repeated vertex".into() });
            }
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                if !self.has_edge(a, b) {
                    return Err(GraphError::BadFace { face: fi, reason: format!("missing edge {a}-{b}") });
                }
            }
        }
        let euler = self.n as i64 - self.edges.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::Euler(euler));
        }
        self.faces = Some(faces);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels.insert(v, label.into());
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].contains(&b)
    }

    pub fn faces(&self) -> Option<&[Vec<usize>]> {
        self.faces.as_deref()
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Connected, at least three vertices, and no articulation point.
    pub fn is_biconnected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0; self.n];
        let mut timer = 0;
        // iterative DFS: (vertex, parent, next neighbour index)
        let mut stack = vec![(0usize, usize::MAX, 0usize)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        let mut root_children = 0;
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, parent, idx) = stack[top];
            if idx < self.adj[v].len() {
                stack[top].2 += 1;
                let u = self.adj[v][idx];
                if disc[u] == usize::MAX {
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if u != parent {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= disc[p] {
                        return false;
                    }
                }
            }
        }
        root_children <= 1
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            faces: self.faces.clone(),
            labels: if self.labels.is_empty() { None } else { Some(self.labels.clone()) },
        }
    }
}

/// Wire form of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<usize, String>>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        let mut g = Graph::new(j.n, j.edges.into_iter().map(|[a, b]| (a, b)))?;
        if let Some(faces) = j.faces {
            g = g.with_faces(faces)?;
        }
        if let Some(labels) = j.labels {
            if let Some(&v) = labels.keys().find(|&&v| v >= j.n) {
                return Err(GraphError::VertexOutOfRange { v, n: j.n });
            }
            g = g.with_labels(labels);
        }
        Ok(g)
    }
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        g.to_json()
    }
}

/// Vertex colors drawn from `1..=palette`, palette 3 or 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring {
    pub palette: u8,
    pub colors: Vec<u8>,
}

impl Coloring {
    pub fn new(palette: u8, colors: Vec<u8>) -> Result<Self, GraphError> {
        if !(2..=4).contains(&palette) {
            return Err(GraphError::BadPalette(palette));
        }
        if let Some(&color) = colors.iter().find(|&&c| c == 0 || c > palette) {
            return Err(GraphError::BadColor { color, palette });
        }
        Ok(Coloring { palette, colors })
    }

    pub fn get(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Relabel colors through `perm`, where `perm[c - 1]` is the new name of `c`.
    pub fn permuted(&self, perm: &[u8]) -> Coloring {
        Coloring { palette: self.palette, colors: self.colors.iter().map(|&c| perm[c as usize - 1]).collect() }
    }

    /// Canonical representative under color permutation: first appearance order.
    pub fn normalized(&self) -> Coloring {
        let mut map = [0u8; 5];
        let mut next = 1;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if map[c as usize] == 0 {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            })
            .collect();
        Coloring { palette: self.palette, colors }
    }
}

/// True iff no edge is monochromatic.
pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool, GraphError> {
    if c.colors.len() != g.vertex_count() {
        return Err(GraphError::PartialColoring { got: c.colors.len(), n: g.vertex_count() });
    }
    Ok(g.edges().iter().all(|&(a, b)| c.colors[a] != c.colors[b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_multi_edges() {
        assert_eq!(Graph::new(2, [(0, 0)]).unwrap_err(), GraphError::Loop(0));
        assert_eq!(Graph::new(2, [(0, 1), (1, 0)]).unwrap_err(), GraphError::ParallelEdge(0, 1));
        assert_eq!(Graph::new(2, [(0, 2)]).unwrap_err(), GraphError::VertexOutOfRange { v: 2, n: 2 });
    }

    #[test]
    fn proper_checks() {
        let t = triangle();
        assert!(is_proper(&t, &Coloring::new(3, vec![1, 2, 3]).unwrap()).unwrap());
        let e = Graph::new(2, [(0, 1)]).unwrap();
        assert!(!is_proper(&e, &Coloring::new(3, vec![1, 1]).unwrap()).unwrap());
        assert_eq!(
            is_proper(&t, &Coloring::new(3, vec![1, 2]).unwrap()).unwrap_err(),
            GraphError::PartialColoring { got: 2, n: 3 }
        );
    }

    #[test]
    fn euler_check_on_faces() {
        let t = triangle().with_faces(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(t.faces().unwrap().len(), 2);
        assert_eq!(triangle().with_faces(vec![vec![0, 1, 2]]).unwrap_err(), GraphError::Euler(1));
    }

    #[test]
    fn biconnectivity() {
        assert!(triangle().is_biconnected());
        // two triangles glued at vertex 2
        let bowtie = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(bowtie.is_connected());
        assert!(!bowtie.is_biconnected());
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!path.is_biconnected());
    }

    #[test]
    fn json_roundtrip() {
        let mut g = triangle().with_faces(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        g.set_label(0, "inner");
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: Graph = serde_json::from_str::<GraphJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn coloring_normalization() {
        let c = Coloring::new(3, vec![3, 1, 3, 2]).unwrap();
        assert_eq!(c.normalized().colors, vec![1, 2, 1, 3]);
        assert_eq!(c.permuted(&[2, 3, 1]).colors, vec![1, 2, 1, 3]);
        assert!(Coloring::new(3, vec![4]).is_err());
    }
}
