//! DIMACS-style edge lists (`p edge N M`, `e U V`, 1-based), the format most
//! third-party coloring tools read.

use std::fmt::Write;

use super::{Graph, GraphError};

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for &(a, b) in g.edges() {
        writeln!(out, "e {} {}", a + 1, b + 1).unwrap();
    }
    out
}

pub fn from_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let bad = || GraphError::Parse(format!("line {}: {line:?}", lineno + 1));
        match parts.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = parts.next().ok_or_else(bad)?;
                let count: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                n = Some(count);
            }
            Some("e") => {
                let a: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let b: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                if a == 0 || b == 0 {
                    return Err(bad());
                }
                edges.push((a - 1, b - 1));
            }
            Some(_) => return Err(bad()),
        }
    }
    let n = n.ok_or_else(|| GraphError::Parse("missing problem line".into()))?;
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let text = to_dimacs(&g);
        assert!(text.starts_with("p edge 4 5\n"));
        assert_eq!(from_dimacs(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_errors() {
        let g = from_dimacs("c hello\np edge 3 1\ne 1 3\n").unwrap();
        assert!(g.has_edge(0, 2));
        assert!(from_dimacs("e 1 2\n").is_err());
        assert!(from_dimacs("p edge 2 1\ne 0 1\n").is_err());
        assert!(from_dimacs("p edge 2 1\nx\n").is_err());
    }
}
