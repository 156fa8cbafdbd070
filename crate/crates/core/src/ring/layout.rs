use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RingError;
use crate::graph::Graph;
use crate::parity::collapse_cyclic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FanKind {
    /// Base edges on the inner cycle, apex on the outer cycle.
    A,
    /// Base edges on the outer cycle, apex on the inner cycle.
    B,
}

impl FanKind {
    pub fn flip(self) -> FanKind {
        match self {
            FanKind::A => FanKind::B,
            FanKind::B => FanKind::A,
        }
    }
}

/// Symbolic ring: alternating runs starting with `first`, with no simplicity
/// requirements. Collapsed intermediate rings may have 2 fans or cycles shorter than
/// three; the vertex numbering is still well defined.
///
/// Vertex numbering: inner cycle positions `0..inner_len`, then outer positions.
/// The walk starts on the spoke joining inner 0 and outer 0; A-runs advance along
/// the inner cycle, B-runs along the outer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingLayout {
    pub runs: Vec<u32>,
    pub first: FanKind,
    starts: Vec<(usize, usize)>,
    inner_len: usize,
    outer_len: usize,
}

/// Result of deleting an even fan's interior and identifying its two neighbouring
/// apexes. `vertex_map[v]` is the image of original vertex `v`, `None` if deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanCollapse {
    pub ring: RingLayout,
    pub vertex_map: Vec<Option<usize>>,
}

impl RingLayout {
    pub fn new(runs: Vec<u32>, first: FanKind) -> Self {
        let mut starts = Vec::with_capacity(runs.len());
        let (mut a, mut b) = (0usize, 0usize);
        let mut kind = first;
        for &r in &runs {
            starts.push((a, b));
            match kind {
                FanKind::A => a += r as usize,
                FanKind::B => b += r as usize,
            }
            kind = kind.flip();
        }
        RingLayout { runs, first, starts, inner_len: a, outer_len: b }
    }

    pub fn fan_count(&self) -> usize {
        self.runs.len()
    }

    pub fn inner_len(&self) -> usize {
        self.inner_len
    }

    pub fn outer_len(&self) -> usize {
        self.outer_len
    }

    pub fn vertex_count(&self) -> usize {
        self.inner_len + self.outer_len
    }

    pub fn kind(&self, t: usize) -> FanKind {
        if t.is_multiple_of(2) {
            self.first
        } else {
            self.first.flip()
        }
    }

    pub fn inner(&self, a: usize) -> usize {
        a % self.inner_len
    }

    pub fn outer(&self, b: usize) -> usize {
        self.inner_len + b % self.outer_len
    }

    pub fn apex(&self, t: usize) -> usize {
        let (a, b) = self.starts[t];
        match self.kind(t) {
            FanKind::A => self.outer(b),
            FanKind::B => self.inner(a),
        }
    }

    /// Base path of fan `t`, from the apex of fan `t-1` to the apex of fan `t+1`.
    pub fn base_path(&self, t: usize) -> Vec<usize> {
        let (a, b) = self.starts[t];
        let r = self.runs[t] as usize;
        match self.kind(t) {
            FanKind::A => (0..=r).map(|s| self.inner(a + s)).collect(),
            FanKind::B => (0..=r).map(|s| self.outer(b + s)).collect(),
        }
    }

    /// Triangles in walk order, each listed counter-clockwise.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for t in 0..self.runs.len() {
            let (a, b) = self.starts[t];
            for s in 0..self.runs[t] as usize {
                out.push(match self.kind(t) {
                    FanKind::A => [self.inner(a + s), self.outer(b), self.inner(a + s + 1)],
                    FanKind::B => [self.outer(b + s), self.outer(b + s + 1), self.inner(a)],
                });
            }
        }
        out
    }

    /// Explicit graph with faces (triangles, inner face, outer face) and
    /// inner/outer labels. Fails for layouts that are not simple plane graphs.
    pub fn to_graph(&self) -> Result<Graph, RingError> {
        let (ni, no) = (self.inner_len, self.outer_len);
        if ni < 3 || no < 3 || self.runs.len() < 4 {
            return Err(RingError::Unrealizable(format!(
                "{} fans, |C_i| = {ni}, |C_o| = {no}",
                self.runs.len()
            )));
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        edges.extend((0..ni).map(|a| (self.inner(a), self.inner(a + 1))));
        edges.extend((0..no).map(|b| (self.outer(b), self.outer(b + 1))));
        let tris = self.triangles();
        // the spoke leaving each triangle, plus the initial one
        edges.push((self.inner(0), self.outer(0)));
        for tri in &tris {
            let spoke = (tri[1], tri[2]);
            let spoke = if spoke.0 < ni { spoke } else { (spoke.1, spoke.0) };
            if spoke.0 < ni && spoke.1 >= ni && !(spoke == (self.inner(0), self.outer(0))) {
                edges.push(spoke);
            }
        }
        let mut faces: Vec<Vec<usize>> = tris.iter().map(|t| t.to_vec()).collect();
        faces.push((0..ni).collect());
        faces.push((0..no).rev().map(|b| self.outer(b)).collect());
        let labels: BTreeMap<usize, String> = (0..ni)
            .map(|v| (v, "inner".to_string()))
            .chain((ni..ni + no).map(|v| (v, "outer".to_string())))
            .collect();
        let g = Graph::new(ni + no, edges).map_err(|e| RingError::Unrealizable(e.to_string()))?;
        Ok(g.with_faces(faces)?.with_labels(labels))
    }

    /// Delete the interior of even fan `j` and identify the apexes of `j-1` and
    /// `j+1`. Needs at least four fans.
    pub fn fan_collapse(&self, j: usize) -> Result<FanCollapse, RingError> {
        let len = self.runs.len();
        if j >= len {
            return Err(RingError::IndexOutOfRange { index: j, len });
        }
        if !self.runs[j].is_multiple_of(2) {
            return Err(RingError::NotEvenFan { index: j });
        }
        if len < 4 {
            return Err(RingError::TooFewFans(len));
        }
        #[derive(Clone, Copy)]
        enum Slot {
            Old(usize),
            Merged,
        }
        let slots: Vec<Slot> = (0..len).map(Slot::Old).collect();
        let new_slots = collapse_cyclic(&slots, j, |_, _| Slot::Merged);
        let new_runs = collapse_cyclic(&self.runs, j, |p, n| p + n);
        let first = match new_slots[0] {
            Slot::Old(t) => self.kind(t),
            Slot::Merged => self.kind((j + 1) % len),
        };
        let ring = RingLayout::new(new_runs, first);

        let mut map: Vec<Option<usize>> = vec![None; self.vertex_count()];
        let mut bind = |old: usize, new: usize| -> Result<(), RingError> {
            match map[old] {
                Some(prev) if prev != new => Err(RingError::InternalInconsistency(format!(
                    "vertex {old} maps to both {prev} and {new}"
                ))),
                _ => {
                    map[old] = Some(new);
                    Ok(())
                }
            }
        };
        let prev = (j + len - 1) % len;
        let next = (j + 1) % len;
        for (p, slot) in new_slots.iter().enumerate() {
            let (old_path, old_apexes) = match *slot {
                Slot::Old(t) => (self.base_path(t), vec![self.apex(t)]),
                Slot::Merged => {
                    let mut path = self.base_path(prev);
                    path.extend(self.base_path(next).into_iter().skip(1));
                    (path, vec![self.apex(prev), self.apex(next)])
                }
            };
            let new_path = ring.base_path(p);
            if old_path.len() != new_path.len() {
                return Err(RingError::InternalInconsistency(format!(
                    "fan {p}: base path lengths {} vs {}",
                    old_path.len(),
                    new_path.len()
                )));
            }
            for (o, n) in old_path.into_iter().zip(new_path) {
                bind(o, n)?;
            }
            for o in old_apexes {
                bind(o, ring.apex(p))?;
            }
        }
        let removed = self.base_path(j);
        for &v in &removed[1..removed.len() - 1] {
            if map[v].is_some() {
                return Err(RingError::InternalInconsistency(format!("interior vertex {v} of fan {j} survived")));
            }
        }
        Ok(FanCollapse { ring, vertex_map: map })
    }
}

#[cfg(test)]
mod tests {
    use super::super::RingCode;
    use super::*;

    #[test]
    fn octahedron_realization() {
        let g = "1,1,1,1,1,1".parse::<RingCode>().unwrap().realize();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.faces().unwrap().len(), 8);
        assert!((0..6).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn even_square_realization() {
        let c: RingCode = "2,2,2,2".parse().unwrap();
        let g = c.realize();
        assert_eq!((c.inner_len(), c.outer_len()), (4, 4));
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.faces().unwrap().len(), 10);
        assert_eq!(g.faces().unwrap().iter().filter(|f| f.len() == 3).count(), 8);
    }

    #[test]
    fn fan_apexes_form_the_fan_cycle() {
        let c: RingCode = "2,1,3,2,1,1".parse().unwrap();
        let l = c.layout();
        let g = c.realize();
        for t in 0..l.fan_count() {
            let next = (t + 1) % l.fan_count();
            assert!(g.has_edge(l.apex(t), l.apex(next)));
            let path = l.base_path(t);
            assert_eq!(path[0], l.apex((t + l.fan_count() - 1) % l.fan_count()));
            assert_eq!(*path.last().unwrap(), l.apex(next));
            for &v in &path {
                assert!(v == l.apex(t) || g.has_edge(v, l.apex(t)));
            }
        }
    }

    #[test]
    fn collapse_merges_neighbours() {
        let c: RingCode = "2,1,2,3".parse().unwrap();
        let fc = c.fan_collapse(0).unwrap();
        assert_eq!(fc.ring.runs, vec![4, 2]);
        assert_eq!(fc.ring.first, FanKind::B);
        let l = c.layout();
        assert_eq!(fc.vertex_map[l.apex(3)], fc.vertex_map[l.apex(1)]);
        let removed = l.base_path(0)[1];
        assert_eq!(fc.vertex_map[removed], None);
    }

    #[test]
    fn collapse_errors() {
        let c: RingCode = "1,1,1,1,1,1".parse().unwrap();
        assert_eq!(c.fan_collapse(0).unwrap_err(), RingError::NotEvenFan { index: 0 });
        assert_eq!(c.fan_collapse(6).unwrap_err(), RingError::IndexOutOfRange { index: 6, len: 6 });
        let tiny = RingLayout::new(vec![2, 2], FanKind::A);
        assert_eq!(tiny.fan_collapse(0).unwrap_err(), RingError::TooFewFans(2));
    }

    #[test]
    fn collapse_commutes_with_cps() {
        let c: RingCode = "2,1,2,1,2,1".parse().unwrap();
        let fc = c.fan_collapse(0).unwrap();
        let via_graph = crate::parity::ParitySeq::from_runs(&fc.ring.runs).unwrap();
        assert_eq!(via_graph.to_string(), c.cps().e_collapse(0).unwrap().to_string());
    }

    /// Every surviving edge must land on an edge (or a loop for the identified pair)
    /// of the collapsed layout.
    #[test]
    fn collapse_maps_edges_to_edges() {
        for s in ["2,1,2,3", "2,2,2,2", "1,2,3,4,2,1", "4,1,1,2,2,3", "2,3,1,1,2,2,1,2"] {
            let c: RingCode = s.parse().unwrap();
            let g = c.realize();
            for j in (0..c.fan_count()).filter(|&j| c.runs()[j].is_multiple_of(2)) {
                let fc = c.fan_collapse(j).unwrap();
                let new_edges: std::collections::BTreeSet<(usize, usize)> = fc
                    .ring
                    .triangles()
                    .iter()
                    .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                for &(a, b) in g.edges() {
                    if let (Some(x), Some(y)) = (fc.vertex_map[a], fc.vertex_map[b]) {
                        assert!(new_edges.contains(&(x.min(y), x.max(y))), "{s} at {j}: {a}-{b}");
                    }
                }
            }
        }
    }
}
