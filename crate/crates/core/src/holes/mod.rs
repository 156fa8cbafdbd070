//! Planar triangulations with designated non-triangular "hole" faces.
//!
//! Each hole is surrounded by a triangulated ring (its boundary plus the first
//! neighbour layer). The rings' parity sequences give a necessary condition for
//! 3-colorability; a verified witness is required before a positive answer.

mod build;
mod extract;
mod insert;
mod merge;
mod theorem3;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{to_dot, Coloring, DotStyle, Graph, GraphError, GraphJson};
use crate::ring::RingError;

pub use build::{lattice, plant_ring, PlanarMap};
pub use extract::{extract_ring, ExtractedRing};
pub use insert::insert_cycle;
pub use merge::{fold_all, merge_holes};
pub use theorem3::{color3_holes, color3_holes_with, decide3_holes, decide3_holes_with, HoleAdjacency, HoleVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolesError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("instance has no face list")]
    MissingFaces,
    #[error("face index {0} out of range")]
    BadFaceIndex(usize),
    #[error("face {0} listed twice among holes and outer face")]
    DuplicateFace(usize),
    #[error("hole {hole} has boundary length {len}; holes need at least 4")]
    HoleTooShort { hole: usize, len: usize },
    #[error("holes {0} and {1} share a vertex")]
    HolesIntersect(usize, usize),
    #[error("hole {0} shares a vertex with the outer face")]
    OuterTouchesHole(usize),
    #[error("face {0} is neither a hole, the outer face, nor a triangle")]
    NonTriangleFace(usize),
    #[error("faces do not form a closed oriented surface: {0}")]
    NotASphere(String),
    #[error("ring around hole {hole} is malformed: {reason}")]
    MalformedRing { hole: usize, reason: String },
    #[error("hole index {0} out of range")]
    BadHoleIndex(usize),
    #[error("rings of holes {0} and {1} share no edge")]
    NotAdjacent(usize, usize),
    #[error("merging holes {0} and {1} would break 2-connectivity")]
    DeletionDisconnects(usize, usize),
    #[error("merging holes {0} and {1} yields a non-simple boundary")]
    NonSimpleBoundary(usize, usize),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("inserted cycle length {0} < 4")]
    CycleTooShort(usize),
    #[error("generation failed: {0}")]
    GenerationFailure(String),
}

/// A plane graph whose faces are triangles except for the holes and the outer face.
///
/// Faces are stored consistently oriented: every directed edge occurs in exactly
/// one face. Construction re-orients faces to agree with face 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoledTriangulation {
    graph: Graph,
    holes: Vec<usize>,
    outer: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HoledJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub holes: Vec<usize>,
    pub outer: usize,
}

// Spelled out rather than flattened: flattening buffers the input, and buffered
// maps cannot turn the string keys of `labels` back into integers.
#[derive(Deserialize)]
struct HoledFlat {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    faces: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    labels: Option<BTreeMap<usize, String>>,
    holes: Vec<usize>,
    outer: usize,
}

impl<'de> Deserialize<'de> for HoledJson {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = HoledFlat::deserialize(d)?;
        Ok(HoledJson {
            graph: GraphJson { n: f.n, edges: f.edges, faces: f.faces, labels: f.labels },
            holes: f.holes,
            outer: f.outer,
        })
    }
}

impl HoledTriangulation {
    pub fn new(graph: Graph, holes: Vec<usize>, outer: usize) -> Result<Self, HolesError> {
        let faces = graph.faces().ok_or(HolesError::MissingFaces)?.to_vec();
        let nf = faces.len();
        let mut special = BTreeSet::new();
        for &f in holes.iter().chain(std::iter::once(&outer)) {
            if f >= nf {
                return Err(HolesError::BadFaceIndex(f));
            }
            if !special.insert(f) {
                return Err(HolesError::DuplicateFace(f));
            }
        }
        for (h, &f) in holes.iter().enumerate() {
            if faces[f].len() < 4 {
                return Err(HolesError::HoleTooShort { hole: h, len: faces[f].len() });
            }
        }
        if let Some(f) = (0..nf).find(|f| !special.contains(f) && faces[*f].len() != 3) {
            return Err(HolesError::NonTriangleFace(f));
        }
        let sets: Vec<BTreeSet<usize>> = holes.iter().map(|&f| faces[f].iter().copied().collect()).collect();
        let outer_set: BTreeSet<usize> = faces[outer].iter().copied().collect();
        for a in 0..sets.len() {
            if !sets[a].is_disjoint(&outer_set) {
                return Err(HolesError::OuterTouchesHole(a));
            }
            for b in a + 1..sets.len() {
                if !sets[a].is_disjoint(&sets[b]) {
                    return Err(HolesError::HolesIntersect(a, b));
                }
            }
        }
        if !graph.is_connected() {
            return Err(HolesError::NotASphere("graph is disconnected".into()));
        }
        let oriented = orient_faces(&graph, faces)?;
        let labels = graph.labels().clone();
        let graph = Graph::new(graph.vertex_count(), graph.edges().iter().copied())?
            .with_faces(oriented)?
            .with_labels(labels);
        Ok(HoledTriangulation { graph, holes, outer })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        self.graph.faces().expect("validated at construction")
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    /// Face index of hole `h`.
    pub fn hole_face(&self, h: usize) -> usize {
        self.holes[h]
    }

    pub fn hole_boundary(&self, h: usize) -> &[usize] {
        &self.faces()[self.holes[h]]
    }

    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Map from directed edge to the face containing it.
    pub(crate) fn dart_faces(&self) -> BTreeMap<(usize, usize), usize> {
        dart_map(self.faces())
    }

    pub fn to_json(&self) -> HoledJson {
        HoledJson { graph: self.graph.to_json(), holes: self.holes.clone(), outer: self.outer }
    }

    /// Graphviz rendering with hole boundaries and the outer face highlighted.
    pub fn to_dot(&self, coloring: Option<&Coloring>) -> String {
        let mut g = self.graph.clone();
        for &v in &self.faces()[self.outer] {
            g.set_label(v, "outer");
        }
        for h in 0..self.holes.len() {
            for &v in self.hole_boundary(h) {
                g.set_label(v, format!("hole{h}"));
            }
        }
        to_dot(&g, &DotStyle { name: "holed", coloring })
    }
}

impl TryFrom<HoledJson> for HoledTriangulation {
    type Error = HolesError;

    fn try_from(j: HoledJson) -> Result<Self, HolesError> {
        HoledTriangulation::new(Graph::try_from(j.graph)?, j.holes, j.outer)
    }
}

impl Serialize for HoledTriangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HoledTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = HoledJson::deserialize(d)?;
        HoledTriangulation::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn dart_map(faces: &[Vec<usize>]) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for i in 0..f.len() {
            m.insert((f[i], f[(i + 1) % f.len()]), fi);
        }
    }
    m
}

/// Re-orient faces so that each edge is traversed once in each direction, keeping
/// face 0 as given. Fails unless every edge borders exactly two face sides and the
/// result is consistent.
fn orient_faces(g: &Graph, mut faces: Vec<Vec<usize>>) -> Result<Vec<Vec<usize>>, HolesError> {
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    for &(a, b) in g.edges() {
        match by_edge.get(&(a, b)).map(Vec::len) {
            Some(2) => {}
            other => {
                return Err(HolesError::NotASphere(format!(
                    "edge {a}-{b} borders {} face sides",
                    other.unwrap_or(0)
                )))
            }
        }
    }
    let has_dart = |f: &[usize], a: usize, b: usize| (0..f.len()).any(|i| f[i] == a && f[(i + 1) % f.len()] == b);
    let mut done = vec![false; faces.len()];
    let mut queue = VecDeque::new();
    if !faces.is_empty() {
        done[0] = true;
        queue.push_back(0);
    }
    while let Some(fi) = queue.pop_front() {
        let f = faces[fi].clone();
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            for &other in &by_edge[&(a.min(b), a.max(b))] {
                if other == fi || done[other] {
                    continue;
                }
                if has_dart(&faces[other], a, b) {
                    faces[other].reverse();
                }
                done[other] = true;
                queue.push_back(other);
            }
        }
    }
    if done.iter().any(|d| !d) {
        return Err(HolesError::NotASphere("face adjacency is disconnected".into()));
    }
    let darts = dart_map(&faces);
    let total: usize = faces.iter().map(Vec::len).sum();
    if darts.len() != total {
        return Err(HolesError::NotASphere("faces cannot be oriented consistently".into()));
    }
    Ok(faces)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::ring::RingCode;

    /// Lattice with rings planted at the given interior vertices.
    pub fn planted(rows: usize, cols: usize, sites: &[((usize, usize), &str)]) -> HoledTriangulation {
        let mut map = lattice(rows, cols);
        let centers: Vec<usize> = sites.iter().map(|&((r, c), _)| r * cols + c).collect();
        for (i, &(_, code)) in sites.iter().enumerate() {
            let code: RingCode = code.parse().unwrap();
            let link = map.link(centers[i]).unwrap();
            plant_ring(&mut map, centers[i], &code, link[0]).unwrap();
        }
        map.into_holed().unwrap()
    }

    /// Two planted 4-holes whose neighbour layers share the edge (1,3)-(2,3).
    pub fn two_adjacent_holes() -> HoledTriangulation {
        planted(4, 7, &[((1, 2), "2,3,2,3"), ((2, 4), "2,3,2,3")])
    }

    /// Row of `count` square 4-holes in a 4-row lattice, one cell apart, so that
    /// consecutive holes are joined by a corridor of two triangles.
    pub fn strip(count: usize) -> HoledTriangulation {
        let cols = 2 * count + 2;
        let mut map = lattice(4, cols);
        for h in 0..count {
            let c = 2 * h + 1;
            let fi = map.join_faces(cols + c, 2 * cols + c + 1).unwrap();
            map.mark_hole(fi);
        }
        map.into_holed().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn rejects_bad_instances() {
        let map = lattice(3, 3);
        let (g, outer, _) = map.to_graph().unwrap();
        // center vertex star is all triangles: no holes is fine
        assert!(HoledTriangulation::new(g.clone(), vec![], outer).is_ok());
        assert_eq!(HoledTriangulation::new(g.clone(), vec![outer], outer), Err(HolesError::DuplicateFace(outer)));
        assert_eq!(HoledTriangulation::new(g, vec![0], outer), Err(HolesError::HoleTooShort { hole: 0, len: 3 }));
    }

    #[test]
    fn two_holes_sharing_a_vertex_are_rejected() {
        // deleting two lattice vertices at distance 2 leaves hexagonal holes that
        // share the vertex between them
        let mut map = lattice(7, 7);
        map.delete_vertex(3 * 7 + 2).unwrap();
        map.delete_vertex(3 * 7 + 4).unwrap();
        assert!(matches!(map.into_holed(), Err(HolesError::HolesIntersect(0, 1))));
    }

    #[test]
    fn json_roundtrip_and_reorientation() {
        let ht = planted(5, 5, &[((2, 2), "2,3,2,3")]);
        let s = serde_json::to_string(&ht).unwrap();
        let back: HoledTriangulation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ht);
        // labels keep their integer keys
        let mut g = ht.graph().clone();
        g.set_label(3, "inner");
        let labelled = HoledTriangulation::new(g, ht.holes().to_vec(), ht.outer()).unwrap();
        let back: HoledTriangulation = serde_json::from_str(&serde_json::to_string(&labelled).unwrap()).unwrap();
        assert_eq!(back.graph().label(3), Some("inner"));
        // flip one triangle: construction re-orients it
        let mut j = ht.to_json();
        let faces = j.graph.faces.as_mut().unwrap();
        let last = faces.len() - 1;
        let t = (0..faces.len()).rev().find(|&f| faces[f].len() == 3 && f != last).unwrap();
        faces[t].reverse();
        let fixed = HoledTriangulation::try_from(j).unwrap();
        assert_eq!(fixed.faces()[t], ht.faces()[t]);
    }

    #[test]
    fn dot_marks_holes() {
        let ht = planted(5, 5, &[((2, 2), "2,3,2,3")]);
        let dot = ht.to_dot(None);
        assert!(dot.contains("hole0"));
        assert!(dot.contains("color=red"));
    }
}
