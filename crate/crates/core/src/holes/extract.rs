use std::collections::BTreeSet;

use super::{HoledTriangulation, HolesError};
use crate::ring::RingCode;

/// Ring around one hole: its code and, for each vertex of `code.realize()`, the
/// original vertex it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedRing {
    pub hole: usize,
    pub code: RingCode,
    pub vertex_map: Vec<usize>,
}

impl ExtractedRing {
    /// Edges of the ring in original vertex numbering, as `(min, max)` pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        self.code
            .realize()
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.vertex_map[a], self.vertex_map[b]);
                (x.min(y), x.max(y))
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    A,
    B,
}

/// Read off the triangulated ring formed by hole `hole` and its neighbour layer.
///
/// Walks the triangles around the hole in boundary order, classifying each as A
/// (two vertices on the hole) or B (one), then checks that the layer is an induced
/// cycle disjoint from the hole and that realizing the code reproduces the
/// subgraph exactly.
pub fn extract_ring(ht: &HoledTriangulation, hole: usize) -> Result<ExtractedRing, HolesError> {
    if hole >= ht.hole_count() {
        return Err(HolesError::BadHoleIndex(hole));
    }
    let bad = |reason: String| HolesError::MalformedRing { hole, reason };
    let boundary = ht.hole_boundary(hole).to_vec();
    let on_hole: BTreeSet<usize> = boundary.iter().copied().collect();
    let darts = ht.dart_faces();
    let faces = ht.faces();
    let hole_face = ht.hole_face(hole);

    // The triangle across boundary edge h0 -> h1 holds h1 -> h0; its third vertex
    // is the first outer vertex.
    let (h0, h1) = (boundary[0], boundary[1]);
    let first = darts[&(h1, h0)];
    let x0 = *faces[first].iter().find(|&&v| v != h0 && v != h1).unwrap();
    let start = (h0, x0);
    let (mut p, mut q) = start;
    let mut steps = Vec::new();
    let mut inner_seq = vec![p];
    let mut outer_seq = vec![q];
    let limit = 2 * ht.graph().edge_count() + 4;
    loop {
        let fi = *darts.get(&(p, q)).ok_or_else(|| bad(format!("no face on spoke {p}->{q}")))?;
        if fi == hole_face || fi == ht.outer() || ht.holes().contains(&fi) || faces[fi].len() != 3 {
            return Err(bad(format!("spoke {p}-{q} borders a non-triangular face {fi}")));
        }
        let z = *faces[fi].iter().find(|&&v| v != p && v != q).unwrap();
        if on_hole.contains(&z) {
            steps.push(Step::A);
            p = z;
            inner_seq.push(z);
        } else {
            steps.push(Step::B);
            q = z;
            outer_seq.push(z);
        }
        if (p, q) == start {
            break;
        }
        if steps.len() > limit {
            return Err(bad("walk around the hole does not close".into()));
        }
    }
    inner_seq.pop();
    outer_seq.pop();
    if inner_seq.len() != boundary.len() || inner_seq.iter().copied().collect::<BTreeSet<_>>() != on_hole {
        return Err(bad(format!(
            "walk visits {} hole vertices, boundary has {}",
            inner_seq.len(),
            boundary.len()
        )));
    }
    let outer_set: BTreeSet<usize> = outer_seq.iter().copied().collect();
    if outer_set.len() != outer_seq.len() {
        return Err(bad("neighbour layer revisits a vertex".into()));
    }
    let layer: BTreeSet<usize> = boundary
        .iter()
        .flat_map(|&v| ht.graph().neighbors(v).iter().copied())
        .filter(|v| !on_hole.contains(v))
        .collect();
    if layer != outer_set {
        return Err(bad("walk misses part of the neighbour layer".into()));
    }

    // Runs, rotated to begin with the first A-step after a B-step.
    let n = steps.len();
    let Some(s0) = (0..n).find(|&i| steps[i] == Step::A && steps[(i + n - 1) % n] == Step::B) else {
        return Err(bad("ring has a single fan type".into()));
    };
    let mut runs: Vec<u32> = Vec::new();
    let (mut a_before, mut b_before) = (0usize, 0usize);
    for &s in &steps[..s0] {
        match s {
            Step::A => a_before += 1,
            Step::B => b_before += 1,
        }
    }
    let mut last = None;
    for i in 0..n {
        let s = steps[(s0 + i) % n];
        if last == Some(s) {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
            last = Some(s);
        }
    }
    let code = RingCode::new(runs).map_err(|e| bad(e.to_string()))?;
    let ni = inner_seq.len();
    let no = outer_seq.len();
    let mut vertex_map: Vec<usize> = (0..ni).map(|a| inner_seq[(a + a_before) % ni]).collect();
    vertex_map.extend((0..no).map(|b| outer_seq[(b + b_before) % no]));

    // Induced subgraph must be exactly the realized ring (no chords).
    let ring_vertices: BTreeSet<usize> = vertex_map.iter().copied().collect();
    let induced = ht
        .graph()
        .edges()
        .iter()
        .filter(|(a, b)| ring_vertices.contains(a) && ring_vertices.contains(b))
        .count();
    let extracted = ExtractedRing { hole, code, vertex_map };
    let ring_edges = extracted.edges();
    if ring_edges.iter().any(|&(a, b)| !ht.graph().has_edge(a, b)) {
        return Err(HolesError::Ring(crate::ring::RingError::InternalInconsistency(format!(
            "extracted ring of hole {hole} does not embed"
        ))));
    }
    if induced != ring_edges.len() {
        return Err(bad(format!("{} chord(s) between ring vertices", induced - ring_edges.len())));
    }
    Ok(extracted)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::planted;
    use super::super::{lattice, plant_ring};
    use super::*;

    #[test]
    fn roundtrip_planted_codes() {
        for s in ["2,3,2,3", "1,3,3,3", "1,1,1,1,1,1,1,3", "2,1,1,2,1,3", "1,2,3,4"] {
            let ht = planted(5, 5, &[((2, 2), s)]);
            let r = extract_ring(&ht, 0).unwrap();
            let want: RingCode = s.parse().unwrap();
            assert_eq!(r.code, want, "{s}");
            assert_eq!(r.code.inner_len(), ht.hole_boundary(0).len());
        }
    }

    #[test]
    fn four_hole_ring_has_eight_vertices_in_layer() {
        // a 4-hole inside an 8-vertex layer (code with |C_i| = 4, |C_o| = 8)
        let mut m = lattice(6, 6);
        // flipping two link edges of (2,2) pulls two more vertices into its link
        // while keeping the link chordless
        let c = 2 * 6 + 2;
        for k in [0, 4] {
            let link = m.link(c).unwrap();
            m.flip(link[k], link[k + 1], 3).unwrap();
        }
        let link = m.link(c).unwrap();
        assert_eq!(link.len(), 8);
        let code: RingCode = "1,2,1,2,1,2,1,2".parse().unwrap();
        plant_ring(&mut m, c, &code, link[0]).unwrap();
        let ht = m.into_holed().unwrap();
        let r = extract_ring(&ht, 0).unwrap();
        assert_eq!(r.code.inner_len(), 4);
        assert_eq!(r.code.outer_len(), 8);
        assert_eq!(r.code, code);
    }

    #[test]
    fn chord_in_layer_is_malformed() {
        // wheel-like star at c; a vertex y inserted into the triangle (c, p0, p1)
        // makes p0-p1 a chord of the enlarged link
        let mut m = lattice(5, 5);
        let c = 12;
        let link = m.link(c).unwrap();
        let f = m.face_of(c, link[0]).unwrap();
        m.insert_in_face(f).unwrap();
        let link = m.link(c).unwrap();
        assert_eq!(link.len(), 7);
        let code: RingCode = "1,2,1,2,2,3".parse().unwrap();
        plant_ring(&mut m, c, &code, link[0]).unwrap();
        let ht = m.into_holed().unwrap();
        assert!(matches!(extract_ring(&ht, 0), Err(HolesError::MalformedRing { .. })));
    }

    #[test]
    fn bad_hole_index() {
        let ht = planted(5, 5, &[((2, 2), "2,3,2,3")]);
        assert_eq!(extract_ring(&ht, 1), Err(HolesError::BadHoleIndex(1)));
    }
}
