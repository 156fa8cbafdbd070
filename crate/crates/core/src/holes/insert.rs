use std::collections::{BTreeMap, BTreeSet};

use super::HolesError;
use crate::graph::Graph;
use crate::ring::RingCode;

/// Insert an `r`-cycle into `realize(code)` by splitting outer vertex `at`.
///
/// The vertex `v = o_at` is split along its rotation into `v'` (keeping the
/// earlier inner neighbours) and `v_last` (keeping the later ones), with an extra
/// middle vertex when `shared_outer_edges = 2`. The triangles of `v`'s fan spanning
/// the middle of its inner arc are removed; the new face
/// `(v', [v''], v_last, i_m' ... i_m)` has length `r` and shares
/// `shared_outer_edges` edges with the new outer cycle. Every other face stays a
/// triangle.
///
/// Vertex numbering: `realize(code)` unchanged, `v_last` = old vertex count, then
/// the middle vertex if any. Labels: `inner` and `outer`.
pub fn insert_cycle(code: &RingCode, r: usize, at: usize, shared_outer_edges: usize) -> Result<Graph, HolesError> {
    if r < 4 {
        return Err(HolesError::CycleTooShort(r));
    }
    if !(1..=2).contains(&shared_outer_edges) {
        return Err(HolesError::InvalidSplit(format!("shared_outer_edges must be 1 or 2, got {shared_outer_edges}")));
    }
    let (ni, no) = (code.inner_len(), code.outer_len());
    if at >= no {
        return Err(HolesError::InvalidSplit(format!("outer index {at} out of range for |C_o| = {no}")));
    }
    let layout = code.layout();
    let tris = layout.triangles();
    let v = ni + at;
    let o_prev = ni + (at + no - 1) % no;
    let o_next = ni + (at + 1) % no;

    // Inner arc of v in rotation order: from the B-triangle (o_prev, v, i_s)
    // through v's A-triangles to the B-triangle (v, o_next, i_t).
    let nt = tris.len();
    let first = (0..nt).find(|&k| tris[k][0] == o_prev && tris[k][1] == v).expect("every outer vertex has a B-triangle on each side");
    let mut arc = vec![tris[first][2]];
    let mut fan_tris = Vec::new();
    let mut k = (first + 1) % nt;
    while !(tris[k][0] == v && tris[k][1] == o_next) {
        debug_assert_eq!(tris[k][1], v);
        fan_tris.push(k);
        arc.push(tris[k][2]);
        k = (k + 1) % nt;
    }
    let last_b = k;
    let span = r - 1 - shared_outer_edges;
    if span > arc.len() || span == 0 || (shared_outer_edges == 1 && span < 2) {
        return Err(HolesError::InvalidSplit(format!(
            "outer vertex {at} has {} inner neighbours, a {r}-cycle with {shared_outer_edges} shared edge(s) needs {span}",
            arc.len()
        )));
    }
    let off = (arc.len() - span) / 2;
    let n0 = ni + no;
    let v_last = n0;
    let middle = (shared_outer_edges == 2).then_some(n0 + 1);
    let n = n0 + shared_outer_edges;

    let mut faces: Vec<Vec<usize>> = Vec::new();
    for (idx, t) in tris.iter().enumerate() {
        if idx == last_b {
            faces.push(vec![v_last, o_next, t[2]]);
        } else if let Some(q) = fan_tris.iter().position(|&x| x == idx) {
            // A-triangle (arc[q], v, arc[q + 1])
            if q < off {
                faces.push(t.to_vec());
            } else if q >= off + span - 1 {
                faces.push(vec![t[0], v_last, t[2]]);
            }
        } else {
            faces.push(t.to_vec());
        }
    }
    let mut cycle = vec![v];
    cycle.extend(middle);
    cycle.push(v_last);
    cycle.extend(arc[off..off + span].iter().rev());
    debug_assert_eq!(cycle.len(), r);
    faces.push(cycle.clone());
    faces.push((0..ni).collect());
    let outer_face: Vec<usize> = (0..no)
        .rev()
        .flat_map(|b| {
            let o = ni + b;
            if o == v {
                let mut s = vec![v_last];
                s.extend(middle);
                s.push(v);
                s
            } else {
                vec![o]
            }
        })
        .collect();
    faces.push(outer_face.clone());

    let mut edges = BTreeSet::new();
    for f in &faces {
        for p in 0..f.len() {
            let (a, b) = (f[p], f[(p + 1) % f.len()]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut labels = BTreeMap::new();
    for x in 0..ni {
        labels.insert(x, "inner".to_string());
    }
    for &x in &outer_face {
        labels.insert(x, "outer".to_string());
    }
    let g = Graph::new(n, edges)?.with_faces(faces)?.with_labels(labels);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_coloring;

    fn code(s: &str) -> RingCode {
        s.parse().unwrap()
    }

    #[test]
    fn face_structure() {
        for (s, r, shared) in [("3,3,3,3", 4, 1), ("3,3,3,3", 5, 1), ("1,1,1,1,1,1", 5, 2), ("2,3,2,3", 4, 2)] {
            let c = code(s);
            let g = insert_cycle(&c, r, 0, shared).unwrap();
            let faces = g.faces().unwrap();
            assert_eq!(g.vertex_count(), c.inner_len() + c.outer_len() + shared);
            let tail: Vec<usize> = faces[faces.len() - 3..].iter().map(Vec::len).collect();
            assert_eq!(tail, vec![r, c.inner_len(), c.outer_len() + shared], "{s}");
            assert!(faces[..faces.len() - 3].iter().all(|f| f.len() == 3));
        }
    }

    #[test]
    fn theorem4_examples() {
        // Under this split, a 4-cycle removes a single triangle of the (3,3,3,3)
        // ring and the result stays non-3-colorable at every split position; a
        // 5-cycle removes two and unlocks a coloring.
        for at in [0, 3] {
            let g = insert_cycle(&code("3,3,3,3"), 4, at, 1).unwrap();
            assert!(find_coloring(&g, 3).unwrap().is_none());
            let g = insert_cycle(&code("3,3,3,3"), 5, at, 1).unwrap();
            assert!(find_coloring(&g, 3).unwrap().is_some());
        }
        let g = insert_cycle(&code("1,1,1,1,1,1"), 5, 0, 2).unwrap();
        assert!(find_coloring(&g, 3).unwrap().is_some());
    }

    #[test]
    fn rejections() {
        assert_eq!(insert_cycle(&code("3,3,3,3"), 3, 0, 1).unwrap_err(), HolesError::CycleTooShort(3));
        // octahedron outer vertices have two inner neighbours; a 5-cycle with one
        // shared edge needs three
        assert!(matches!(insert_cycle(&code("1,1,1,1,1,1"), 5, 0, 1), Err(HolesError::InvalidSplit(_))));
        assert!(matches!(insert_cycle(&code("1,1,1,1,1,1"), 4, 9, 1), Err(HolesError::InvalidSplit(_))));
        assert!(matches!(insert_cycle(&code("1,1,1,1,1,1"), 4, 0, 3), Err(HolesError::InvalidSplit(_))));
    }
}
