use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::theorem3::{star_edges, HoleAdjacency};
use super::{HoledTriangulation, HolesError};
use crate::graph::Graph;

/// Fuse holes `i` and `j` by deleting the edges crossed by a shortest corridor of
/// triangles between them. Each deleted edge removes one face, so the face count
/// drops by the corridor length plus one. The fused hole takes index `min(i, j)`.
pub fn merge_holes(ht: &HoledTriangulation, i: usize, j: usize) -> Result<HoledTriangulation, HolesError> {
    let k = ht.hole_count();
    for h in [i, j] {
        if h >= k {
            return Err(HolesError::BadHoleIndex(h));
        }
    }
    if i == j || star_edges(ht, i).is_disjoint(&star_edges(ht, j)) {
        return Err(HolesError::NotAdjacent(i, j));
    }
    let faces = ht.faces();
    let darts = ht.dart_faces();
    let (src, dst) = (ht.hole_face(i), ht.hole_face(j));
    let blocked: BTreeSet<usize> =
        ht.holes().iter().copied().chain([ht.outer()]).filter(|&f| f != src && f != dst).collect();

    // BFS over the dual, crossing edges in face order.
    let mut parent: BTreeMap<usize, (usize, (usize, usize))> = BTreeMap::new();
    let mut queue = VecDeque::from([src]);
    let mut seen = BTreeSet::from([src]);
    while let Some(f) = queue.pop_front() {
        if f == dst {
            break;
        }
        if f != src && faces[f].len() != 3 {
            continue;
        }
        let face = &faces[f];
        for p in 0..face.len() {
            let (a, b) = (face[p], face[(p + 1) % face.len()]);
            let g = darts[&(b, a)];
            if blocked.contains(&g) || !seen.insert(g) {
                continue;
            }
            parent.insert(g, (f, (a.min(b), a.max(b))));
            queue.push_back(g);
        }
    }
    if !seen.contains(&dst) {
        return Err(HolesError::NotAdjacent(i, j));
    }
    let mut corridor = vec![dst];
    let mut deleted = BTreeSet::new();
    let mut cur = dst;
    while cur != src {
        let (p, e) = parent[&cur];
        deleted.insert(e);
        corridor.push(p);
        cur = p;
    }
    let in_corridor: BTreeSet<usize> = corridor.iter().copied().collect();

    // Boundary of the fused face: surviving darts of the corridor faces.
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for &f in &corridor {
        let face = &faces[f];
        for p in 0..face.len() {
            let (a, b) = (face[p], face[(p + 1) % face.len()]);
            if deleted.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            if next.insert(a, b).is_some() {
                return Err(HolesError::NonSimpleBoundary(i, j));
            }
        }
    }
    let &start = next.keys().next().expect("corridor has surviving edges");
    let mut merged = vec![start];
    let mut v = next[&start];
    while v != start {
        merged.push(v);
        v = *next.get(&v).ok_or(HolesError::NonSimpleBoundary(i, j))?;
        if merged.len() > next.len() {
            return Err(HolesError::NonSimpleBoundary(i, j));
        }
    }
    if merged.len() != next.len() {
        return Err(HolesError::NonSimpleBoundary(i, j));
    }

    let mut new_index = vec![usize::MAX; faces.len()];
    let mut new_faces = Vec::new();
    for (f, face) in faces.iter().enumerate() {
        if !in_corridor.contains(&f) {
            new_index[f] = new_faces.len();
            new_faces.push(face.clone());
        }
    }
    let fused = new_faces.len();
    new_faces.push(merged);
    let (lo, hi) = (i.min(j), i.max(j));
    let holes: Vec<usize> = (0..k)
        .filter(|&h| h != hi)
        .map(|h| if h == lo { fused } else { new_index[ht.hole_face(h)] })
        .collect();
    let edges = ht.graph().edges().iter().copied().filter(|e| !deleted.contains(e));
    let g = Graph::new(ht.vertex_count(), edges)?;
    if !g.is_biconnected() {
        return Err(HolesError::DeletionDisconnects(i, j));
    }
    let g = g.with_faces(new_faces)?.with_labels(ht.graph().labels().clone());
    HoledTriangulation::new(g, holes, new_index[ht.outer()])
}

/// Merge along spanning-forest edges until no two holes have adjacent rings.
pub fn fold_all(ht: &HoledTriangulation) -> Result<HoledTriangulation, HolesError> {
    let mut cur = ht.clone();
    loop {
        let adj = HoleAdjacency::build(&cur);
        let Some(&(child, parent)) = adj.tree.first() else {
            return Ok(cur);
        };
        cur = merge_holes(&cur, parent, child)?;
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{planted, strip};
    use super::*;

    #[test]
    fn adjacent_four_holes_fuse_into_eight() {
        let ht = strip(2);
        let f0 = ht.faces().len();
        let merged = merge_holes(&ht, 0, 1).unwrap();
        assert_eq!(merged.hole_count(), 1);
        assert_eq!(merged.hole_boundary(0).len(), 8);
        assert_eq!(merged.faces().len(), f0 - 3);
        assert_eq!(merged.graph().edge_count(), ht.graph().edge_count() - 3);
        let triangles = merged.faces().iter().filter(|f| f.len() == 3).count();
        assert_eq!(triangles, merged.faces().len() - 2);
    }

    #[test]
    fn full_fold_of_three_holes() {
        let ht = strip(3);
        let f0 = ht.faces().len();
        let folded = fold_all(&ht).unwrap();
        assert_eq!(folded.hole_count(), 1);
        assert_eq!(folded.hole_boundary(0).len(), 12);
        assert_eq!(folded.faces().len(), f0 - 6);
    }

    #[test]
    fn far_holes_are_not_adjacent() {
        let ht = planted(7, 7, &[((1, 1), "2,3,2,3"), ((5, 5), "2,3,2,3")]);
        assert_eq!(merge_holes(&ht, 0, 1).unwrap_err(), HolesError::NotAdjacent(0, 1));
        assert_eq!(merge_holes(&ht, 0, 2).unwrap_err(), HolesError::BadHoleIndex(2));
    }

    #[test]
    fn planted_neighbours_fuse_through_a_longer_corridor() {
        let ht = planted(5, 7, &[((2, 2), "2,3,2,3"), ((3, 4), "2,3,2,3")]);
        let adj = HoleAdjacency::build(&ht);
        assert!(adj.adjacent(0, 1));
        let merged = merge_holes(&ht, 0, 1).unwrap();
        let removed = ht.faces().len() - merged.faces().len();
        let boundary = merged.hole_boundary(0).len();
        // a corridor of m triangles deletes m + 1 edges and leaves 4 + 4 + m - 2 boundary
        assert_eq!(boundary, 8 + (removed - 1) - 2);
        assert_eq!(ht.graph().edge_count() - merged.graph().edge_count(), removed);
    }
}
