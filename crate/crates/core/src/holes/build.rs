//! Mutable oriented face lists for building instances: lattices, vertex
//! insertion, edge flips, hole punching, and ring planting.

use std::collections::BTreeMap;

use super::{HoledTriangulation, HolesError};
use crate::graph::Graph;
use crate::ring::RingCode;

/// Oriented map under construction. Each directed edge belongs to one face; removed
/// faces are left as empty tombstones and compacted away on export.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    alive: Vec<bool>,
    faces: Vec<Vec<usize>>,
    darts: BTreeMap<(usize, usize), usize>,
    outer: usize,
    holes: Vec<usize>,
}

fn err(msg: impl Into<String>) -> HolesError {
    HolesError::NotASphere(msg.into())
}

impl PlanarMap {
    pub fn from_faces(n: usize, faces: Vec<Vec<usize>>, outer: usize, holes: Vec<usize>) -> Result<Self, HolesError> {
        let mut map =
            PlanarMap { alive: vec![true; n], faces: Vec::new(), darts: BTreeMap::new(), outer, holes };
        for f in faces {
            if f.iter().any(|&v| v >= n) {
                return Err(err("face vertex out of range"));
            }
            map.add_face(f)?;
        }
        Ok(map)
    }

    pub fn from_holed(ht: &HoledTriangulation) -> Self {
        PlanarMap::from_faces(ht.vertex_count(), ht.faces().to_vec(), ht.outer(), ht.holes().to_vec())
            .expect("holed triangulations are consistently oriented")
    }

    fn add_face(&mut self, f: Vec<usize>) -> Result<usize, HolesError> {
        let fi = self.faces.len();
        for i in 0..f.len() {
            let d = (f[i], f[(i + 1) % f.len()]);
            if self.darts.insert(d, fi).is_some() {
                return Err(err(format!("directed edge {}->{} used twice", d.0, d.1)));
            }
        }
        self.faces.push(f);
        Ok(fi)
    }

    fn remove_face(&mut self, fi: usize) {
        let f = std::mem::take(&mut self.faces[fi]);
        for i in 0..f.len() {
            self.darts.remove(&(f[i], f[(i + 1) % f.len()]));
        }
    }

    fn new_vertex(&mut self) -> usize {
        self.alive.push(true);
        self.alive.len() - 1
    }

    /// Number of vertex ids ever allocated (including deleted ones).
    pub fn id_bound(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.darts.contains_key(&(a, b))
    }

    pub fn face(&self, fi: usize) -> &[usize] {
        &self.faces[fi]
    }

    pub fn face_of(&self, a: usize, b: usize) -> Option<usize> {
        self.darts.get(&(a, b)).copied()
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    pub fn is_special(&self, fi: usize) -> bool {
        fi == self.outer || self.holes.contains(&fi)
    }

    /// Live triangle faces that are neither holes nor the outer face.
    pub fn triangles(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].len() == 3 && !self.is_special(f)).collect()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.darts.range((v, 0)..(v + 1, 0)).map(|(&(_, w), _)| w).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.darts.range((v, 0)..(v + 1, 0)).count()
    }

    /// Vertices on no special face.
    pub fn interior_vertices(&self) -> Vec<usize> {
        let mut on_special = vec![false; self.alive.len()];
        for f in std::iter::once(self.outer).chain(self.holes.iter().copied()) {
            for &v in &self.faces[f] {
                on_special[v] = true;
            }
        }
        (0..self.alive.len()).filter(|&v| self.alive[v] && !on_special[v]).collect()
    }

    /// Neighbours of `v` in rotation order, if every face at `v` is an ordinary
    /// triangle.
    pub fn link(&self, v: usize) -> Result<Vec<usize>, HolesError> {
        let mut next = BTreeMap::new();
        for (&(_, a), &fi) in self.darts.range((v, 0)..(v + 1, 0)) {
            let f = &self.faces[fi];
            if f.len() != 3 || self.is_special(fi) {
                return Err(err(format!("vertex {v} lies on a non-triangular face")));
            }
            let i = f.iter().position(|&x| x == v).unwrap();
            debug_assert_eq!(f[(i + 1) % 3], a);
            next.insert(a, f[(i + 2) % 3]);
        }
        let Some((&start, _)) = next.iter().next() else {
            return Err(err(format!("vertex {v} is isolated")));
        };
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start {
            if cycle.len() > next.len() {
                return Err(err(format!("rotation at {v} is not a single cycle")));
            }
            cycle.push(cur);
            cur = *next.get(&cur).ok_or_else(|| err(format!("rotation at {v} is open")))?;
        }
        if cycle.len() != next.len() {
            return Err(err(format!("rotation at {v} is not a single cycle")));
        }
        Ok(cycle)
    }

    /// Rotate `link` so it starts at `anchor`.
    fn anchored(link: Vec<usize>, anchor: usize) -> Result<Vec<usize>, HolesError> {
        let pos = link.iter().position(|&x| x == anchor).ok_or_else(|| err("anchor not in link"))?;
        Ok(link[pos..].iter().chain(&link[..pos]).copied().collect())
    }

    /// Remove `v` and its star; the link becomes a new hole. Returns the hole index.
    pub fn delete_vertex(&mut self, v: usize) -> Result<usize, HolesError> {
        let link = self.link(v)?;
        let star: Vec<usize> = self.darts.range((v, 0)..(v + 1, 0)).map(|(_, &f)| f).collect();
        for f in star {
            self.remove_face(f);
        }
        self.alive[v] = false;
        let fi = self.add_face(link)?;
        self.holes.push(fi);
        Ok(self.holes.len() - 1)
    }

    /// Delete edge `a-b`, fusing its two faces. A hole or the outer face absorbs the
    /// other face; fusing two special faces is refused. Returns the new face index.
    pub fn join_faces(&mut self, a: usize, b: usize) -> Result<usize, HolesError> {
        let (f1, f2) = match (self.face_of(a, b), self.face_of(b, a)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(err(format!("no edge {a}-{b}"))),
        };
        if self.is_special(f1) && self.is_special(f2) {
            return Err(err(format!("edge {a}-{b} separates two special faces")));
        }
        let rot = |f: &[usize], start: usize| -> Vec<usize> {
            let p = f.iter().position(|&x| x == start).unwrap();
            f[p..].iter().chain(&f[..p]).copied().collect()
        };
        // f1 contains a->b: walk it from b back to a; f2 walks from a to b
        let p1 = rot(&self.faces[f1], b);
        let p2 = rot(&self.faces[f2], a);
        let mut merged = p1.clone();
        merged.extend(&p2[1..p2.len() - 1]);
        let special = if self.is_special(f1) { Some(f1) } else if self.is_special(f2) { Some(f2) } else { None };
        self.remove_face(f1);
        self.remove_face(f2);
        let fi = self.add_face(merged)?;
        match special {
            Some(s) if s == self.outer => self.outer = fi,
            Some(s) => {
                let h = self.holes.iter().position(|&x| x == s).unwrap();
                self.holes[h] = fi;
            }
            None => {}
        }
        Ok(fi)
    }

    pub fn mark_hole(&mut self, fi: usize) -> usize {
        self.holes.push(fi);
        self.holes.len() - 1
    }

    /// Split an ordinary triangle by a new vertex joined to its corners.
    pub fn insert_in_face(&mut self, fi: usize) -> Result<usize, HolesError> {
        if self.faces[fi].len() != 3 || self.is_special(fi) {
            return Err(err(format!("face {fi} is not an ordinary triangle")));
        }
        let [a, b, c] = <[usize; 3]>::try_from(self.faces[fi].clone()).unwrap();
        let v = self.new_vertex();
        self.remove_face(fi);
        for (x, y) in [(a, b), (b, c), (c, a)] {
            self.add_face(vec![x, y, v])?;
        }
        Ok(v)
    }

    /// Replace edge `a-b` by the other diagonal of its two triangles. Refused when
    /// the new edge exists, a face is special, or an endpoint would drop below
    /// degree `min_degree`.
    pub fn flip(&mut self, a: usize, b: usize, min_degree: usize) -> Result<(), HolesError> {
        let (f1, f2) = match (self.face_of(a, b), self.face_of(b, a)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(err(format!("no edge {a}-{b}"))),
        };
        if [f1, f2].iter().any(|&f| self.faces[f].len() != 3 || self.is_special(f)) {
            return Err(err("flip needs two ordinary triangles"));
        }
        let third = |f: &[usize]| *f.iter().find(|&&x| x != a && x != b).unwrap();
        let (c, d) = (third(&self.faces[f1]), third(&self.faces[f2]));
        if c == d || self.has_edge(c, d) || self.degree(a) <= min_degree || self.degree(b) <= min_degree {
            return Err(err(format!("edge {a}-{b} cannot be flipped")));
        }
        self.remove_face(f1);
        self.remove_face(f2);
        // f1 = (a, b, c), f2 = (b, a, d)
        self.add_face(vec![c, a, d])?;
        self.add_face(vec![d, b, c])?;
        Ok(())
    }

    /// Compact vertex and face numbering and build the graph. Returns the graph,
    /// the outer face index and the hole face indices.
    pub fn to_graph(&self) -> Result<(Graph, usize, Vec<usize>), HolesError> {
        let mut vid = vec![usize::MAX; self.alive.len()];
        let mut n = 0;
        for (slot, &alive) in vid.iter_mut().zip(&self.alive) {
            if alive {
                *slot = n;
                n += 1;
            }
        }
        let mut fid = vec![usize::MAX; self.faces.len()];
        let mut faces = Vec::new();
        for (i, f) in self.faces.iter().enumerate() {
            if !f.is_empty() {
                fid[i] = faces.len();
                faces.push(f.iter().map(|&v| vid[v]).collect::<Vec<_>>());
            }
        }
        let edges = self.darts.keys().filter(|(a, b)| a < b).map(|&(a, b)| (vid[a], vid[b]));
        let g = Graph::new(n, edges)?.with_faces(faces)?;
        Ok((g, fid[self.outer], self.holes.iter().map(|&h| fid[h]).collect()))
    }

    pub fn into_holed(self) -> Result<HoledTriangulation, HolesError> {
        let (g, outer, holes) = self.to_graph()?;
        HoledTriangulation::new(g, holes, outer)
    }
}

/// Triangular lattice on a `rows x cols` grid, vertex `r * cols + c`. Edges join
/// horizontal, vertical and down-right diagonal neighbours; 3-colorable by
/// `(r + c) mod 3`.
pub fn lattice(rows: usize, cols: usize) -> PlanarMap {
    assert!(rows >= 2 && cols >= 2, "lattice needs at least 2x2 vertices");
    let v = |r: usize, c: usize| r * cols + c;
    let mut faces = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            faces.push(vec![v(r, c), v(r, c + 1), v(r + 1, c + 1)]);
            faces.push(vec![v(r, c), v(r + 1, c + 1), v(r + 1, c)]);
        }
    }
    let mut outer: Vec<usize> = (0..cols).rev().map(|c| v(0, c)).collect();
    outer.extend((1..rows).map(|r| v(r, 0)));
    outer.extend((1..cols).map(|c| v(rows - 1, c)));
    outer.extend((1..rows - 1).rev().map(|r| v(r, cols - 1)));
    faces.push(outer);
    let outer = faces.len() - 1;
    PlanarMap::from_faces(rows * cols, faces, outer, Vec::new()).expect("lattice faces are consistent")
}

/// Replace the star of `center` by the ring `code`, whose outer cycle is glued to
/// the link of `center` starting at `anchor` (outer vertex 0 of the code). The
/// ring's inner cycle becomes a new hole, returned as a hole index.
pub fn plant_ring(map: &mut PlanarMap, center: usize, code: &RingCode, anchor: usize) -> Result<usize, HolesError> {
    let link = PlanarMap::anchored(map.link(center)?, anchor)?;
    if link.len() != code.outer_len() {
        return Err(err(format!(
            "link of {center} has {} vertices, ring code {code} needs {}",
            link.len(),
            code.outer_len()
        )));
    }
    let star: Vec<usize> = map.darts.range((center, 0)..(center + 1, 0)).map(|(_, &f)| f).collect();
    for f in star {
        map.remove_face(f);
    }
    map.alive[center] = false;
    let ni = code.inner_len();
    let inner: Vec<usize> = (0..ni).map(|_| map.new_vertex()).collect();
    let to_map = |x: usize| if x < ni { inner[x] } else { link[x - ni] };
    let layout = code.layout();
    for t in layout.triangles() {
        map.add_face(t.iter().map(|&x| to_map(x)).collect())?;
    }
    let fi = map.add_face(inner)?;
    Ok(map.mark_hole(fi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{find_coloring, is_proper, Coloring};

    #[test]
    fn lattice_is_a_colorable_disc() {
        let m = lattice(4, 5);
        let (g, outer, holes) = m.to_graph().unwrap();
        assert!(holes.is_empty());
        assert_eq!(g.faces().unwrap()[outer].len(), 2 * (4 + 5) - 4);
        let c = Coloring::new(3, (0..20).map(|v| ((v / 5 + v % 5) % 3) as u8 + 1).collect()).unwrap();
        assert!(is_proper(&g, &c).unwrap());
        assert_eq!(m.link(6).unwrap().len(), 6);
    }

    #[test]
    fn flips_and_insertions_keep_a_sphere() {
        let mut m = lattice(3, 3);
        let v = m.insert_in_face(0).unwrap();
        assert_eq!(m.degree(v), 3);
        let (a, b) = (1, 4);
        m.flip(a, b, 3).unwrap();
        assert!(!m.has_edge(a, b));
        let (g, outer, _) = m.to_graph().unwrap();
        HoledTriangulation::new(g.clone(), vec![], outer).unwrap();
        assert!(find_coloring(&g, 4).unwrap().is_some());
    }

    #[test]
    fn planted_ring_has_expected_size() {
        let mut m = lattice(5, 5);
        let code: RingCode = "2,3,2,3".parse().unwrap();
        let link = m.link(12).unwrap();
        let h = plant_ring(&mut m, 12, &code, link[0]).unwrap();
        assert_eq!(m.face(m.holes()[h]).len(), 4);
        assert_eq!(m.vertex_count(), 25 - 1 + 4);
        let bad: RingCode = "2,2,2,2".parse().unwrap();
        let mut m2 = lattice(5, 5);
        let l2 = m2.link(12).unwrap();
        assert!(plant_ring(&mut m2, 12, &bad, l2[0]).is_err());
    }
}
