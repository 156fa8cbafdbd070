use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::extract::{extract_ring, ExtractedRing};
use super::{HoledTriangulation, HolesError};
use crate::graph::{is_proper, Coloring, Mode, Oracle};
use crate::ring::color3;

/// Hole graph: holes are adjacent when their rings share an edge. The ring edge set
/// of a hole is taken as every edge of a face incident to its boundary, which
/// coincides with the extracted ring's edges whenever extraction succeeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleAdjacency {
    pub holes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Minimum-index BFS forest: `(child, parent)` pairs in visiting order.
    pub tree: Vec<(usize, usize)>,
    /// Holes in BFS order, component by component.
    pub order: Vec<usize>,
    /// Component roots.
    pub roots: Vec<usize>,
}

pub(crate) fn star_edges(ht: &HoledTriangulation, hole: usize) -> BTreeSet<(usize, usize)> {
    let boundary: BTreeSet<usize> = ht.hole_boundary(hole).iter().copied().collect();
    let mut out = BTreeSet::new();
    for f in ht.faces() {
        if f.iter().any(|v| boundary.contains(v)) {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                out.insert((a.min(b), a.max(b)));
            }
        }
    }
    out
}

impl HoleAdjacency {
    pub fn build(ht: &HoledTriangulation) -> Self {
        let k = ht.hole_count();
        let stars: Vec<_> = (0..k).map(|h| star_edges(ht, h)).collect();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if !stars[i].is_disjoint(&stars[j]) {
                    edges.push((i, j));
                }
            }
        }
        let mut adj = vec![Vec::new(); k];
        for &(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; k];
        let (mut tree, mut order, mut roots) = (Vec::new(), Vec::new(), Vec::new());
        for root in 0..k {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            roots.push(root);
            let mut queue = VecDeque::from([root]);
            while let Some(h) = queue.pop_front() {
                order.push(h);
                for &w in &adj[h] {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push((w, h));
                        queue.push_back(w);
                    }
                }
            }
        }
        HoleAdjacency { holes: k, edges, tree, order, roots }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn in_tree(&self, i: usize, j: usize) -> bool {
        self.tree.iter().any(|&(c, p)| (c, p) == (i, j) || (c, p) == (j, i))
    }
}

/// Tri-state answer to "is this holed triangulation 3-colorable?".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HoleVerdict {
    /// Some ring's parity sequence is outside T, so that ring (a subgraph) is not
    /// 3-colorable.
    No { hole: usize, cps: String },
    /// A verified proper 3-coloring.
    Yes { witness: Coloring },
    /// Every ring passes the parity test but no 3-coloring of the whole graph
    /// exists that extends them.
    CriterionYesUnconfirmed,
}

/// Ring coloring moved onto original vertices.
fn ring_assignment(ring: &ExtractedRing) -> Result<Option<Vec<(usize, u8)>>, HolesError> {
    Ok(color3(&ring.code)?.map(|c| ring.vertex_map.iter().enumerate().map(|(i, &v)| (v, c.get(i))).collect()))
}

const PERMS: [[u8; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

struct Assembler<'a> {
    ht: &'a HoledTriangulation,
    oracle: &'a Oracle,
    rings: Vec<Vec<(usize, u8)>>,
    order: Vec<usize>,
    colors: Vec<Option<u8>>,
}

impl Assembler<'_> {
    /// Place rings in tree order, permuting each rigid ring coloring to agree with
    /// what is already colored, then complete with the constrained oracle.
    fn place(&mut self, idx: usize) -> Result<Option<Coloring>, HolesError> {
        if idx == self.order.len() {
            let run = self.oracle.run_constrained(self.ht.graph(), 3, Mode::First, &self.colors)?;
            return Ok(run.witness().cloned());
        }
        let h = self.order[idx];
        // The very first ring fixes the color names.
        let perms: &[[u8; 3]] = if idx == 0 { &PERMS[..1] } else { &PERMS };
        for perm in perms {
            let ring = &self.rings[h];
            let fits = ring.iter().all(|&(v, c)| self.colors[v].is_none_or(|x| x == perm[c as usize - 1]));
            if !fits {
                continue;
            }
            let fresh: Vec<usize> = ring.iter().filter(|&&(v, _)| self.colors[v].is_none()).map(|&(v, _)| v).collect();
            let ring = ring.clone();
            for &(v, c) in &ring {
                self.colors[v] = Some(perm[c as usize - 1]);
            }
            if let Some(done) = self.place(idx + 1)? {
                return Ok(Some(done));
            }
            for v in fresh {
                self.colors[v] = None;
            }
        }
        Ok(None)
    }
}

/// Constructive 3-coloring following the hole spanning forest. `None` means no
/// 3-coloring exists: either a ring is not 3-colorable, or no combination of ring
/// colorings (each unique up to permutation) extends to the whole graph.
pub fn color3_holes_with(ht: &HoledTriangulation, oracle: &Oracle) -> Result<Option<Coloring>, HolesError> {
    let mut rings = Vec::new();
    for h in 0..ht.hole_count() {
        match ring_assignment(&extract_ring(ht, h)?)? {
            Some(r) => rings.push(r),
            None => return Ok(None),
        }
    }
    let adj = HoleAdjacency::build(ht);
    let mut asm = Assembler {
        ht,
        oracle,
        rings,
        order: adj.order.clone(),
        colors: vec![None; ht.vertex_count()],
    };
    let out = asm.place(0)?;
    if let Some(c) = &out {
        if !is_proper(ht.graph(), c)? {
            return Err(HolesError::Ring(crate::ring::RingError::InternalInconsistency(
                "assembled coloring is improper".into(),
            )));
        }
    }
    Ok(out)
}

pub fn color3_holes(ht: &HoledTriangulation) -> Result<Option<Coloring>, HolesError> {
    color3_holes_with(ht, &Oracle::default())
}

pub fn decide3_holes_with(ht: &HoledTriangulation, oracle: &Oracle) -> Result<HoleVerdict, HolesError> {
    let mut rings = Vec::new();
    for h in 0..ht.hole_count() {
        rings.push(extract_ring(ht, h)?);
    }
    for r in &rings {
        if !r.code.decide3() {
            return Ok(HoleVerdict::No { hole: r.hole, cps: r.code.cps().to_string() });
        }
    }
    Ok(match color3_holes_with(ht, oracle)? {
        Some(witness) => HoleVerdict::Yes { witness },
        None => HoleVerdict::CriterionYesUnconfirmed,
    })
}

pub fn decide3_holes(ht: &HoledTriangulation) -> Result<HoleVerdict, HolesError> {
    decide3_holes_with(ht, &Oracle::default())
}
