//! Exact k-coloring by backtracking.
//!
//! Vertices are picked by saturation (distinct neighbour colors), then static
//! degree, then lowest index. After each assignment every uncolored neighbour is
//! checked for an empty domain. Runs are deterministic for a fixed graph encoding.

use super::{Coloring, Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Count,
    Enumerate,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::First => "first",
            Mode::Count => "count",
            Mode::Enumerate => "enumerate",
        }
    }
}

/// Vertex limits per mode. `count` shares the exhaustive limit with `enumerate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_first: usize,
    pub max_exhaustive: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_first: 60, max_exhaustive: 24 }
    }
}

impl OracleBudget {
    pub fn unlimited() -> Self {
        OracleBudget { max_first: usize::MAX, max_exhaustive: usize::MAX }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Witness(Option<Coloring>),
    Count(u64),
    All(Vec<Coloring>),
}

/// Result of a single oracle invocation plus the number of search nodes visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub outcome: OracleOutcome,
    pub nodes: u64,
}

impl OracleRun {
    pub fn witness(&self) -> Option<&Coloring> {
        match &self.outcome {
            OracleOutcome::Witness(w) => w.as_ref(),
            OracleOutcome::All(all) => all.first(),
            OracleOutcome::Count(_) => None,
        }
    }

    /// Whether at least one coloring exists, for any mode.
    pub fn colorable(&self) -> bool {
        match &self.outcome {
            OracleOutcome::Witness(w) => w.is_some(),
            OracleOutcome::Count(c) => *c > 0,
            OracleOutcome::All(all) => !all.is_empty(),
        }
    }

    /// Stable text transcript of the run, suitable for hashing into reports.
    pub fn transcript(&self) -> String {
        match &self.outcome {
            OracleOutcome::Witness(None) => format!("first;none;nodes={}", self.nodes),
            OracleOutcome::Witness(Some(c)) => format!("first;witness={:?};nodes={}", c.colors, self.nodes),
            OracleOutcome::Count(n) => format!("count={n};nodes={}", self.nodes),
            OracleOutcome::All(all) => format!("enumerate={};nodes={}", all.len(), self.nodes),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    pub budget: OracleBudget,
}

impl Oracle {
    pub fn new(budget: OracleBudget) -> Self {
        Oracle { budget }
    }

    pub fn run(&self, g: &Graph, k: u8, mode: Mode) -> Result<OracleRun, GraphError> {
        self.run_constrained(g, k, mode, &[])
    }

    /// Like [`Oracle::run`], with some vertices fixed in advance. `fixed` is either
    /// empty or has one entry per vertex.
    pub fn run_constrained(&self, g: &Graph, k: u8, mode: Mode, fixed: &[Option<u8>]) -> Result<OracleRun, GraphError> {
        if !(2..=4).contains(&k) {
            return Err(GraphError::BadPalette(k));
        }
        let n = g.vertex_count();
        let limit = match mode {
            Mode::First => self.budget.max_first,
            Mode::Count | Mode::Enumerate => self.budget.max_exhaustive,
        };
        if n > limit {
            return Err(GraphError::BudgetExceeded { n, limit, mode: mode.name() });
        }
        if !fixed.is_empty() && fixed.len() != n {
            return Err(GraphError::PartialColoring { got: fixed.len(), n });
        }
        let mut search = Search::new(g, k, mode);
        for (v, c) in fixed.iter().enumerate() {
            if let Some(c) = *c {
                if c == 0 || c > k {
                    return Err(GraphError::BadColor { color: c, palette: k });
                }
                if !search.domain_has(v, c) {
                    return Ok(search.finish());
                }
                search.assign(v, c);
                search.fixed_any = true;
            }
        }
        search.solve(0);
        Ok(search.finish())
    }
}

struct Search<'g> {
    g: &'g Graph,
    k: u8,
    mode: Mode,
    color: Vec<u8>,
    // forbid[v * 5 + c]: number of neighbours of v currently colored c
    forbid: Vec<u16>,
    uncolored: usize,
    fixed_any: bool,
    nodes: u64,
    count: u64,
    found: Vec<Coloring>,
    done: bool,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: u8, mode: Mode) -> Self {
        let n = g.vertex_count();
        Search {
            g,
            k,
            mode,
            color: vec![0; n],
            forbid: vec![0; n * 5],
            uncolored: n,
            fixed_any: false,
            nodes: 0,
            count: 0,
            found: Vec::new(),
            done: false,
        }
    }

    fn domain_has(&self, v: usize, c: u8) -> bool {
        self.forbid[v * 5 + c as usize] == 0
    }

    fn saturation(&self, v: usize) -> usize {
        (1..=self.k).filter(|&c| !self.domain_has(v, c)).count()
    }

    fn assign(&mut self, v: usize, c: u8) {
        self.color[v] = c;
        self.uncolored -= 1;
        for &u in self.g.neighbors(v) {
            self.forbid[u * 5 + c as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = 0;
        self.uncolored += 1;
        for &u in self.g.neighbors(v) {
            self.forbid[u * 5 + c as usize] -= 1;
        }
    }

    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (0, 0);
        for v in 0..self.g.vertex_count() {
            if self.color[v] != 0 {
                continue;
            }
            let k = (self.saturation(v), self.g.degree(v));
            if best == usize::MAX || k > key {
                best = v;
                key = k;
            }
        }
        best
    }

    fn wiped_out_neighbour(&self, v: usize) -> bool {
        self.g
            .neighbors(v)
            .iter()
            .any(|&u| self.color[u] == 0 && (1..=self.k).all(|c| !self.domain_has(u, c)))
    }

    fn solve(&mut self, max_used: u8) {
        if self.done {
            return;
        }
        self.nodes += 1;
        if self.uncolored == 0 {
            match self.mode {
                Mode::First => {
                    self.found.push(Coloring { palette: self.k, colors: self.color.clone() });
                    self.done = true;
                }
                Mode::Count => self.count += 1,
                Mode::Enumerate => self.found.push(Coloring { palette: self.k, colors: self.color.clone() }),
            }
            return;
        }
        let v = self.pick();
        // color-symmetry breaking is only sound when searching for one witness
        // from a blank slate
        let top = if self.mode == Mode::First && !self.fixed_any { (max_used + 1).min(self.k) } else { self.k };
        for c in 1..=top {
            if !self.domain_has(v, c) {
                continue;
            }
            self.assign(v, c);
            if !self.wiped_out_neighbour(v) {
                self.solve(max_used.max(c));
            }
            self.unassign(v);
            if self.done {
                return;
            }
        }
    }

    fn finish(self) -> OracleRun {
        let outcome = match self.mode {
            Mode::First => OracleOutcome::Witness(self.found.into_iter().next()),
            Mode::Count => OracleOutcome::Count(self.count),
            Mode::Enumerate => OracleOutcome::All(self.found),
        };
        OracleRun { outcome, nodes: self.nodes }
    }
}

/// Convenience wrapper over [`Oracle::run`] with the default budget.
pub fn k_colorable(g: &Graph, k: u8, mode: Mode) -> Result<OracleRun, GraphError> {
    Oracle::default().run(g, k, mode)
}

pub fn find_coloring(g: &Graph, k: u8) -> Result<Option<Coloring>, GraphError> {
    Ok(k_colorable(g, k, Mode::First)?.witness().cloned())
}

pub fn count_colorings(g: &Graph, k: u8) -> Result<u64, GraphError> {
    match k_colorable(g, k, Mode::Count)?.outcome {
        OracleOutcome::Count(c) => Ok(c),
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaticBound {
    Exact(u8),
    AboveFour,
}

/// Least k <= 4 admitting a proper coloring. A planar input classified as
/// `AboveFour` indicates malformed input.
pub fn chromatic_number_upto4(g: &Graph) -> Result<ChromaticBound, GraphError> {
    if g.vertex_count() == 0 {
        return Ok(ChromaticBound::Exact(0));
    }
    if g.edge_count() == 0 {
        return Ok(ChromaticBound::Exact(1));
    }
    for k in 2..=4 {
        if find_coloring(g, k)?.is_some() {
            return Ok(ChromaticBound::Exact(k));
        }
    }
    Ok(ChromaticBound::AboveFour)
}

#[cfg(test)]
mod tests {
    use super::super::is_proper;
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Graph::new(n, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn octahedron() -> Graph {
        // vertices 0..6, opposite pairs (0,1), (2,3), (4,5) are non-adjacent
        let mut e = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if a / 2 != b / 2 {
                    e.push((a, b));
                }
            }
        }
        Graph::new(6, e).unwrap()
    }

    /// Naive enumeration over all k^n assignments.
    fn brute_count(g: &Graph, k: u8) -> u64 {
        let n = g.vertex_count();
        let mut total = 0;
        let mut col = vec![1u8; n];
        loop {
            if g.edges().iter().all(|&(a, b)| col[a] != col[b]) {
                total += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                if col[i] < k {
                    col[i] += 1;
                    break;
                }
                col[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn clique_and_triangle() {
        assert!(find_coloring(&complete(4), 3).unwrap().is_none());
        assert_eq!(count_colorings(&complete(3), 3).unwrap(), 6);
        assert_eq!(count_colorings(&complete(4), 4).unwrap(), 24);
    }

    #[test]
    fn chromatic_classes() {
        assert_eq!(chromatic_number_upto4(&cycle(6)).unwrap(), ChromaticBound::Exact(2));
        assert_eq!(chromatic_number_upto4(&cycle(5)).unwrap(), ChromaticBound::Exact(3));
        assert_eq!(chromatic_number_upto4(&octahedron()).unwrap(), ChromaticBound::Exact(3));
        assert_eq!(chromatic_number_upto4(&complete(4)).unwrap(), ChromaticBound::Exact(4));
        assert_eq!(chromatic_number_upto4(&complete(5)).unwrap(), ChromaticBound::AboveFour);
    }

    #[test]
    fn budget_is_enforced() {
        let g = cycle(30);
        let err = k_colorable(&g, 3, Mode::Count).unwrap_err();
        assert_eq!(err, GraphError::BudgetExceeded { n: 30, limit: 24, mode: "count" });
        assert!(k_colorable(&g, 3, Mode::First).is_ok());
        assert!(Oracle::new(OracleBudget::unlimited()).run(&g, 2, Mode::Count).is_ok());
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let mut e = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.45) {
                        e.push((a, b));
                    }
                }
            }
            let g = Graph::new(n, e).unwrap();
            for k in 2..=4 {
                let expect = brute_count(&g, k);
                assert_eq!(count_colorings(&g, k).unwrap(), expect);
                let w = find_coloring(&g, k).unwrap();
                assert_eq!(w.is_some(), expect > 0);
                if let Some(w) = w {
                    assert!(is_proper(&g, &w).unwrap());
                }
                if let OracleOutcome::All(all) = k_colorable(&g, k, Mode::Enumerate).unwrap().outcome {
                    assert_eq!(all.len() as u64, expect);
                    assert!(all.iter().all(|c| is_proper(&g, c).unwrap()));
                }
            }
        }
    }

    #[test]
    fn constrained_runs_respect_fixed_colors() {
        let g = cycle(4);
        let fixed = vec![Some(1), None, Some(2), None];
        let run = Oracle::default().run_constrained(&g, 3, Mode::Count, &fixed).unwrap();
        assert_eq!(run.outcome, OracleOutcome::Count(1));
        let clash = vec![Some(1), Some(1), None, None];
        let run = Oracle::default().run_constrained(&g, 3, Mode::First, &clash).unwrap();
        assert!(!run.colorable());
    }

    #[test]
    fn adding_edges_never_helps() {
        let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let base = Graph::new(5, e.clone()).unwrap();
        assert!(find_coloring(&base, 2).unwrap().is_none());
        e.push((0, 2));
        let more = Graph::new(5, e).unwrap();
        assert!(find_coloring(&more, 2).unwrap().is_none());
    }
}
