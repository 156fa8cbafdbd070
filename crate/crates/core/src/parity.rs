//! Cyclic parity sequences and the e-collapse rewriting system.
//!
//! A [`ParitySeq`] records, fan by fan, whether a triangulated ring's fan holds an
//! even or odd number of triangles. The set T of accepted sequences is defined by
//! rewriting: a sequence belongs to T when some finite chain of e-collapses reaches
//! `ee` or an all-odd word whose length is a positive multiple of six.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParityError {
    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("entry {index} is odd; only even entries can be collapsed")]
    EntryNotEven { index: usize },
    #[error("sequence of length {len} is too short to collapse (need at least 4)")]
    SequenceTooShort { len: usize },
    #[error("parity sequences must have even length >= 2, got {len}")]
    BadLength { len: usize },
    #[error("invalid parity character {0:?} (expected 'e' or 'o')")]
    BadChar(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parity {
    E,
    O,
}

impl Parity {
    pub fn of(n: u32) -> Parity {
        if n.is_multiple_of(2) {
            Parity::E
        } else {
            Parity::O
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::E
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::E
        } else {
            Parity::O
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::E => "e",
            Parity::O => "o",
        })
    }
}

/// Offset of the lexicographically least rotation, considering only offsets that
/// are multiples of `step`. Ties resolve to the smallest offset.
pub(crate) fn least_rotation<T: Ord>(items: &[T], step: usize) -> usize {
    let n = items.len();
    let mut best = 0;
    let mut off = step;
    while off < n {
        let cand = (0..n).map(|i| &items[(off + i) % n]);
        let cur = (0..n).map(|i| &items[(best + i) % n]);
        if cand.lt(cur) {
            best = off;
        }
        off += step;
    }
    best
}

pub(crate) fn rotated<T: Clone>(items: &[T], off: usize) -> Vec<T> {
    let n = items.len();
    (0..n).map(|i| items[(off + i) % n].clone()).collect()
}

/// Replace the cyclic triple centred at `j` by `merge(prev, next)`.
///
/// Output order: for `1 <= j <= n-2` the merged entry sits at `j-1`; for `j = 0` it
/// leads the output; for `j = n-1` it closes it. Callers guarantee `n >= 3`.
pub(crate) fn collapse_cyclic<T: Clone>(items: &[T], j: usize, merge: impl FnOnce(&T, &T) -> T) -> Vec<T> {
    let n = items.len();
    debug_assert!(n >= 3 && j < n);
    let prev = &items[(j + n - 1) % n];
    let next = &items[(j + 1) % n];
    let merged = merge(prev, next);
    let mut out = Vec::with_capacity(n - 2);
    if j == 0 {
        out.push(merged);
        out.extend_from_slice(&items[2..n - 1]);
    } else if j == n - 1 {
        out.extend_from_slice(&items[1..n - 2]);
        out.push(merged);
    } else {
        out.extend_from_slice(&items[..j - 1]);
        out.push(merged);
        out.extend_from_slice(&items[j + 2..]);
    }
    out
}

/// Cyclic, even-length word over {e, o}.
///
/// Equality and hashing are rotation-invariant; [`ParitySeq::as_slice`] exposes the
/// stored order when position matters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ParitySeq(Vec<Parity>);

impl ParitySeq {
    pub fn new(entries: Vec<Parity>) -> Result<Self, ParityError> {
        if entries.len() < 2 || !entries.len().is_multiple_of(2) {
            return Err(ParityError::BadLength { len: entries.len() });
        }
        Ok(ParitySeq(entries))
    }

    pub fn from_runs(runs: &[u32]) -> Result<Self, ParityError> {
        Self::new(runs.iter().map(|&r| Parity::of(r)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Parity] {
        &self.0
    }

    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|p| **p == Parity::O).count()
    }

    /// e-collapse at `j`: the triple `(p[j-1], p[j], p[j+1])` becomes `p[j-1] + p[j+1]`.
    pub fn e_collapse(&self, j: usize) -> Result<ParitySeq, ParityError> {
        let len = self.len();
        if j >= len {
            return Err(ParityError::IndexOutOfRange { index: j, len });
        }
        if self.0[j] != Parity::E {
            return Err(ParityError::EntryNotEven { index: j });
        }
        if len < 4 {
            return Err(ParityError::SequenceTooShort { len });
        }
        Ok(ParitySeq(collapse_cyclic(&self.0, j, |a, b| *a + *b)))
    }

    /// Positions at which an e-collapse is legal.
    pub fn collapse_positions(&self) -> Vec<usize> {
        if self.len() < 4 {
            return Vec::new();
        }
        (0..self.len()).filter(|&j| self.0[j].is_even()).collect()
    }

    pub fn canonical_offset(&self) -> usize {
        least_rotation(&self.0, 1)
    }

    /// Lexicographically least rotation (e < o).
    pub fn canonicalize(&self) -> ParitySeq {
        ParitySeq(rotated(&self.0, self.canonical_offset()))
    }

    pub fn reversed(&self) -> ParitySeq {
        ParitySeq(self.0.iter().rev().copied().collect())
    }

    /// True when the cyclic word is fixed by at least one reflection of the dihedral
    /// group, i.e. `p[i] == p[c - i]` for every `i` and some centre `c`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).any(|c| (0..n).all(|i| self.0[i] == self.0[(c + n - i) % n]))
    }

    /// `ee`, or all-odd of length `6m` with `m >= 1`.
    pub fn is_terminal_accept(&self) -> bool {
        let n = self.len();
        (n == 2 && self.0.iter().all(|p| p.is_even()))
            || (n.is_multiple_of(6) && self.0.iter().all(|p| !p.is_even()))
    }

    fn canonical_key(&self) -> Vec<Parity> {
        rotated(&self.0, self.canonical_offset())
    }
}

impl PartialEq for ParitySeq {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for ParitySeq {}

impl std::hash::Hash for ParitySeq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

impl fmt::Display for ParitySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ParitySeq {
    type Err = ParityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_lowercase() {
                'e' => Ok(Parity::E),
                'o' => Ok(Parity::O),
                other => Err(ParityError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        ParitySeq::new(entries)
    }
}

impl TryFrom<String> for ParitySeq {
    type Error = ParityError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ParitySeq> for String {
    fn from(s: ParitySeq) -> String {
        s.to_string()
    }
}

/// Reference semantics for T: memoized search over every collapse order.
///
/// The memo is keyed on canonical rotations and survives across calls, so a sweep
/// over many words shares work.
#[derive(Debug, Default)]
pub struct ExhaustiveSearch {
    memo: Mutex<HashMap<Vec<Parity>, bool>>,
}

impl ExhaustiveSearch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, seq: &ParitySeq) -> bool {
        let key = seq.canonical_key();
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let canon = ParitySeq(key.clone());
        let verdict = canon.is_terminal_accept()
            || canon
                .collapse_positions()
                .into_iter()
                .any(|j| self.contains(&canon.e_collapse(j).expect("legal position")));
        self.memo.lock().unwrap().insert(key, verdict);
        verdict
    }

    /// A chain of collapse positions (indices into the sequence as it stands at each
    /// step) ending in an accepting terminal, if one exists.
    pub fn accepting_path(&self, seq: &ParitySeq) -> Option<Vec<usize>> {
        if let Some(path) = greedy_path(seq).filter(|(_, ok)| *ok).map(|(p, _)| p) {
            return Some(path);
        }
        let mut path = Vec::new();
        let mut cur = seq.clone();
        loop {
            if cur.is_terminal_accept() {
                return Some(path);
            }
            let j = cur
                .collapse_positions()
                .into_iter()
                .find(|&j| self.contains(&cur.e_collapse(j).expect("legal position")))?;
            path.push(j);
            cur = cur.e_collapse(j).expect("legal position");
        }
    }
}

/// Greedy collapse chain: always the leftmost e of the canonical rotation, mapped
/// back to a position in the current sequence. Returns the path and whether its
/// end point is accepting.
pub fn greedy_path(seq: &ParitySeq) -> Option<(Vec<usize>, bool)> {
    let mut cur = seq.clone();
    let mut path = Vec::new();
    loop {
        if cur.len() <= 2 {
            break;
        }
        let off = cur.canonical_offset();
        let n = cur.len();
        let Some(first_e) = (0..n).find(|&i| cur.0[(off + i) % n].is_even()) else {
            break;
        };
        let j = (off + first_e) % n;
        path.push(j);
        cur = cur.e_collapse(j).ok()?;
    }
    let ok = cur.is_terminal_accept();
    Some((path, ok))
}

pub fn in_t_exhaustive(seq: &ParitySeq) -> bool {
    ExhaustiveSearch::new().contains(seq)
}

pub fn in_t_greedy(seq: &ParitySeq) -> bool {
    greedy_path(seq).map(|(_, ok)| ok).unwrap_or(false)
}

/// A strategy for deciding membership in T.
pub trait Membership: Send + Sync {
    fn name(&self) -> &'static str;
    fn contains(&self, seq: &ParitySeq) -> bool;
}

pub struct Greedy;

impl Membership for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn contains(&self, seq: &ParitySeq) -> bool {
        in_t_greedy(seq)
    }
}

impl Membership for ExhaustiveSearch {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn contains(&self, seq: &ParitySeq) -> bool {
        ExhaustiveSearch::contains(self, seq)
    }
}

/// Registered membership deciders, looked up by name.
pub struct MembershipRegistry {
    entries: Vec<Box<dyn Membership>>,
}

impl MembershipRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ExhaustiveSearch::new()));
        reg.register(Box::new(Greedy));
        reg
    }

    pub fn register(&mut self, decider: Box<dyn Membership>) {
        self.entries.retain(|d| d.name() != decider.name());
        self.entries.push(decider);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Membership> {
        self.entries.iter().find(|d| d.name() == name).map(|d| d.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|d| d.name()).collect()
    }
}

impl Default for MembershipRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

/// Every cyclic word of length `len`, in binary counting order (e = 0, o = 1,
/// position 0 most significant).
pub fn all_words(len: usize) -> impl Iterator<Item = ParitySeq> {
    assert!(len <= 30);
    (0u32..(1u32 << len)).map(move |bits| {
        ParitySeq(
            (0..len)
                .map(|i| if bits >> (len - 1 - i) & 1 == 1 { Parity::O } else { Parity::E })
                .collect(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> ParitySeq {
        x.parse().unwrap()
    }

    #[test]
    fn worked_collapse_example() {
        assert_eq!(s("ooeeoeoo").e_collapse(5).unwrap().to_string(), "ooeeeo");
        assert_eq!(s("eeee").e_collapse(1).unwrap().to_string(), "ee");
        assert_eq!(s("oeoe").e_collapse(1).unwrap().to_string(), "ee");
    }

    #[test]
    fn collapse_errors() {
        assert_eq!(s("oeoe").e_collapse(4), Err(ParityError::IndexOutOfRange { index: 4, len: 4 }));
        assert_eq!(s("oeoe").e_collapse(0), Err(ParityError::EntryNotEven { index: 0 }));
        assert_eq!(s("ee").e_collapse(0), Err(ParityError::SequenceTooShort { len: 2 }));
    }

    #[test]
    fn collapse_wraps_around() {
        // j = 0 merges the last and second entries and leads with the result
        assert_eq!(s("eooeoo").e_collapse(0).unwrap().to_string(), "eoeo");
        assert_eq!(s("ooeeoe").e_collapse(5).unwrap().as_slice().len(), 4);
        assert_eq!(s("ooeeoe").e_collapse(5).unwrap().to_string(), "oeee");
    }

    #[test]
    fn terminals() {
        assert!(s("ee").is_terminal_accept());
        assert!(s("oooooo").is_terminal_accept());
        assert!(s("oooooooooooo").is_terminal_accept());
        assert!(!s("oooo").is_terminal_accept());
        assert!(!s("oe").is_terminal_accept());
        assert!(!s("oo").is_terminal_accept());
        assert!(!s("eeee").is_terminal_accept());
    }

    #[test]
    fn exhaustive_examples() {
        assert!(!in_t_exhaustive(&s("oe")));
        assert!(in_t_exhaustive(&s("oeoe")));
        assert!(!in_t_exhaustive(&s("ooeeoeoo")));
    }

    #[test]
    fn greedy_examples() {
        assert!(in_t_greedy(&s("eeee")));
        assert!(!in_t_greedy(&s("oooo")));
        assert!(!in_t_greedy(&s("ooeeoeoo")));
    }

    #[test]
    fn canonical_forms() {
        // rotations of oeeo: oeeo, eeoo, eooe, ooee
        assert_eq!(s("oeeo").canonicalize().to_string(), "eeoo");
        assert_eq!(s("ee").canonicalize().to_string(), "ee");
        assert_eq!(s("oooooo").canonicalize().to_string(), "oooooo");
        assert_eq!(s("oeeo"), s("eooe"));
    }

    #[test]
    fn symmetry() {
        assert!(s("oeoe").is_symmetric());
        assert!(!s("ooeoee").is_symmetric());
        assert!(s("ee").is_symmetric());
        assert!("eeo".parse::<ParitySeq>().is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!("oex".parse::<ParitySeq>().unwrap_err(), ParityError::BadChar('x'));
        assert_eq!("ooo".parse::<ParitySeq>().unwrap_err(), ParityError::BadLength { len: 3 });
        assert!("".parse::<ParitySeq>().is_err());
    }

    #[test]
    fn accepting_path_replays() {
        let search = ExhaustiveSearch::new();
        for w in all_words(10) {
            match search.accepting_path(&w) {
                Some(path) => {
                    let mut cur = w.clone();
                    for j in path {
                        cur = cur.e_collapse(j).unwrap();
                    }
                    assert!(cur.is_terminal_accept(), "{w}");
                }
                None => assert!(!search.contains(&w)),
            }
        }
    }

    #[test]
    fn registry_lookup() {
        let reg = MembershipRegistry::standard();
        assert_eq!(reg.names(), vec!["exhaustive", "greedy"]);
        assert!(reg.get("greedy").unwrap().contains(&s("eeee")));
        assert!(reg.get("nope").is_none());
    }
}
