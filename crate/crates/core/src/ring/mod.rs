//! Triangulated rings described by their fan run lengths.
//!
//! A ring is an annulus between an inner cycle `C_i` and an outer cycle `C_o` whose
//! faces, apart from the two cycles, are triangles. Walking around the annulus the
//! triangles come in maximal runs that share an apex: A-runs have their base on
//! `C_i` and apex on `C_o`, B-runs the reverse. Runs alternate, so a ring is fully
//! described by the cyclic list of run lengths starting with an A-run.

mod color;
mod layout;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::parity::{in_t_exhaustive, least_rotation, rotated, ParitySeq};

pub use color::{color3, fill_fan, FanFill};
pub use layout::{FanCollapse, FanKind, RingLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unrealizable ring code: {0}")]
    Unrealizable(String),
    #[error("fan {index} has an odd number of triangles")]
    NotEvenFan { index: usize },
    #[error("fan index {index} out of range for {len} fans")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("fan collapse needs at least 4 fans, ring has {0}")]
    TooFewFans(usize),
    #[error("fan fill infeasible: {0}")]
    Infeasible(String),
    #[error("invalid fan fill input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("cannot parse ring code: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Cyclic run-length code of a triangulated ring. Even positions are A-runs.
///
/// Equality compares canonical forms: the least rotation by an even offset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RingCodeJson", into = "RingCodeJson")]
pub struct RingCode {
    runs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RingCodeJson {
    runs: Vec<u32>,
}

impl TryFrom<RingCodeJson> for RingCode {
    type Error = RingError;

    fn try_from(j: RingCodeJson) -> Result<Self, RingError> {
        RingCode::new(j.runs)
    }
}

impl From<RingCode> for RingCodeJson {
    fn from(c: RingCode) -> Self {
        RingCodeJson { runs: c.runs }
    }
}

impl RingCode {
    pub fn new(runs: Vec<u32>) -> Result<Self, RingError> {
        if !runs.len().is_multiple_of(2) {
            return Err(RingError::Unrealizable(format!("odd number of runs ({})", runs.len())));
        }
        if runs.len() < 4 {
            return Err(RingError::Unrealizable(format!(
                "{} runs; a simple ring needs at least 4",
                runs.len()
            )));
        }
        if let Some(i) = runs.iter().position(|&r| r == 0) {
            return Err(RingError::Unrealizable(format!("run {i} is empty")));
        }
        let code = RingCode { runs };
        if code.inner_len() < 3 {
            return Err(RingError::Unrealizable(format!("|C_i| = {} < 3", code.inner_len())));
        }
        if code.outer_len() < 3 {
            return Err(RingError::Unrealizable(format!("|C_o| = {} < 3", code.outer_len())));
        }
        Ok(code)
    }

    pub fn runs(&self) -> &[u32] {
        &self.runs
    }

    pub fn fan_count(&self) -> usize {
        self.runs.len()
    }

    pub fn inner_len(&self) -> usize {
        self.runs.iter().step_by(2).map(|&r| r as usize).sum()
    }

    pub fn outer_len(&self) -> usize {
        self.runs.iter().skip(1).step_by(2).map(|&r| r as usize).sum()
    }

    pub fn triangles(&self) -> usize {
        self.runs.iter().map(|&r| r as usize).sum()
    }

    pub fn canonical(&self) -> RingCode {
        RingCode { runs: rotated(&self.runs, least_rotation(&self.runs, 2)) }
    }

    pub fn is_canonical(&self) -> bool {
        least_rotation(&self.runs, 2) == 0
    }

    pub fn layout(&self) -> RingLayout {
        RingLayout::new(self.runs.clone(), FanKind::A)
    }

    pub fn cps(&self) -> ParitySeq {
        ParitySeq::from_runs(&self.runs).expect("ring codes have even length")
    }

    /// Explicit ring: inner vertices `0..|C_i|`, then outer vertices.
    pub fn realize(&self) -> Graph {
        self.layout().to_graph().expect("valid ring codes realize as simple plane graphs")
    }

    pub fn fan_collapse(&self, j: usize) -> Result<FanCollapse, RingError> {
        self.layout().fan_collapse(j)
    }

    /// 3-colorability through the parity criterion.
    pub fn decide3(&self) -> bool {
        in_t_exhaustive(&self.cps())
    }

    pub fn all_even(&self) -> bool {
        self.runs.iter().all(|r| r % 2 == 0)
    }

    pub fn all_odd(&self) -> bool {
        self.runs.iter().all(|r| r % 2 == 1)
    }

    /// Implication checked for the all-even / all-odd size claims: a 3-colorable
    /// all-even ring has `|C_i| = 0 mod 3`; a 3-colorable all-odd ring has
    /// `|C_i| = |C_o|`, even, and not 4. Vacuously true otherwise.
    pub fn lemma1_predicate(&self) -> bool {
        let ni = self.inner_len();
        let no = self.outer_len();
        if self.all_even() && self.decide3() && !ni.is_multiple_of(3) {
            return false;
        }
        if self.all_odd() && self.decide3() && !(ni == no && ni.is_multiple_of(2) && ni != 4) {
            return false;
        }
        true
    }

    /// Antecedent of the symmetric-sequence sufficiency claim.
    pub fn lemma3_antecedent(&self) -> bool {
        let ni = self.inner_len();
        let no = self.outer_len();
        self.cps().is_symmetric() && (no.is_multiple_of(3) || (ni + no).is_multiple_of(3))
    }

    /// Symmetric cps with `|C_o| = 0 mod 3` or `|C_i| + |C_o| = 0 mod 3` implies
    /// 3-colorable.
    pub fn lemma3_predicate(&self) -> bool {
        !self.lemma3_antecedent() || self.decide3()
    }
}

impl PartialEq for RingCode {
    fn eq(&self, other: &Self) -> bool {
        self.canonical().runs == other.canonical().runs
    }
}

impl Eq for RingCode {}

impl std::hash::Hash for RingCode {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical().runs.hash(state);
    }
}

impl fmt::Display for RingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.runs.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for RingCode {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        let runs = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| RingError::Parse(format!("bad run {p:?} in {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        RingCode::new(runs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> RingCode {
        s.parse().unwrap()
    }

    #[test]
    fn cps_of_codes() {
        // (1,2,1,2) has |C_i| = 2 and is not a ring; its parity word is still defined
        assert_eq!(ParitySeq::from_runs(&[1, 2, 1, 2]).unwrap().to_string(), "oeoe");
        assert!("1,2,1,2".parse::<RingCode>().is_err());
        assert_eq!(code("2,2,2,2").cps().to_string(), "eeee");
        assert_eq!(code("1,1,1,1,1,1").cps().to_string(), "oooooo");
    }

    #[test]
    fn validation() {
        assert!(matches!("1,1".parse::<RingCode>(), Err(RingError::Unrealizable(_))));
        assert!(matches!("1,1,1,2".parse::<RingCode>(), Err(RingError::Unrealizable(_))));
        assert!(matches!("1,0,2,3".parse::<RingCode>(), Err(RingError::Unrealizable(_))));
        assert!(matches!("1,2,x".parse::<RingCode>(), Err(RingError::Parse(_))));
        assert!(matches!("1,2,3".parse::<RingCode>(), Err(RingError::Unrealizable(_))));
    }

    #[test]
    fn canonical_equality_is_type_preserving() {
        assert_eq!(code("2,1,3,2"), code("3,2,2,1"));
        assert_eq!(code("3,2,2,1").canonical().runs(), &[2, 1, 3, 2]);
        assert!(!code("3,2,2,1").is_canonical());
        // shifting by one swaps inner and outer: a different ring
        assert_ne!(code("2,1,3,2"), code("1,3,2,2"));
    }

    #[test]
    fn json_form() {
        let c: RingCode = serde_json::from_str(r#"{"runs":[2,1,2,3]}"#).unwrap();
        assert_eq!(c.runs(), &[2, 1, 2, 3]);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"runs":[2,1,2,3]}"#);
        assert!(serde_json::from_str::<RingCode>(r#"{"runs":[1,1]}"#).is_err());
    }

    #[test]
    fn decide3_examples() {
        assert!(code("1,1,1,1,1,1").decide3());
        assert!(!code("3,3,3,3").decide3());
        assert!(code("2,2,2,2").decide3());
    }

    #[test]
    fn lemma1_examples() {
        assert!(!code("1,1,1,1,1,1").lemma1_predicate());
        assert!(!code("2,2,2,2").lemma1_predicate());
        assert!(code("3,3,3,3").lemma1_predicate());
    }

    #[test]
    fn lemma3_examples() {
        assert!(code("1,1,1,1,1,1").lemma3_predicate());
        assert!(!code("3,3,3,3").lemma3_predicate());
        // cps eoee is fixed by the reflection through positions 1 and 3, and
        // |C_o| = 3, so the antecedent holds while the ring is not 3-colorable
        assert!(code("2,1,2,2").lemma3_antecedent());
        assert!(!code("2,1,2,2").lemma3_predicate());
        // antecedent fails: |C_o| = 4, |C_i| + |C_o| = 8
        assert!(code("2,1,2,3").lemma3_predicate());
    }
}
