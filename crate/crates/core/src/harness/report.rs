use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::campaign::CampaignConfig;
use super::HarnessError;
use crate::graph::{is_proper, Coloring, Graph, GraphJson, Mode, Oracle, OracleOutcome, OracleRun};
use crate::holes::HoledTriangulation;
use crate::parity::{in_t_greedy, ExhaustiveSearch, ParitySeq};
use crate::ring::RingCode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// A proven claim: any counterexample is a defect.
    Hard,
    /// An unproven or informal claim: counterexamples are findings.
    Soft,
}

/// Full payload of a counterexample, enough to re-run the check without the seed.
/// Externally tagged: internal tagging buffers the payload, which breaks integer
/// map keys in graph labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instance {
    Ring { code: RingCode },
    Holed { instance: HoledTriangulation },
    Graph { graph: GraphJson },
    Word { word: ParitySeq },
}

impl Instance {
    /// The graph the oracle is run on, if any.
    pub fn graph(&self) -> Result<Option<Graph>, HarnessError> {
        Ok(match self {
            Instance::Ring { code } => Some(code.realize()),
            Instance::Holed { instance } => Some(instance.graph().clone()),
            Instance::Graph { graph } => Some(Graph::try_from(graph.clone())?),
            Instance::Word { .. } => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|e| format!("<unserializable instance: {e}>"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEvidence {
    /// `first` or `count`.
    pub mode: String,
    pub colorable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Coloring>,
    /// SHA-256 of the oracle transcript, hex.
    pub transcript_sha256: String,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn mode_of(name: &str) -> Result<Mode, HarnessError> {
    match name {
        "first" => Ok(Mode::First),
        "count" => Ok(Mode::Count),
        other => Err(HarnessError::Report(format!("unknown oracle mode {other:?}"))),
    }
}

impl OracleEvidence {
    pub fn from_run(mode: Mode, run: &OracleRun) -> Self {
        OracleEvidence {
            mode: if mode == Mode::Count { "count" } else { "first" }.to_string(),
            colorable: run.colorable(),
            count: match run.outcome {
                OracleOutcome::Count(c) => Some(c),
                _ => None,
            },
            witness: run.witness().cloned(),
            transcript_sha256: sha256_hex(&run.transcript()),
        }
    }

    pub fn collect(oracle: &Oracle, g: &Graph, mode: Mode) -> Result<Self, HarnessError> {
        Ok(Self::from_run(mode, &oracle.run(g, 3, mode)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Which check failed, e.g. `decide3_disagrees` or `sufficiency`.
    pub kind: String,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub instance: Instance,
    pub expected: String,
    pub observed: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub evidence: Option<OracleEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub claim: String,
    /// Whether the claim as a whole is asserted (proven) or only reported.
    pub severity: Severity,
    pub config: CampaignConfig,
    pub instances: u64,
    pub agreements: u64,
    pub counterexamples: Vec<Counterexample>,
    pub stats: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn hard_failures(&self) -> usize {
        self.counterexamples.iter().filter(|c| c.severity == Severity::Hard).count()
    }

    /// Pretty JSON with a trailing newline; stable for a fixed report.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let r: AuditReport = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Report(format!(
                "schema version {} not supported (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    /// One-row CSV summary with a header.
    pub fn summary_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "claim",
            "severity",
            "seed",
            "instances",
            "agreements",
            "counterexamples",
            "hard_failures",
        ])?;
        w.write_record([
            self.claim.clone(),
            format!("{:?}", self.severity).to_lowercase(),
            self.config.seed.to_string(),
            self.instances.to_string(),
            self.agreements.to_string(),
            self.counterexamples.len().to_string(),
            self.hard_failures().to_string(),
        ])?;
        let bytes = w.into_inner().map_err(|e| HarnessError::Report(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Membership facts about a parity word, as recorded in confluence reports.
pub(crate) fn word_observation(word: &ParitySeq) -> Result<String, HarnessError> {
    let search = ExhaustiveSearch::new();
    let mut s = format!("exhaustive={};greedy={}", search.contains(word), in_t_greedy(word));
    for j in word.collapse_positions() {
        s.push_str(&format!(";collapse@{j}={}", search.contains(&word.e_collapse(j)?)));
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecheckFailure {
    pub index: usize,
    pub reason: String,
}

/// Re-run the oracle (or, for parity words, the membership search) on a recorded
/// counterexample and compare with what the report claims.
pub fn recheck_counterexample(cx: &Counterexample, oracle: &Oracle) -> Result<(), String> {
    let graph = cx.instance.graph().map_err(|e| format!("instance does not load: {e}"))?;
    match (graph, &cx.evidence) {
        (None, None) => {
            let Instance::Word { word } = &cx.instance else { unreachable!() };
            let now = word_observation(word).map_err(|e| e.to_string())?;
            if now != cx.observed {
                return Err(format!("recorded {:?}, recomputed {now:?}", cx.observed));
            }
            Ok(())
        }
        (None, Some(_)) => Err("oracle evidence on a non-graph instance".into()),
        (Some(_), None) => Err("graph instance without oracle evidence".into()),
        (Some(g), Some(ev)) => {
            let mode = mode_of(&ev.mode).map_err(|e| e.to_string())?;
            let run = oracle.run(&g, 3, mode).map_err(|e| format!("oracle failed: {e}"))?;
            let fresh = OracleEvidence::from_run(mode, &run);
            if fresh.colorable != ev.colorable {
                return Err(format!("recorded colorable={}, fresh oracle says {}", ev.colorable, fresh.colorable));
            }
            if fresh.count != ev.count {
                return Err(format!("recorded count {:?}, fresh oracle {:?}", ev.count, fresh.count));
            }
            if let Some(w) = &ev.witness {
                if !is_proper(&g, w).map_err(|e| e.to_string())? {
                    return Err("recorded witness is not a proper coloring".into());
                }
            }
            if fresh.transcript_sha256 != ev.transcript_sha256 {
                return Err("oracle transcript digest differs".into());
            }
            Ok(())
        }
    }
}

pub fn recheck_report(report: &AuditReport, oracle: &Oracle) -> Vec<RecheckFailure> {
    report
        .counterexamples
        .iter()
        .enumerate()
        .filter_map(|(index, cx)| recheck_counterexample(cx, oracle).err().map(|reason| RecheckFailure { index, reason }))
        .collect()
}
