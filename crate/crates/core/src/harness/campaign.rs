use serde::{Deserialize, Serialize};

use super::audits::{AuditContext, AuditRegistry};
use super::report::{recheck_counterexample, AuditReport, SCHEMA_VERSION};
use super::HarnessError;
use crate::graph::Oracle;

/// Everything a campaign depends on. Two runs with equal configs produce
/// byte-identical reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub claim: String,
    pub seed: u64,
    /// Triangle budget for ring-code enumeration.
    pub max_triangles: usize,
    /// Largest single run allowed in enumerated codes.
    pub max_run: u32,
    /// Vertex budget for generated holed instances.
    pub max_vertices: usize,
    /// Number of generated instances.
    pub instances: usize,
    pub max_holes: usize,
    /// Longest parity word in the confluence sweep.
    pub max_word_len: usize,
    /// Longest inserted cycle in the Theorem 4 audit.
    pub max_cycle: usize,
    /// Soft counterexamples kept in full; the rest are only counted.
    pub max_records: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            claim: "lemma2".into(),
            seed: 0,
            max_triangles: 12,
            max_run: 12,
            max_vertices: 40,
            instances: 200,
            max_holes: 3,
            max_word_len: 14,
            max_cycle: 5,
            max_records: 100,
        }
    }
}

impl CampaignConfig {
    /// Config for `claim` with its main budget set to `budget`: the triangle budget
    /// for ring claims, the word length for confluence, the instance count for
    /// theorem3.
    pub fn for_claim(claim: &str, budget: usize, seed: u64) -> Result<Self, HarnessError> {
        let mut cfg = CampaignConfig { claim: claim.to_string(), seed, ..Default::default() };
        match claim {
            "lemma1" | "lemma2" | "lemma3" | "rigidity" | "theorem4" => {
                cfg.max_triangles = budget;
                cfg.max_run = budget as u32;
            }
            "confluence" => cfg.max_word_len = budget,
            "theorem3" => cfg.instances = budget,
            other => return Err(HarnessError::UnknownClaim(other.to_string())),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |what: &str| Err(HarnessError::InvalidConfig(format!("{what} must be positive")));
        if self.max_triangles == 0 {
            return bad("max_triangles");
        }
        if self.max_run == 0 {
            return bad("max_run");
        }
        if self.max_vertices == 0 {
            return bad("max_vertices");
        }
        if self.instances == 0 {
            return bad("instances");
        }
        if self.max_holes == 0 {
            return bad("max_holes");
        }
        if self.max_word_len == 0 {
            return bad("max_word_len");
        }
        if self.max_word_len > 24 {
            return Err(HarnessError::InvalidConfig(format!(
                "max_word_len {} too large for an exhaustive sweep (limit 24)",
                self.max_word_len
            )));
        }
        if self.max_cycle < 4 {
            return Err(HarnessError::InvalidConfig("max_cycle must be at least 4".into()));
        }
        Ok(())
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<AuditReport, HarnessError> {
    run_campaign_with(&AuditRegistry::standard(), cfg)
}

/// Run the audit selected by `cfg.claim`. Every recorded counterexample is
/// re-verified with a separate oracle before the report is returned; a failed
/// re-verification is an internal inconsistency.
pub fn run_campaign_with(registry: &AuditRegistry, cfg: &CampaignConfig) -> Result<AuditReport, HarnessError> {
    cfg.validate()?;
    let audit = registry.get(&cfg.claim).ok_or_else(|| HarnessError::UnknownClaim(cfg.claim.clone()))?;
    let mut ctx = AuditContext::new(audit.name(), Oracle::default(), cfg.max_records);
    audit.run(cfg, &mut ctx)?;
    let verifier = Oracle::default();
    for (i, cx) in ctx.counterexamples.iter().enumerate() {
        if let Err(reason) = recheck_counterexample(cx, &verifier) {
            return Err(HarnessError::Inconsistent(format!(
                "counterexample {i} of {} does not re-verify: {reason}\ninstance: {}",
                cfg.claim,
                cx.instance.to_json()
            )));
        }
    }
    let mut notes: Vec<String> = audit.notes().iter().map(|s| s.to_string()).collect();
    notes.append(&mut ctx.notes);
    Ok(AuditReport {
        schema_version: SCHEMA_VERSION,
        claim: cfg.claim.clone(),
        severity: audit.severity(),
        config: cfg.clone(),
        instances: ctx.instances,
        agreements: ctx.agreements,
        counterexamples: ctx.counterexamples,
        stats: ctx.stats,
        notes,
    })
}
