//! Generators and validation campaigns that audit each claim against the exact
//! oracle, with JSON/CSV reports that can be re-verified later.

mod audits;
mod campaign;
mod enumerate;
mod generate;
mod report;

use thiserror::Error;

use crate::graph::GraphError;
use crate::holes::HolesError;
use crate::parity::ParityError;
use crate::ring::RingError;

pub use audits::{
    Audit, AuditContext, AuditRegistry, ConfluenceAudit, Lemma1Audit, Lemma2Audit, Lemma3Audit, RigidityAudit,
    Theorem3Audit, Theorem4Audit,
};
pub use campaign::{run_campaign, run_campaign_with, CampaignConfig};
pub use enumerate::{enumerate_codes, random_code, random_code_with, CodeEnumerator};
pub use generate::{gen_holed, rng_for, BaseKind, GenParams};
pub use report::{
    recheck_counterexample, recheck_report, AuditReport, Counterexample, Instance, OracleEvidence, RecheckFailure,
    Severity, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Parity(#[from] ParityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Holes(#[from] HolesError),
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A module failed on a specific instance; the payload is the instance JSON.
    #[error("{claim}: {message}\ninstance: {payload}")]
    Instance { claim: String, message: String, payload: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// True when the error points at a bug or a broken invariant rather than bad
    /// input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            HarnessError::Inconsistent(_)
                | HarnessError::Instance { .. }
                | HarnessError::Ring(RingError::InternalInconsistency(_))
                | HarnessError::Holes(HolesError::Ring(RingError::InternalInconsistency(_)))
        )
    }
}
