//! One audit per claim, behind a common trait and looked up by name.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use super::campaign::CampaignConfig;
use super::enumerate::enumerate_codes;
use super::generate::{gen_holed, GenParams};
use super::report::{word_observation, Counterexample, Instance, OracleEvidence, Severity};
use super::HarnessError;
use crate::graph::{is_proper, Mode, Oracle};
use crate::holes::{decide3_holes_with, extract_ring, insert_cycle, HoleAdjacency, HoleVerdict, HolesError};
use crate::parity::{all_words, in_t_greedy, ExhaustiveSearch};
use crate::ring::{color3, RingCode};

/// Mutable state shared by an audit run: tallies, stats and recorded
/// counterexamples.
pub struct AuditContext {
    claim: &'static str,
    pub oracle: Oracle,
    pub instances: u64,
    pub agreements: u64,
    pub counterexamples: Vec<Counterexample>,
    pub stats: BTreeMap<String, u64>,
    pub notes: Vec<String>,
    max_records: usize,
    soft_recorded: usize,
}

impl AuditContext {
    pub fn new(claim: &'static str, oracle: Oracle, max_records: usize) -> Self {
        AuditContext {
            claim,
            oracle,
            instances: 0,
            agreements: 0,
            counterexamples: Vec::new(),
            stats: BTreeMap::new(),
            notes: Vec::new(),
            max_records,
            soft_recorded: 0,
        }
    }

    pub fn bump(&mut self, key: impl Into<String>) {
        *self.stats.entry(key.into()).or_insert(0) += 1;
    }

    /// Hard counterexamples are always kept; soft ones up to the record limit,
    /// after which they are only counted.
    pub fn record(&mut self, cx: Counterexample) {
        self.bump(format!("counterexamples_{}", cx.kind));
        if cx.severity == Severity::Soft {
            if self.soft_recorded >= self.max_records {
                self.bump("counterexamples_unrecorded");
                return;
            }
            self.soft_recorded += 1;
        }
        self.counterexamples.push(cx);
    }

    /// Attach the instance payload to a module error.
    pub fn at<T, E: Display>(&self, inst: &Instance, r: Result<T, E>) -> Result<T, HarnessError> {
        r.map_err(|e| HarnessError::Instance {
            claim: self.claim.to_string(),
            message: e.to_string(),
            payload: inst.to_json(),
        })
    }

    fn evidence(&self, inst: &Instance, mode: Mode) -> Result<OracleEvidence, HarnessError> {
        let g = inst.graph()?.expect("graph instance");
        self.at(inst, OracleEvidence::collect(&self.oracle, &g, mode))
    }
}

pub trait Audit: Send + Sync {
    fn name(&self) -> &'static str;
    /// `Hard` claims are asserted: any counterexample fails the campaign.
    fn severity(&self) -> Severity;
    /// Interpretation notes copied into every report.
    fn notes(&self) -> &'static [&'static str] {
        &[]
    }
    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError>;
}

/// Audits by claim name.
pub struct AuditRegistry {
    audits: BTreeMap<&'static str, Box<dyn Audit>>,
}

impl AuditRegistry {
    pub fn empty() -> Self {
        AuditRegistry { audits: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Lemma1Audit));
        r.register(Box::new(Lemma2Audit));
        r.register(Box::new(Lemma3Audit));
        r.register(Box::new(Theorem3Audit));
        r.register(Box::new(Theorem4Audit));
        r.register(Box::new(RigidityAudit));
        r.register(Box::new(ConfluenceAudit));
        r
    }

    pub fn register(&mut self, audit: Box<dyn Audit>) {
        self.audits.insert(audit.name(), audit);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Audit> {
        self.audits.get(name).map(|a| a.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.audits.keys().copied().collect()
    }
}

impl Default for AuditRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

fn codes(cfg: &CampaignConfig) -> impl Iterator<Item = RingCode> + '_ {
    enumerate_codes(cfg.max_triangles).filter(move |c| c.runs().iter().all(|&r| r <= cfg.max_run))
}

/// Parity criterion against the oracle, plus soundness of the constructive
/// coloring, over every code in the budget.
pub struct Lemma2Audit;

impl Audit for Lemma2Audit {
    fn name(&self) -> &'static str {
        "lemma2"
    }

    fn severity(&self) -> Severity {
        Severity::Hard
    }

    fn notes(&self) -> &'static [&'static str] {
        &[
            "decide3(code) is compared with an exact backtracking 3-coloring of realize(code)",
            "color3 must return a proper coloring exactly when decide3 holds",
        ]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        for code in codes(cfg) {
            let inst = Instance::Ring { code: code.clone() };
            ctx.instances += 1;
            let g = code.realize();
            let truth = ctx.at(&inst, ctx.oracle.run(&g, 3, Mode::First))?.colorable();
            let verdict = code.decide3();
            let built = ctx.at(&inst, color3(&code))?;
            let built_ok = match (&built, verdict) {
                (Some(c), true) => ctx.at(&inst, is_proper(&g, c))?,
                (None, false) => true,
                _ => false,
            };
            ctx.bump(if truth { "colorable" } else { "not_colorable" });
            if truth == verdict && built_ok {
                ctx.agreements += 1;
                continue;
            }
            let kind = if truth != verdict { "decide3_disagrees" } else { "color3_unsound" };
            let evidence = ctx.evidence(&inst, Mode::First)?;
            ctx.record(Counterexample {
                kind: kind.into(),
                severity: Severity::Hard,
                seed: None,
                instance: inst,
                expected: format!("3-colorable = {truth}"),
                observed: format!("decide3 = {verdict}, color3 returned {}", if built.is_some() { "a coloring" } else { "none" }),
                evidence: Some(evidence),
            });
        }
        Ok(())
    }
}

/// Every 3-colorable ring has exactly six 3-colorings.
pub struct RigidityAudit;

impl Audit for RigidityAudit {
    fn name(&self) -> &'static str {
        "rigidity"
    }

    fn severity(&self) -> Severity {
        Severity::Hard
    }

    fn notes(&self) -> &'static [&'static str] {
        &["a 3-colorable ring must have exactly 3! = 6 proper 3-colorings (unique up to color names)"]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        for code in codes(cfg) {
            let inst = Instance::Ring { code: code.clone() };
            let g = code.realize();
            if !ctx.at(&inst, ctx.oracle.run(&g, 3, Mode::First))?.colorable() {
                continue;
            }
            if g.vertex_count() > ctx.oracle.budget.max_exhaustive {
                ctx.bump("skipped_over_count_budget");
                continue;
            }
            ctx.instances += 1;
            let ev = ctx.evidence(&inst, Mode::Count)?;
            let count = ev.count.unwrap_or(0);
            if count == 6 {
                ctx.agreements += 1;
                continue;
            }
            ctx.record(Counterexample {
                kind: "coloring_count".into(),
                severity: Severity::Hard,
                seed: None,
                instance: inst,
                expected: "6 proper 3-colorings".into(),
                observed: format!("{count} proper 3-colorings"),
                evidence: Some(ev),
            });
        }
        Ok(())
    }
}

/// Greedy and exhaustive membership agree, and membership is unchanged by any
/// single legal e-collapse.
pub struct ConfluenceAudit;

impl Audit for ConfluenceAudit {
    fn name(&self) -> &'static str {
        "confluence"
    }

    fn severity(&self) -> Severity {
        Severity::Hard
    }

    fn notes(&self) -> &'static [&'static str] {
        &["all 2^L words of each even length L up to the budget; every legal collapse position is tried"]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        let search = ExhaustiveSearch::new();
        for len in (2..=cfg.max_word_len).step_by(2) {
            let mut members = 0u64;
            for word in all_words(len) {
                ctx.instances += 1;
                let ex = search.contains(&word);
                members += ex as u64;
                let mut ok = in_t_greedy(&word) == ex;
                for j in word.collapse_positions() {
                    ok &= search.contains(&word.e_collapse(j)?) == ex;
                }
                if ok {
                    ctx.agreements += 1;
                    continue;
                }
                let observed = word_observation(&word)?;
                ctx.record(Counterexample {
                    kind: "membership_disagrees".into(),
                    severity: Severity::Hard,
                    seed: None,
                    instance: Instance::Word { word },
                    expected: format!("greedy and every collapse agree with exhaustive = {ex}"),
                    observed,
                    evidence: None,
                });
            }
            ctx.stats.insert(format!("members_len_{len:02}"), members);
        }
        Ok(())
    }
}

/// Size constraints claimed for all-even and all-odd rings.
pub struct Lemma1Audit;

impl Audit for Lemma1Audit {
    fn name(&self) -> &'static str {
        "lemma1"
    }

    fn severity(&self) -> Severity {
        Severity::Soft
    }

    fn notes(&self) -> &'static [&'static str] {
        &[
            "claim read as: a 3-colorable all-even ring has |C_i| = 0 mod 3; a 3-colorable all-odd ring has |C_i| = |C_o|, even and not 4",
            "report-only: counterexamples carry an oracle-verified 3-coloring",
        ]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        for code in codes(cfg) {
            ctx.instances += 1;
            if code.all_even() {
                ctx.bump("all_even");
            }
            if code.all_odd() {
                ctx.bump("all_odd");
            }
            if code.lemma1_predicate() {
                ctx.agreements += 1;
                continue;
            }
            let inst = Instance::Ring { code: code.clone() };
            let ev = ctx.evidence(&inst, Mode::First)?;
            let family = if code.all_even() { "all_even_size" } else { "all_odd_size" };
            ctx.record(Counterexample {
                kind: family.into(),
                severity: Severity::Soft,
                seed: None,
                instance: inst,
                expected: if code.all_even() {
                    "3-colorable all-even ring has |C_i| = 0 mod 3".into()
                } else {
                    "3-colorable all-odd ring has |C_i| = |C_o|, even, not 4".into()
                },
                observed: format!(
                    "3-colorable with |C_i| = {}, |C_o| = {}",
                    code.inner_len(),
                    code.outer_len()
                ),
                evidence: Some(ev),
            });
        }
        Ok(())
    }
}

/// Symmetric parity sequences with the stated size conditions are 3-colorable.
pub struct Lemma3Audit;

impl Audit for Lemma3Audit {
    fn name(&self) -> &'static str {
        "lemma3"
    }

    fn severity(&self) -> Severity {
        Severity::Soft
    }

    fn notes(&self) -> &'static [&'static str] {
        &[
            "symmetric = fixed by some reflection of the cyclic word (dihedral reading)",
            "antecedent: symmetric cps and (|C_o| = 0 mod 3 or |C_i| + |C_o| = 0 mod 3)",
            "report-only: counterexamples carry an oracle run showing no 3-coloring exists",
        ]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        for code in codes(cfg) {
            ctx.instances += 1;
            if code.lemma3_antecedent() {
                ctx.bump("antecedent_holds");
            }
            if code.lemma3_predicate() {
                ctx.agreements += 1;
                continue;
            }
            let inst = Instance::Ring { code: code.clone() };
            let ev = ctx.evidence(&inst, Mode::First)?;
            ctx.record(Counterexample {
                kind: "symmetric_not_colorable".into(),
                severity: Severity::Soft,
                seed: None,
                instance: inst,
                expected: "3-colorable".into(),
                observed: format!(
                    "cps {} symmetric, |C_i| = {}, |C_o| = {}, not 3-colorable",
                    code.cps(),
                    code.inner_len(),
                    code.outer_len()
                ),
                evidence: Some(ev),
            });
        }
        Ok(())
    }
}

/// Generated holed triangulations: No verdicts and witnesses are checked hard;
/// the sufficiency direction is only reported.
pub struct Theorem3Audit;

impl Theorem3Audit {
    fn overlap_stats(ctx: &mut AuditContext, ht: &crate::holes::HoledTriangulation) -> Result<(), HolesError> {
        let adj = HoleAdjacency::build(ht);
        let mut sets = Vec::new();
        for h in 0..ht.hole_count() {
            sets.push(extract_ring(ht, h)?.vertex_map.into_iter().collect::<BTreeSet<_>>());
        }
        let share_vertex = (0..sets.len()).any(|i| (i + 1..sets.len()).any(|j| !sets[i].is_disjoint(&sets[j])));
        if !adj.edges.is_empty() {
            ctx.bump("rings_share_edge");
        } else if share_vertex {
            ctx.bump("rings_share_vertex_only");
        }
        Ok(())
    }
}

impl Audit for Theorem3Audit {
    fn name(&self) -> &'static str {
        "theorem3"
    }

    fn severity(&self) -> Severity {
        Severity::Soft
    }

    fn notes(&self) -> &'static [&'static str] {
        &[
            "hard: every No verdict is confirmed non-3-colorable by the oracle; every Yes witness is proper",
            "soft: criterion_yes_unconfirmed instances (all rings pass, graph not 3-colorable) are sufficiency counterexamples",
            "instance i uses seed + i; generation failures advance to the next seed",
            "rings_share_edge / rings_share_vertex_only count instances outside the strictest reading of the hypotheses",
        ]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        let mut i = 0u64;
        let attempts = 4 * cfg.instances as u64;
        while ctx.instances < cfg.instances as u64 && i < attempts {
            let seed = cfg.seed.wrapping_add(i);
            let holes = 1 + (i as usize % cfg.max_holes);
            i += 1;
            let ht = match gen_holed(seed, &GenParams::new(holes, cfg.max_vertices)) {
                Ok(ht) => ht,
                Err(HarnessError::Holes(HolesError::GenerationFailure(_))) => {
                    ctx.bump("generation_failures");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let inst = Instance::Holed { instance: ht.clone() };
            ctx.instances += 1;
            ctx.bump(format!("holes_{holes}"));
            let n = ht.vertex_count() as u64;
            let widest = ctx.stats.entry("vertices_max".into()).or_insert(0);
            *widest = (*widest).max(n);
            let overlap = Self::overlap_stats(ctx, &ht);
            ctx.at(&inst, overlap)?;
            let verdict = ctx.at(&inst, decide3_holes_with(&ht, &ctx.oracle))?;
            let truth = ctx.at(&inst, ctx.oracle.run(ht.graph(), 3, Mode::First))?.colorable();
            let (tag, failure) = match &verdict {
                HoleVerdict::No { hole, cps } => (
                    "verdict_no",
                    truth.then(|| ("no_verdict_unsound", Severity::Hard, format!("No (hole {hole}, cps {cps})"))),
                ),
                HoleVerdict::Yes { witness } => (
                    "verdict_yes",
                    (!ctx.at(&inst, is_proper(ht.graph(), witness))?)
                        .then(|| ("witness_improper", Severity::Hard, "Yes with an improper witness".to_string())),
                ),
                HoleVerdict::CriterionYesUnconfirmed => (
                    "verdict_unconfirmed",
                    Some(if truth {
                        ("assembly_incomplete", Severity::Hard, "no assembled coloring, oracle finds one".to_string())
                    } else {
                        ("sufficiency", Severity::Soft, "every ring passes, graph not 3-colorable".to_string())
                    }),
                ),
            };
            ctx.bump(tag);
            let Some((kind, severity, observed)) = failure else {
                ctx.agreements += 1;
                continue;
            };
            let evidence = ctx.evidence(&inst, Mode::First)?;
            ctx.record(Counterexample {
                kind: kind.into(),
                severity,
                seed: Some(seed),
                instance: inst,
                expected: "3-colorable iff every ring's cps is in T".into(),
                observed,
                evidence: Some(evidence),
            });
        }
        if ctx.instances < cfg.instances as u64 {
            ctx.notes.push(format!(
                "only {} of {} requested instances could be generated",
                ctx.instances, cfg.instances
            ));
        }
        Ok(())
    }
}

/// Inserting one cycle of length >= 4 makes the ring 3-colorable: case 1 for
/// non-3-colorable rings with one shared outer edge, case 2 for rings in T with
/// two shared outer edges.
pub struct Theorem4Audit;

impl Audit for Theorem4Audit {
    fn name(&self) -> &'static str {
        "theorem4"
    }

    fn severity(&self) -> Severity {
        Severity::Soft
    }

    fn notes(&self) -> &'static [&'static str] {
        &[
            "split: outer vertex v is split along its rotation; the new face spans the middle of v's inner arc",
            "case 1: decide3 false, shared_outer_edges = 1; case 2: decide3 true, shared_outer_edges = 2",
            "every split position and cycle length 4..=max_cycle is tried; infeasible splits are skipped",
            "each negative case is confirmed by two further independent oracle runs before it is recorded",
        ]
    }

    fn run(&self, cfg: &CampaignConfig, ctx: &mut AuditContext) -> Result<(), HarnessError> {
        for code in codes(cfg) {
            let case = if code.decide3() { 2 } else { 1 };
            for r in 4..=cfg.max_cycle {
                for at in 0..code.outer_len() {
                    let g = match insert_cycle(&code, r, at, case) {
                        Ok(g) => g,
                        Err(HolesError::InvalidSplit(_)) => {
                            ctx.bump("skipped_split");
                            continue;
                        }
                        Err(e) => {
                            let inst = Instance::Ring { code: code.clone() };
                            return Err(ctx.at::<(), _>(&inst, Err(e)).unwrap_err());
                        }
                    };
                    let inst = Instance::Graph { graph: g.to_json() };
                    ctx.instances += 1;
                    ctx.bump(format!("case{case}_r{r}_tested"));
                    if ctx.at(&inst, ctx.oracle.run(&g, 3, Mode::First))?.colorable() {
                        ctx.agreements += 1;
                        ctx.bump(format!("case{case}_r{r}_colorable"));
                        continue;
                    }
                    for _ in 0..2 {
                        let fresh = Oracle::new(ctx.oracle.budget);
                        if ctx.at(&inst, fresh.run(&g, 3, Mode::First))?.colorable() {
                            return Err(HarnessError::Inconsistent(format!(
                                "oracle reruns disagree on {}",
                                inst.to_json()
                            )));
                        }
                    }
                    let evidence = ctx.evidence(&inst, Mode::First)?;
                    ctx.record(Counterexample {
                        kind: format!("case{case}"),
                        severity: Severity::Soft,
                        seed: None,
                        instance: inst,
                        expected: "3-colorable after inserting the cycle".into(),
                        observed: format!("ring {code} with C_{r} at outer vertex {at}: not 3-colorable"),
                        evidence: Some(evidence),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let r = AuditRegistry::standard();
        assert_eq!(
            r.names(),
            vec!["confluence", "lemma1", "lemma2", "lemma3", "rigidity", "theorem3", "theorem4"]
        );
        assert!(r.get("nope").is_none());
        assert_eq!(r.get("lemma2").unwrap().severity(), Severity::Hard);
    }
}
