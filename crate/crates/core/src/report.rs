//! End-to-end repair pipeline and its JSON run report.

use std::time::Instant;

use serde::Serialize;

use crate::conflicts::{count_incoherent_classes, find_conflict_sets, ConflictConfig, ConflictList, ConflictStats};
use crate::error::Result;
use crate::fragments::{percent, CoreFragments, FragmentStats};
use crate::model::{Alignment, MergedGraph, Ontology, Relation};
use crate::repair::{repair, RemovalCause, RepairConfig, RepairResult, RepairStats};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputSizes {
    pub classes_onto1: usize,
    pub classes_onto2: usize,
    pub total_classes: usize,
    pub mappings: usize,
    pub disjoint_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemovedMapping {
    pub source: String,
    pub target: String,
    pub relation: Relation,
    pub confidence: f64,
    pub cause: RemovalCause,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairSummary {
    pub config: RepairConfig,
    pub removed: usize,
    pub removed_filtered: usize,
    pub removed_greedy: usize,
    pub kept: usize,
    pub kept_percent: f64,
    pub resolved_conflicts: usize,
    pub stats: RepairStats,
    pub removed_mappings: Vec<RemovedMapping>,
}

/// Wall-clock milliseconds per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub fragments_ms: f64,
    pub conflicts_ms: f64,
    pub repair_ms: f64,
    pub check_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub input: InputSizes,
    pub fragments: FragmentStats,
    pub conflicts: ConflictStats,
    pub repair: RepairSummary,
    pub incoherent_before: usize,
    pub incoherent_after: usize,
    /// Omitted from serialized reports unless requested, since it is the
    /// only nondeterministic part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub struct PipelineOutput {
    pub fragments: CoreFragments,
    pub conflicts: ConflictList,
    pub result: RepairResult,
    pub report: RunReport,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

pub fn input_sizes(o1: &Ontology, o2: &Ontology, align: &Alignment) -> InputSizes {
    InputSizes {
        classes_onto1: o1.len(),
        classes_onto2: o2.len(),
        total_classes: o1.len() + o2.len(),
        mappings: align.len(),
        disjoint_pairs: o1.disjoint_pairs().count() + o2.disjoint_pairs().count(),
    }
}

/// Fragments, conflicts, repair, and an incoherence count before and after.
/// Timings are always measured; they are kept in the report only when
/// `keep_timings` is set.
pub fn run_pipeline(
    o1: &Ontology,
    o2: &Ontology,
    align: &Alignment,
    repair_cfg: &RepairConfig,
    conflict_cfg: &ConflictConfig,
    keep_timings: bool,
) -> Result<PipelineOutput> {
    let start = Instant::now();
    let mut timings = Timings::default();

    let t = Instant::now();
    let view = MergedGraph::new(o1, o2, align)?;
    let unaligned = MergedGraph::unaligned(o1, o2)?;
    let fragments = CoreFragments::from_views(&view, &unaligned, align);
    drop(unaligned);
    timings.fragments_ms = ms(t);

    let t = Instant::now();
    let conflicts = find_conflict_sets(&fragments, conflict_cfg)?;
    timings.conflicts_ms = ms(t);

    let t = Instant::now();
    let result = repair(&conflicts, align, repair_cfg)?;
    timings.repair_ms = ms(t);

    let t = Instant::now();
    let incoherent_before = count_incoherent_classes(&view).0;
    drop(view);
    let after = MergedGraph::new(o1, o2, &result.kept)?;
    let incoherent_after = count_incoherent_classes(&after).0;
    timings.check_ms = ms(t);
    timings.total_ms = ms(start);

    let removed_mappings: Vec<RemovedMapping> = result
        .removed
        .iter()
        .map(|r| {
            let m = align.get(r.mapping);
            RemovedMapping {
                source: m.source.clone(),
                target: m.target.clone(),
                relation: m.relation,
                confidence: m.confidence,
                cause: r.cause,
            }
        })
        .collect();
    let filtered = removed_mappings
        .iter()
        .filter(|r| r.cause == RemovalCause::Filtered)
        .count();

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        input: input_sizes(o1, o2, align),
        fragments: fragments.stats(),
        conflicts: conflicts.stats(),
        repair: RepairSummary {
            config: repair_cfg.clone(),
            removed: result.removed.len(),
            removed_filtered: filtered,
            removed_greedy: result.removed.len() - filtered,
            kept: result.kept.len(),
            kept_percent: percent(result.kept.len(), align.len()),
            resolved_conflicts: result.resolved_conflicts,
            stats: result.stats.clone(),
            removed_mappings,
        },
        incoherent_before,
        incoherent_after,
        timings: keep_timings.then_some(timings),
    };
    Ok(PipelineOutput {
        fragments,
        conflicts,
        result,
        report,
    })
}
