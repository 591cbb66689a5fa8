//! Detection and repair of disjointness-driven incoherence in ontology
//! alignments.
//!
//! The pipeline is: build a [`MergedGraph`] of both ontologies plus the
//! alignment, extract [`CoreFragments`], enumerate minimal conflict sets of
//! mappings over the fragments, and remove mappings greedily until every
//! conflict set is hit.

mod bits;
mod error;
mod scc;

pub mod conflicts;
pub mod fixtures;
pub mod fragments;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod repair;
pub mod report;

pub use conflicts::{
    count_incoherent_classes, disjoint_conflict_clusters, find_conflict_sets, Cluster, ConflictConfig, ConflictList,
    ConflictSet, ConflictStats, Witness,
};
pub use error::{Error, Result};
pub use fragments::{compute_checkset, extract_core_fragments, Checkset, CoreFragments, FragmentStats};
pub use generate::{generate_instance, random_instance, GeneratorParams, Instance, RandomParams};
pub use model::{
    Alignment, ClassId, ClassIdx, Edge, Mapping, MappingId, MappingKey, MappingSet, MergedGraph, Ontology, Relation,
    Side, Statement,
};
pub use oracle::{brute_force_min_hitting_set, exhaustive_incoherence, precision_recall_fmeasure, EvalReport};
pub use repair::{filter_conflicts, repair, worst_mapping, RepairConfig, RepairResult};
pub use report::{run_pipeline, RunReport};
