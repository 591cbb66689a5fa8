//! Ontologies, alignments and the merged subsumption graph.

mod alignment;
mod graph;
mod ontology;

pub use alignment::{Alignment, Mapping, MappingId, MappingKey, MappingSet, Relation};
pub use graph::{ClassIdx, Edge, MergedGraph};
pub use ontology::{ClassId, Ontology, Side, Statement};
