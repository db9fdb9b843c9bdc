//! Tuple ingestion, symmetric augmentation, the sense graph and gold
//! relatum sets.

mod augment;
mod graph;
mod ingest;
mod inventory;
mod relation;
mod relatum;
mod tuple;
mod vocab;

pub use augment::symmetric_augment;
pub use graph::{LexiconGraph, SenseId};
pub use ingest::{ingest_tuples, parse_tuples, TupleFormat, TupleIngest};
pub use inventory::TargetInventory;
pub use relation::Relation;
pub use relatum::{
    expand_relatum_set, prune_ambiguous, Provenance, ProvenanceRow, RelatumSet, RelatumSetRow, RelatumSets,
    SizeSummary,
};
pub use tuple::{normalize_word, Tuple, TupleError};
pub use vocab::Vocabulary;

/// Convenience: tuples restricted to a relation.
pub fn tuples_of(tuples: &std::collections::BTreeSet<Tuple>, relation: Relation) -> impl Iterator<Item = &Tuple> {
    tuples.iter().filter(move |t| t.relation == relation)
}
