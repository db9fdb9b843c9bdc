//! Semantic-relation probing toolkit.
//!
//! Builds probe datasets from word-relation-relatum tuples and a sense-level
//! lexical graph, ingests ranked responses from human pools or language
//! models, and scores them with soundness, completeness, symmetry,
//! prototypicality and distinguishability (AuDC), together with the paired
//! significance tests used to compare agents.

pub mod config;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod lexicon;
pub mod metrics;
pub mod probegen;
pub mod report;
pub mod responses;
pub mod stats;

pub use error::{Error, LineError, Result};
pub use lexicon::{Relation, Tuple};
