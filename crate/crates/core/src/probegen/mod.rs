//! Prompt templates, article selection and probe generation.

mod determiner;
mod probe;
mod template;

pub use determiner::{heuristic_onset, select_determiner, Determiner, Onset, PronunciationLexicon};
pub use probe::{generate_probe_set, verbalize, Probe, ProbeGeneration, ProbeId, ProbeSet};
pub use template::{PromptTemplate, TemplateSet};
