//! End-to-end dataset construction and its on-disk form.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader, read_string, write_json, write_jsonl, write_string};
use crate::lexicon::{
    ingest_tuples, symmetric_augment, LexiconGraph, Relation, RelatumSets, SizeSummary, TargetInventory, Tuple,
    TupleIngest, Vocabulary,
};
use crate::probegen::{generate_probe_set, ProbeSet, PronunciationLexicon, TemplateSet};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RelationCounts {
    pub source_tuples: usize,
    pub augmented_tuples: usize,
    pub targets: usize,
    pub prompts: usize,
    pub probes: usize,
    /// Targets whose pruned relatum set for the relation is empty.
    pub empty_sets: usize,
    pub set_size_before: (f64, f64),
    pub set_size_after: (f64, f64),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub ingested_tuples: usize,
    /// Tuples dropped because a word is outside the shared vocabulary.
    pub out_of_vocab_tuples: usize,
    pub source_tuples: usize,
    pub augmented_tuples: usize,
    pub probes: usize,
    pub vocab_size: usize,
    pub graph_senses: usize,
    pub mean_relations_per_target: f64,
    pub relations: BTreeMap<Relation, RelationCounts>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub vocab: Vocabulary,
    /// Ingested tuples that survive the vocabulary filter.
    pub source_tuples: BTreeSet<Tuple>,
    /// Symmetric augmentation of `source_tuples`.
    pub tuples: BTreeSet<Tuple>,
    pub inventory: TargetInventory,
    pub sets: RelatumSets,
    pub templates: TemplateSet,
    pub probes: ProbeSet,
    pub summary: DatasetSummary,
}

fn size_pair(s: SizeSummary) -> (f64, f64) {
    (s.mean, s.std_dev)
}

impl Dataset {
    /// Vocabulary filter, augmentation, inventory, relatum sets, probes.
    pub fn build(
        ingests: &[TupleIngest],
        vocab: Vocabulary,
        graph: Option<&LexiconGraph>,
        templates: TemplateSet,
        pronunciation: Option<&PronunciationLexicon>,
    ) -> Result<Self> {
        let ingested: BTreeSet<Tuple> = ingests.iter().flat_map(|i| i.tuples.iter().cloned()).collect();
        let source_tuples = vocab.retain_tuples(&ingested);
        let tuples = symmetric_augment(&source_tuples);
        let inventory = TargetInventory::build(&tuples, &vocab);
        let before = RelatumSets::from_tuples(&tuples, &vocab);
        let sets = RelatumSets::build(&tuples, &inventory, graph, &vocab);
        let probes = generate_probe_set(&inventory, &templates, pronunciation)?.probes;

        let mut relations = BTreeMap::new();
        for r in Relation::ALL {
            let count = |set: &BTreeSet<Tuple>| set.iter().filter(|t| t.relation == r).count();
            let empty_sets = inventory
                .targets(r)
                .filter(|t| sets.get(t, r).is_none_or(|s| s.is_empty()))
                .count();
            relations.insert(
                r,
                RelationCounts {
                    source_tuples: count(&source_tuples),
                    augmented_tuples: count(&tuples),
                    targets: inventory.count(r),
                    prompts: templates.for_relation(r).count(),
                    probes: probes.counts()[&r],
                    empty_sets,
                    set_size_before: size_pair(before.size_summary(r)),
                    set_size_after: size_pair(sets.size_summary(r)),
                },
            );
        }
        let summary = DatasetSummary {
            ingested_tuples: ingested.len(),
            out_of_vocab_tuples: ingested.len() - source_tuples.len(),
            source_tuples: source_tuples.len(),
            augmented_tuples: tuples.len(),
            probes: probes.len(),
            vocab_size: vocab.len(),
            graph_senses: graph.map_or(0, |g| g.sense_count()),
            mean_relations_per_target: sets.mean_relations_per_target(),
            relations,
        };
        Ok(Dataset {
            vocab,
            source_tuples,
            tuples,
            inventory,
            sets,
            templates,
            probes,
            summary,
        })
    }

    /// Relatum sets of one target must be pairwise disjoint and never
    /// contain the target.
    pub fn check_invariants(&self) -> Result<()> {
        for target in self.sets.targets() {
            let mut seen = BTreeSet::new();
            for set in self.sets.for_target(target) {
                for w in set.words() {
                    if w == target || !seen.insert(w) {
                        return Err(Error::Invariant(format!("relatum `{w}` of `{target}` is ambiguous or self-referential")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let mut ingests = Vec::new();
        for src in &cfg.inputs.tuples {
            ingests.push(ingest_tuples(&src.path, src.format)?);
        }
        let vocab = Vocabulary::load_intersection(&cfg.inputs.vocab)?;
        let graph = cfg.inputs.graph.as_deref().map(LexiconGraph::load).transpose()?;
        let templates = match &cfg.inputs.templates {
            Some(p) => TemplateSet::load(p)?,
            None => TemplateSet::builtin(),
        };
        let pron = cfg.inputs.pronunciation.as_deref().map(PronunciationLexicon::load).transpose()?;
        Self::build(&ingests, vocab, graph.as_ref(), templates, pron.as_ref())
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut vocab: String = self.vocab.iter().collect::<Vec<_>>().join("\n");
        vocab.push('\n');
        write_string(&dir.join("vocab.txt"), &vocab)?;
        write_jsonl(&dir.join("tuples.jsonl"), &self.source_tuples)?;
        write_jsonl(&dir.join("augmented.jsonl"), &self.tuples)?;
        write_jsonl(&dir.join("relatum_sets.jsonl"), self.sets.to_jsonl_rows())?;
        write_jsonl(&dir.join("provenance.jsonl"), self.sets.provenance_rows())?;
        write_jsonl(&dir.join("templates.jsonl"), self.templates.iter())?;
        write_jsonl(&dir.join("probes.jsonl"), self.probes.iter())?;
        write_json(&dir.join("summary.json"), &self.summary)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let vocab = Vocabulary::load(&dir.join("vocab.txt"))?;
        let source_tuples = load_tuples(&dir.join("tuples.jsonl"))?;
        let tuples = load_tuples(&dir.join("augmented.jsonl"))?;
        let inventory = TargetInventory::build(&tuples, &vocab);
        let sets_path = dir.join("relatum_sets.jsonl");
        let sets = RelatumSets::from_jsonl(&read_string(&sets_path)?, &sets_path.display().to_string())?;
        let templates = TemplateSet::load(&dir.join("templates.jsonl"))?;
        let probes = ProbeSet::load(&dir.join("probes.jsonl"))?;
        let summary: DatasetSummary = serde_json::from_str(&read_string(&dir.join("summary.json"))?)?;
        Ok(Dataset {
            vocab,
            source_tuples,
            tuples,
            inventory,
            sets,
            templates,
            probes,
            summary,
        })
    }
}

fn load_tuples(path: &Path) -> Result<BTreeSet<Tuple>> {
    parse_tuple_rows(open_reader(path)?, &path.display().to_string())
}

fn parse_tuple_rows<R: BufRead>(reader: R, source_name: &str) -> Result<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    let mut errors = Vec::new();
    for (line_no, line) in numbered_lines(reader) {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        match serde_json::from_str::<Tuple>(&line) {
            Ok(t) => {
                out.insert(t);
            }
            Err(e) => errors.push(LineError::new(line_no, e.to_string())),
        }
    }
    if !errors.is_empty() {
        return Err(Error::schema(source_name, errors));
    }
    Ok(out)
}
