//! Gold relatum sets: tuple relata unioned with graph expansion, filtered to
//! the shared vocabulary, then pruned of relationally ambiguous words.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{LexiconGraph, Relation, TargetInventory, Tuple, Vocabulary};

/// Where a relatum came from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tuple: bool,
    pub graph: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatumSet {
    pub target: String,
    pub relation: Relation,
    pub members: BTreeMap<String, Provenance>,
}

impl RelatumSet {
    pub fn new(target: impl Into<String>, relation: Relation) -> Self {
        Self {
            target: target.into(),
            relation,
            members: BTreeMap::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.members.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.members.keys().map(String::as_str)
    }
}

/// Direct relata of every sense of `target`, plus for HYP/HPO the relata
/// reached by a second edge of the same label. `None` when the target has no
/// sense in the graph.
pub fn expand_relatum_set(
    graph: &LexiconGraph,
    target: &str,
    relation: Relation,
    vocab: &Vocabulary,
) -> Option<BTreeSet<String>> {
    let senses = graph.senses_of(target);
    if senses.is_empty() {
        return None;
    }
    let mut reached = BTreeSet::new();
    for &sense in senses {
        for hop1 in graph.neighbors(sense, relation) {
            reached.insert(hop1);
            if relation.is_hierarchical() {
                reached.extend(graph.neighbors(hop1, relation));
            }
        }
    }
    Some(
        reached
            .into_iter()
            .map(|idx| graph.sense(idx).word.clone())
            .filter(|w| w != target && vocab.contains(w))
            .collect(),
    )
}

/// Remove every word that sits in two or more of one target's sets. Sets
/// left empty are dropped.
pub fn prune_ambiguous(sets: Vec<RelatumSet>) -> Vec<RelatumSet> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for set in &sets {
        for w in set.words() {
            *seen.entry(w).or_default() += 1;
        }
    }
    let ambiguous: BTreeSet<String> = seen.into_iter().filter(|&(_, n)| n > 1).map(|(w, _)| w.to_string()).collect();
    sets.into_iter()
        .map(|mut set| {
            set.members.retain(|w, _| !ambiguous.contains(w));
            set
        })
        .filter(|set| !set.is_empty())
        .collect()
}

/// Mean and (population) standard deviation of set sizes for one relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SizeSummary {
    pub sets: usize,
    pub mean: f64,
    pub std_dev: f64,
}

impl SizeSummary {
    fn from_sizes(sizes: &[usize]) -> Self {
        if sizes.is_empty() {
            return Self::default();
        }
        let n = sizes.len() as f64;
        let mean = sizes.iter().sum::<usize>() as f64 / n;
        let var = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / n;
        Self {
            sets: sizes.len(),
            mean,
            std_dev: var.sqrt(),
        }
    }
}

/// All relatum sets, keyed by target and relation. Only non-empty sets are
/// stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatumSets {
    by_target: BTreeMap<String, BTreeMap<Relation, RelatumSet>>,
}

/// One line of the relatum-set file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelatumSetRow {
    pub w: String,
    pub r: Relation,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
}

/// One line of the per-member audit file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceRow {
    pub w: String,
    pub r: Relation,
    pub v: String,
    pub tuple: bool,
    pub graph: bool,
}

impl RelatumSets {
    /// Only the relata given by the tuples themselves, unpruned.
    pub fn from_tuples(tuples: &BTreeSet<Tuple>, vocab: &Vocabulary) -> Self {
        let mut sets = Self::default();
        for t in tuples {
            if vocab.contains(&t.relatum) {
                sets.insert_member(&t.target, t.relation, &t.relatum, Provenance { tuple: true, graph: false });
            }
        }
        sets
    }

    /// Build the gold standard for every target in `inventory` and every
    /// relation.
    pub fn build(
        tuples: &BTreeSet<Tuple>,
        inventory: &TargetInventory,
        graph: Option<&LexiconGraph>,
        vocab: &Vocabulary,
    ) -> Self {
        let mut raw = Self::from_tuples(tuples, vocab);
        if let Some(graph) = graph {
            for target in inventory.all_targets() {
                for relation in Relation::ALL {
                    let Some(expanded) = expand_relatum_set(graph, target, relation, vocab) else {
                        continue;
                    };
                    for w in expanded {
                        raw.insert_member(target, relation, &w, Provenance { tuple: false, graph: true });
                    }
                }
            }
        }
        let mut pruned = Self::default();
        for (target, sets) in raw.by_target {
            let kept = prune_ambiguous(sets.into_values().collect());
            if !kept.is_empty() {
                pruned.by_target.insert(target, kept.into_iter().map(|s| (s.relation, s)).collect());
            }
        }
        pruned
    }

    fn insert_member(&mut self, target: &str, relation: Relation, word: &str, origin: Provenance) {
        if word == target {
            return;
        }
        let set = self
            .by_target
            .entry(target.to_string())
            .or_default()
            .entry(relation)
            .or_insert_with(|| RelatumSet::new(target, relation));
        let p = set.members.entry(word.to_string()).or_default();
        p.tuple |= origin.tuple;
        p.graph |= origin.graph;
    }

    pub fn insert(&mut self, set: RelatumSet) {
        if set.is_empty() {
            return;
        }
        self.by_target
            .entry(set.target.clone())
            .or_default()
            .insert(set.relation, set);
    }

    pub fn get(&self, target: &str, relation: Relation) -> Option<&RelatumSet> {
        self.by_target.get(target).and_then(|m| m.get(&relation))
    }

    pub fn for_target(&self, target: &str) -> impl Iterator<Item = &RelatumSet> {
        self.by_target.get(target).into_iter().flat_map(|m| m.values())
    }

    pub fn contains(&self, target: &str, relation: Relation, word: &str) -> bool {
        self.get(target, relation).is_some_and(|s| s.contains(word))
    }

    /// True when `word` belongs to none of the target's sets.
    pub fn is_oor(&self, target: &str, word: &str) -> bool {
        !self.for_target(target).any(|s| s.contains(word))
    }

    /// Size of the union of all of a target's sets.
    pub fn union_size(&self, target: &str) -> usize {
        self.for_target(target).map(RelatumSet::len).sum::<usize>()
            - self.overlap_count(target)
    }

    fn overlap_count(&self, target: &str) -> usize {
        let mut seen = BTreeSet::new();
        let mut dup = 0;
        for s in self.for_target(target) {
            for w in s.words() {
                if !seen.insert(w) {
                    dup += 1;
                }
            }
        }
        dup
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelatumSet> {
        self.by_target.values().flat_map(|m| m.values())
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.by_target.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.by_target.is_empty()
    }

    pub fn size_summary(&self, relation: Relation) -> SizeSummary {
        let sizes: Vec<usize> = self.iter().filter(|s| s.relation == relation).map(RelatumSet::len).collect();
        SizeSummary::from_sizes(&sizes)
    }

    /// Mean number of relations with a non-empty set per target.
    pub fn mean_relations_per_target(&self) -> f64 {
        if self.by_target.is_empty() {
            return 0.0;
        }
        self.by_target.values().map(BTreeMap::len).sum::<usize>() as f64 / self.by_target.len() as f64
    }

    pub fn to_jsonl_rows(&self) -> Vec<RelatumSetRow> {
        self.iter()
            .map(|s| RelatumSetRow {
                w: s.target.clone(),
                r: s.relation,
                y: s.words().map(str::to_string).collect(),
            })
            .collect()
    }

    pub fn provenance_rows(&self) -> Vec<ProvenanceRow> {
        self.iter()
            .flat_map(|s| {
                s.members.iter().map(move |(v, p)| ProvenanceRow {
                    w: s.target.clone(),
                    r: s.relation,
                    v: v.clone(),
                    tuple: p.tuple,
                    graph: p.graph,
                })
            })
            .collect()
    }

    /// Read the `{"w":..,"r":..,"Y":[..]}` layout back.
    pub fn from_jsonl(src: &str, source_name: &str) -> crate::Result<Self> {
        let mut sets = Self::default();
        let mut errors = Vec::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RelatumSetRow>(line) {
                Ok(row) => {
                    let mut set = RelatumSet::new(row.w, row.r);
                    for v in row.y {
                        set.members.insert(v, Provenance::default());
                    }
                    sets.insert(set);
                }
                Err(e) => errors.push(crate::LineError::new(i + 1, e.to_string())),
            }
        }
        if errors.is_empty() {
            Ok(sets)
        } else {
            Err(crate::Error::schema(source_name, errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::SenseId;

    fn sid(s: &str) -> SenseId {
        s.parse().unwrap()
    }

    fn open_vocab(words: &[&str]) -> Vocabulary {
        Vocabulary::from_words(words.iter().copied(), "test")
    }

    fn ending_graph() -> LexiconGraph {
        let mut g = LexiconGraph::new();
        g.add_edge(sid("ending/1"), Relation::Synonymy, sid("termination/4"));
        g.add_edge(sid("ending/3"), Relation::Synonymy, sid("conclusion/6"));
        g
    }

    #[test]
    fn synonyms_from_different_senses_are_unioned() {
        let vocab = open_vocab(&["ending", "termination", "conclusion"]);
        let got = expand_relatum_set(&ending_graph(), "ending", Relation::Synonymy, &vocab).unwrap();
        assert_eq!(got, ["conclusion", "termination"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn absent_target_is_distinct_from_empty() {
        let vocab = open_vocab(&["ending"]);
        let g = ending_graph();
        assert_eq!(expand_relatum_set(&g, "missing", Relation::Synonymy, &vocab), None);
        assert_eq!(expand_relatum_set(&g, "ending", Relation::Antonymy, &vocab), Some(BTreeSet::new()));
    }

    #[test]
    fn hypernym_chain_reaches_two_steps() {
        let mut g = LexiconGraph::new();
        g.add_edge(sid("a/1"), Relation::Hypernymy, sid("b/1"));
        g.add_edge(sid("b/1"), Relation::Hypernymy, sid("c/1"));
        g.add_edge(sid("c/1"), Relation::Hypernymy, sid("d/1"));
        let vocab = open_vocab(&["a", "b", "c", "d"]);
        let got = expand_relatum_set(&g, "a", Relation::Hypernymy, &vocab).unwrap();
        assert_eq!(got, ["b", "c"].iter().map(|s| s.to_string()).collect());
        // Two-step expansion is only for the hierarchy.
        g.add_edge(sid("b/1"), Relation::Meronymy, sid("e/1"));
        g.add_edge(sid("a/1"), Relation::Meronymy, sid("b/1"));
        let vocab = open_vocab(&["a", "b", "c", "d", "e"]);
        let mer = expand_relatum_set(&g, "a", Relation::Meronymy, &vocab).unwrap();
        assert_eq!(mer, ["b"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn vocabulary_filters_members() {
        let vocab = open_vocab(&["ending", "termination"]);
        let got = expand_relatum_set(&ending_graph(), "ending", Relation::Synonymy, &vocab).unwrap();
        assert_eq!(got.len(), 1);
    }

    fn set(target: &str, r: Relation, words: &[&str]) -> RelatumSet {
        let mut s = RelatumSet::new(target, r);
        for w in words {
            s.members.insert(w.to_string(), Provenance::default());
        }
        s
    }

    #[test]
    fn ambiguous_relata_leave_every_set() {
        let out = prune_ambiguous(vec![
            set("ending", Relation::Hyponymy, &["conclusion", "finale"]),
            set("ending", Relation::Synonymy, &["conclusion", "termination"]),
        ]);
        assert_eq!(out[0].words().collect::<Vec<_>>(), vec!["finale"]);
        assert_eq!(out[1].words().collect::<Vec<_>>(), vec!["termination"]);
    }

    #[test]
    fn disjoint_sets_are_untouched() {
        let input = vec![set("x", Relation::Hypernymy, &["a"]), set("x", Relation::Synonymy, &["b"])];
        assert_eq!(prune_ambiguous(input.clone()), input);
    }

    #[test]
    fn word_in_three_sets_is_removed_everywhere() {
        let out = prune_ambiguous(vec![
            set("x", Relation::Hypernymy, &["w", "a"]),
            set("x", Relation::Hyponymy, &["w", "b"]),
            set("x", Relation::Synonymy, &["w"]),
        ]);
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|s| !s.contains("w")));
    }

    #[test]
    fn build_unions_tuple_and_graph_relata_with_provenance() {
        let tuples: BTreeSet<Tuple> = [Tuple::new("ending", Relation::Synonymy, "termination").unwrap()].into();
        let vocab = open_vocab(&["ending", "termination", "conclusion"]);
        let inv = TargetInventory::build(&tuples, &vocab);
        let sets = RelatumSets::build(&tuples, &inv, Some(&ending_graph()), &vocab);
        let syn = sets.get("ending", Relation::Synonymy).unwrap();
        assert_eq!(syn.members["termination"], Provenance { tuple: true, graph: true });
        assert_eq!(syn.members["conclusion"], Provenance { tuple: false, graph: true });
        assert!(sets.is_oor("ending", "banana"));
        assert!(!sets.is_oor("ending", "conclusion"));
        assert_eq!(sets.union_size("ending"), 2);
    }

    #[test]
    fn jsonl_round_trip_keeps_members() {
        let mut sets = RelatumSets::default();
        sets.insert(set("wall", Relation::Holonymy, &["building", "house"]));
        let text: String = sets
            .to_jsonl_rows()
            .iter()
            .map(|v| format!("{}\n", serde_json::to_string(v).unwrap()))
            .collect();
        assert_eq!(text, "{\"w\":\"wall\",\"r\":\"HOL\",\"Y\":[\"building\",\"house\"]}\n");
        let back = RelatumSets::from_jsonl(&text, "t").unwrap();
        assert_eq!(back.get("wall", Relation::Holonymy).unwrap().len(), 2);
    }
}
