use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Relation, Tuple, Vocabulary};

/// Per-relation target words, the `[W]` fillers of the probe set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetInventory {
    by_relation: BTreeMap<Relation, BTreeSet<String>>,
}

impl TargetInventory {
    pub fn build(tuples: &BTreeSet<Tuple>, vocab: &Vocabulary) -> Self {
        let mut by_relation: BTreeMap<Relation, BTreeSet<String>> = BTreeMap::new();
        for t in tuples.iter().filter(|t| vocab.contains(&t.target)) {
            by_relation.entry(t.relation).or_default().insert(t.target.clone());
        }
        Self { by_relation }
    }

    pub fn targets(&self, relation: Relation) -> impl Iterator<Item = &str> {
        self.by_relation.get(&relation).into_iter().flatten().map(String::as_str)
    }

    pub fn contains(&self, relation: Relation, target: &str) -> bool {
        self.by_relation.get(&relation).is_some_and(|s| s.contains(target))
    }

    pub fn count(&self, relation: Relation) -> usize {
        self.by_relation.get(&relation).map_or(0, BTreeSet::len)
    }

    pub fn counts(&self) -> BTreeMap<Relation, usize> {
        Relation::ALL.into_iter().map(|r| (r, self.count(r))).collect()
    }

    /// The union over relations, each word once.
    pub fn all_targets(&self) -> BTreeSet<&str> {
        self.by_relation.values().flatten().map(String::as_str).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.by_relation.values().all(BTreeSet::is_empty)
    }
}
