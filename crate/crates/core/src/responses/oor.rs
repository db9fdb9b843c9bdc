use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::distribution::RankedList;
use super::set::AgentResponses;
use crate::lexicon::RelatumSets;
use crate::probegen::ProbeSet;

/// Flag every word that is in none of the target's pruned relatum sets.
pub fn tag_oor(mut list: RankedList, target: &str, sets: &RelatumSets) -> RankedList {
    for item in &mut list.items {
        item.oor = sets.is_oor(target, &item.word);
    }
    list
}

/// Out-of-relation counters over a collection of answer lists.
///
/// A type is a distinct (target, word) pair, since OOR status depends on
/// the target.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OorSummary {
    pub responses: usize,
    pub all_oor_responses: usize,
    pub tokens: usize,
    pub oor_tokens: usize,
    pub types: usize,
    pub oor_types: usize,
    /// Sum of 1-based ranks of the first non-OOR word, over responses that have one.
    first_rank_sum: usize,
    first_rank_n: usize,
}

impl OorSummary {
    pub fn oor_token_rate(&self) -> f64 {
        ratio(self.oor_tokens, self.tokens)
    }

    pub fn oor_type_rate(&self) -> f64 {
        ratio(self.oor_types, self.types)
    }

    pub fn all_oor_rate(&self) -> f64 {
        ratio(self.all_oor_responses, self.responses)
    }

    pub fn mean_first_non_oor_rank(&self) -> f64 {
        ratio(self.first_rank_sum, self.first_rank_n)
    }

    fn add_list<'a>(&mut self, words: impl Iterator<Item = &'a str>, target: &str, sets: &RelatumSets, types: &mut BTreeSet<(String, String)>, oor_types: &mut BTreeSet<(String, String)>) {
        self.responses += 1;
        let mut first = None;
        let mut n = 0;
        for (i, w) in words.enumerate() {
            n += 1;
            self.tokens += 1;
            let key = (target.to_string(), w.to_string());
            if sets.is_oor(target, w) {
                self.oor_tokens += 1;
                oor_types.insert(key.clone());
            } else if first.is_none() {
                first = Some(i + 1);
            }
            types.insert(key);
        }
        match first {
            Some(r) => {
                self.first_rank_sum += r;
                self.first_rank_n += 1;
            }
            None if n > 0 => self.all_oor_responses += 1,
            None => {}
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Count OOR rates for one agent. Human pools are counted per individual
/// answer list; model lists are cut to `k` words (all when `None`).
pub fn oor_summary(responses: &AgentResponses, probes: &ProbeSet, sets: &RelatumSets, k: Option<usize>) -> OorSummary {
    let mut s = OorSummary::default();
    let mut types = BTreeSet::new();
    let mut oor_types = BTreeSet::new();
    if !responses.individual_lists().is_empty() {
        for (id, words) in responses.individual_lists() {
            if let Some(p) = probes.get(id) {
                s.add_list(words.iter().map(String::as_str), &p.target, sets, &mut types, &mut oor_types);
            }
        }
    } else {
        for id in responses.probes() {
            let (Some(p), Some(list)) = (probes.get(id), responses.ranked(id)) else {
                continue;
            };
            let k = k.unwrap_or(list.len());
            s.add_list(list.top(k).iter().map(|i| i.word.as_str()), &p.target, sets, &mut types, &mut oor_types);
        }
    }
    s.types = types.len();
    s.oor_types = oor_types.len();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{Relation, RelatumSet};
    use crate::probegen::{verbalize, ProbeId, PromptTemplate};
    use crate::responses::{rank, AgentId, ResponseDistribution};

    fn sets() -> RelatumSets {
        let mut sets = RelatumSets::default();
        let mut hol = RelatumSet::new("wall", Relation::Holonymy);
        hol.members.insert("building".into(), Default::default());
        sets.insert(hol);
        sets
    }

    #[test]
    fn tags_words_outside_every_set() {
        let d = ResponseDistribution::from_probs(
            ProbeId::from("p"),
            "m",
            [("building".to_string(), 0.5), ("sky".to_string(), 0.2)].into(),
        )
        .unwrap();
        let l = tag_oor(rank(&d, None), "wall", &sets());
        assert!(!l.items[0].oor);
        assert!(l.items[1].oor);
    }

    #[test]
    fn summary_counts_per_list() {
        let t = PromptTemplate::new("hol-1", Relation::Holonymy, "[DET] [W] is a part of [DET] [V]").unwrap();
        let p = verbalize("wall", &t, None);
        let id = p.id.clone();
        let probes = ProbeSet::new(vec![p]).unwrap();
        let lists = vec![
            (id.clone(), vec!["sky".to_string(), "building".to_string()]),
            (id.clone(), vec!["sky".to_string()]),
            (id.clone(), vec!["building".to_string()]),
        ];
        let d = ResponseDistribution::from_counts(id.clone(), "h", [("sky".into(), 2), ("building".into(), 2)].into()).unwrap();
        let resp = AgentResponses::with_lists(AgentId::human("h"), [d], lists);
        let s = oor_summary(&resp, &probes, &sets(), None);
        assert_eq!(s.responses, 3);
        assert_eq!(s.tokens, 4);
        assert_eq!(s.oor_tokens, 2);
        assert_eq!(s.all_oor_responses, 1);
        assert_eq!(s.types, 2);
        assert_eq!(s.oor_types, 1);
        assert!((s.mean_first_non_oor_rank() - 1.5).abs() < 1e-15);
    }
}
