use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::lexicon::{Relation, Vocabulary};
use crate::probegen::{ProbeId, ProbeSet};
use crate::responses::{AgentResponses, ResponseDistribution};

/// Normalized entropy of a response distribution: 0 for a single word,
/// otherwise the base-2 entropy over log2 of the support size.
pub fn response_entropy(d: &ResponseDistribution) -> f64 {
    let n = d.support();
    if n <= 1 {
        return 0.0;
    }
    let h: f64 = match d.counts() {
        Some(counts) => {
            let total = counts.values().sum::<u64>() as f64;
            counts
                .values()
                .map(|&c| {
                    let p = c as f64 / total;
                    -p * p.log2()
                })
                .sum()
        }
        None => {
            let mass = d.mass();
            d.probs()
                .values()
                .map(|&p| {
                    let p = p / mass;
                    -p * p.log2()
                })
                .sum()
        }
    };
    (h / (n as f64).log2()).clamp(0.0, 1.0)
}

/// Exact check for a flat distribution over two or more words, from counts
/// when available.
pub fn is_uniform(d: &ResponseDistribution) -> bool {
    if d.support() < 2 {
        return false;
    }
    match d.counts() {
        Some(c) => {
            let first = *c.values().next().expect("non-empty");
            c.values().all(|&x| x == first)
        }
        None => {
            let first = *d.probs().values().next().expect("non-empty");
            d.probs().values().all(|&x| x == first)
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ProbeSelection {
    pub kept: BTreeSet<ProbeId>,
    pub kept_by_relation: BTreeMap<Relation, usize>,
    pub dropped_relation: usize,
    pub dropped_uniform: usize,
    pub dropped_oov: usize,
    pub dropped_no_gold: usize,
}

/// Probes usable as prototypicality gold: relation in HYP/HOL/ANT/SYN, the
/// human distribution not flat, and every human word in the vocabulary.
pub fn select_prototypicality_probes(human: &AgentResponses, probes: &ProbeSet, vocab: &Vocabulary) -> ProbeSelection {
    let mut sel = ProbeSelection::default();
    for r in Relation::PROTOTYPICAL {
        sel.kept_by_relation.insert(r, 0);
    }
    for p in probes.iter() {
        if !Relation::PROTOTYPICAL.contains(&p.relation) {
            sel.dropped_relation += 1;
            continue;
        }
        let Some(d) = human.distribution(&p.id) else {
            sel.dropped_no_gold += 1;
            continue;
        };
        if is_uniform(d) {
            sel.dropped_uniform += 1;
            continue;
        }
        if d.probs().keys().any(|w| !vocab.contains(w)) {
            sel.dropped_oov += 1;
            continue;
        }
        sel.kept.insert(p.id.clone());
        *sel.kept_by_relation.entry(p.relation).or_default() += 1;
    }
    sel
}
