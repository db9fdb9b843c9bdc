use super::entropy::ProbeSelection;
use super::retrieval::{score_targets, Kernel, TargetPass};
use super::{Metric, MetricInput, RelationScore};
use crate::error::{Error, Result};
use crate::lexicon::Relation;
use crate::responses::{AgentResponses, RankedList};

/// Levenshtein distance with unit insert/delete and substitution cost 2.
pub fn edit_distance(a: &[&str], b: &[&str]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + if x == y { 0 } else { 2 };
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 − d/(2k)`; with both lists at most k long this lies in [0, 1].
pub fn edit_similarity(a: &[&str], b: &[&str], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (1.0 - edit_distance(a, b) as f64 / (2 * k) as f64).max(0.0)
}

/// Half top-1 agreement, half edit similarity of the top k, where k is the
/// length of the human list.
pub fn prototypicality_instance(agent: &RankedList, human: &RankedList) -> f64 {
    let k = human.len();
    let a: Vec<&str> = agent.top(k).iter().map(|i| i.word.as_str()).collect();
    let h: Vec<&str> = human.words().collect();
    let top = (agent.first().is_some() && agent.first() == human.first()) as u8 as f64;
    0.5 * top + 0.5 * edit_similarity(&a, &h, k)
}

/// Prototypicality against a human pool over the selected probes.
pub fn prototypicality(
    input: &MetricInput<'_>,
    agent: &AgentResponses,
    human: &AgentResponses,
    selection: &ProbeSelection,
    relation: Relation,
) -> Result<RelationScore> {
    if !Relation::PROTOTYPICAL.contains(&relation) {
        return Err(Error::InvalidArgument(format!("prototypicality is not defined for {relation}")));
    }
    let pass = TargetPass {
        relation,
        metric: Metric::Prototypicality,
        require_set: false,
        only: Some(&selection.kept),
    };
    Ok(score_targets(input, agent, pass, |p, list, _| match human.ranked(&p.id) {
        Some(gold) if !gold.is_empty() => Kernel::Score(prototypicality_instance(list, gold), None),
        _ => Kernel::NoGold,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn similarity_examples() {
        let a = ["room", "building", "home", "house"];
        let b = ["building", "home", "house", "room"];
        assert_eq!(edit_similarity(&a, &a, 4), 1.0);
        assert_eq!(edit_similarity(&["a", "b"], &["c", "d"], 2), 0.0);
        assert_eq!(edit_distance(&a, &b), 2);
        assert_eq!(edit_similarity(&a, &b, 4), 0.75);
    }
}
