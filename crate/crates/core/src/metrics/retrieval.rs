use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;

use super::{probes_by_target, ratio_mean, ratio_to_f64, Exclusions, Metric, MetricInput, Mean, ProbeScore, RelationScore, UnitScore};
use crate::lexicon::{Relation, RelatumSet};
use crate::probegen::{Probe, ProbeId};
use crate::responses::{AgentResponses, RankedList};

/// 1 when the top-ranked word is a valid relatum.
pub fn precision_at_1(list: &RankedList, set: &RelatumSet) -> Ratio<i64> {
    let hit = list.first().is_some_and(|w| set.contains(w));
    Ratio::from_integer(hit as i64)
}

/// Hits in the top k over k, with k = min(|Y|, |L|). An empty list or set scores 0.
pub fn recall_at_k(list: &RankedList, set: &RelatumSet) -> Ratio<i64> {
    let k = set.len().min(list.len());
    if k == 0 {
        return Ratio::from_integer(0);
    }
    let hits = list.top(k).iter().filter(|i| set.contains(&i.word)).count();
    Ratio::new(hits as i64, k as i64)
}

pub(crate) enum Kernel {
    Score(f64, Option<Ratio<i64>>),
    /// Gold data for the probe is missing.
    NoGold,
}

pub(crate) struct TargetPass<'a> {
    pub relation: Relation,
    pub metric: Metric,
    pub require_set: bool,
    pub only: Option<&'a BTreeSet<ProbeId>>,
}

enum Outcome {
    EmptySet,
    NoResponses { unanswered: usize, no_gold: usize },
    Scored { unit: UnitScore, probes: Vec<ProbeScore>, unanswered: usize, no_gold: usize },
}

/// Run a per-probe kernel over every target of a relation and average over
/// prompts, then targets. Targets are scored in parallel and reduced in
/// target order, so results do not depend on scheduling.
pub(crate) fn score_targets<F>(input: &MetricInput<'_>, responses: &AgentResponses, pass: TargetPass<'_>, kernel: F) -> RelationScore
where
    F: Fn(&Probe, &RankedList, Option<&RelatumSet>) -> Kernel + Sync,
{
    let groups: Vec<(&str, Vec<&Probe>)> = probes_by_target(input.probes, pass.relation)
        .into_iter()
        .map(|(t, ps)| {
            let ps = match pass.only {
                Some(only) => ps.into_iter().filter(|p| only.contains(&p.id)).collect(),
                None => ps,
            };
            (t, ps)
        })
        .filter(|(_, ps)| !ps.is_empty())
        .collect();

    let outcomes: Vec<Outcome> = groups
        .par_iter()
        .map(|(target, probes)| {
            let set = input.sets.get(target, pass.relation).filter(|s| !s.is_empty());
            if pass.require_set && set.is_none() {
                return Outcome::EmptySet;
            }
            let mut scores = Vec::new();
            let mut exact = Vec::new();
            let mut unanswered = 0;
            let mut no_gold = 0;
            for p in probes {
                let Some(list) = responses.ranked(&p.id).filter(|l| !l.is_empty()) else {
                    unanswered += 1;
                    continue;
                };
                match kernel(p, list, set) {
                    Kernel::Score(v, r) => {
                        scores.push(ProbeScore {
                            target: target.to_string(),
                            relatum: None,
                            prompt_id: p.prompt_id.clone(),
                            value: v,
                        });
                        exact.extend(r);
                    }
                    Kernel::NoGold => no_gold += 1,
                }
            }
            if scores.is_empty() {
                return Outcome::NoResponses { unanswered, no_gold };
            }
            let exact = (exact.len() == scores.len()).then(|| ratio_mean(&exact)).flatten();
            let value = match exact {
                Some(r) => ratio_to_f64(r),
                None => scores.iter().map(|s| s.value).collect::<Mean>().value().unwrap_or(0.0),
            };
            Outcome::Scored {
                unit: UnitScore {
                    target: target.to_string(),
                    relatum: None,
                    value,
                    exact,
                    prompts: scores.len(),
                },
                probes: scores,
                unanswered,
                no_gold,
            }
        })
        .collect();

    let mut excluded = Exclusions::default();
    let mut units = Vec::new();
    let mut probe_scores = Vec::new();
    for o in outcomes {
        match o {
            Outcome::EmptySet => excluded.empty_relatum_set += 1,
            Outcome::NoResponses { unanswered, no_gold } => {
                excluded.no_responses += 1;
                excluded.unanswered_probes += unanswered;
                excluded.missing_gold += no_gold;
            }
            Outcome::Scored { unit, probes, unanswered, no_gold } => {
                excluded.unanswered_probes += unanswered;
                excluded.missing_gold += no_gold;
                units.push(unit);
                probe_scores.extend(probes);
            }
        }
    }
    summarize(responses.agent.name.clone(), pass.metric, pass.relation, None, units, probe_scores, excluded)
}

pub(crate) fn summarize(
    agent: String,
    metric: Metric,
    relation: Relation,
    k: Option<usize>,
    units: Vec<UnitScore>,
    probes: Vec<ProbeScore>,
    excluded: Exclusions,
) -> RelationScore {
    let exact_units: Vec<Ratio<i64>> = units.iter().filter_map(|u| u.exact).collect();
    let exact = (!units.is_empty() && exact_units.len() == units.len())
        .then(|| ratio_mean(&exact_units))
        .flatten();
    let value = match exact {
        Some(r) => Some(ratio_to_f64(r)),
        None => units.iter().map(|u| u.value).collect::<Mean>().value(),
    };
    RelationScore {
        agent,
        metric,
        relation,
        k,
        value,
        exact,
        units,
        probes,
        excluded,
    }
}

pub fn soundness(input: &MetricInput<'_>, responses: &AgentResponses, relation: Relation) -> RelationScore {
    let pass = TargetPass {
        relation,
        metric: Metric::Soundness,
        require_set: true,
        only: None,
    };
    score_targets(input, responses, pass, |_, list, set| {
        let r = precision_at_1(list, set.expect("set required"));
        Kernel::Score(ratio_to_f64(r), Some(r))
    })
}

/// Completeness. Recall values are kept as floats since their denominators
/// vary with set sizes.
pub fn completeness(input: &MetricInput<'_>, responses: &AgentResponses, relation: Relation) -> RelationScore {
    let pass = TargetPass {
        relation,
        metric: Metric::Completeness,
        require_set: true,
        only: None,
    };
    score_targets(input, responses, pass, |_, list, set| {
        Kernel::Score(ratio_to_f64(recall_at_k(list, set.expect("set required"))), None)
    })
}
