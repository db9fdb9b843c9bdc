use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;

use super::retrieval::summarize;
use super::{probes_by_target, ratio_mean, ratio_to_f64, Exclusions, Metric, MetricInput, ProbeScore, UnitScore};
use crate::error::{Error, Result};
use crate::lexicon::Relation;
use crate::responses::{AgentResponses, RankedList};

pub const SYMMETRY_KS: [usize; 3] = [1, 5, 10];

/// v in the top k for the w-probe and w in the top k for the v-probe.
pub fn symmetry_indicator(w_list: &RankedList, v: &str, v_list: &RankedList, w: &str, k: usize) -> bool {
    w_list.in_top(v, k) && v_list.in_top(w, k)
}

/// Symmetry at cutoff `k` for ANT or SYN. Each unordered tuple is scored
/// once; both orientations share prompts, so the product is the same.
pub fn symmetry(input: &MetricInput<'_>, responses: &AgentResponses, relation: Relation, k: usize) -> Result<super::RelationScore> {
    if !relation.is_symmetric() {
        return Err(Error::InvalidArgument(format!("symmetry is defined for ANT and SYN, not {relation}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("symmetry cutoff must be positive".into()));
    }
    let by_target = probes_by_target(input.probes, relation);
    let pairs: BTreeSet<(&str, &str)> = input
        .tuples
        .iter()
        .filter(|t| t.relation == relation)
        .map(|t| {
            let (a, b) = (t.target.as_str(), t.relatum.as_str());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let pairs: Vec<(&str, &str)> = pairs.into_iter().collect();

    let outcomes: Vec<Option<(UnitScore, Vec<ProbeScore>)>> = pairs
        .par_iter()
        .map(|&(w, v)| {
            let (wp, vp) = (by_target.get(w)?, by_target.get(v)?);
            let mut scores = Vec::new();
            let mut exact = Vec::new();
            for p in wp {
                let Some(q) = vp.iter().find(|q| q.prompt_id == p.prompt_id) else {
                    continue;
                };
                let (Some(lw), Some(lv)) = (responses.ranked(&p.id), responses.ranked(&q.id)) else {
                    continue;
                };
                let hit = symmetry_indicator(lw, v, lv, w, k);
                exact.push(Ratio::from_integer(hit as i64));
                scores.push(ProbeScore {
                    target: w.to_string(),
                    relatum: Some(v.to_string()),
                    prompt_id: p.prompt_id.clone(),
                    value: hit as u8 as f64,
                });
            }
            let exact = ratio_mean(&exact)?;
            Some((
                UnitScore {
                    target: w.to_string(),
                    relatum: Some(v.to_string()),
                    value: ratio_to_f64(exact),
                    exact: Some(exact),
                    prompts: scores.len(),
                },
                scores,
            ))
        })
        .collect();

    let mut excluded = Exclusions::default();
    let mut units = Vec::new();
    let mut probes = Vec::new();
    for o in outcomes {
        match o {
            Some((u, ps)) => {
                units.push(u);
                probes.extend(ps);
            }
            None => excluded.missing_converse += 1,
        }
    }
    Ok(summarize(
        responses.agent.name.clone(),
        Metric::Symmetry,
        relation,
        Some(k),
        units,
        probes,
        excluded,
    ))
}
