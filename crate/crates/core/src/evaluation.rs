//! Per-agent evaluation: ingest responses, run every metric, persist.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::AgentConfig;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::io::{read_string, sha256_hex, write_json};
use crate::lexicon::Relation;
use crate::metrics::{
    audc, completeness, distinguishability, is_uniform, prototypicality, response_entropy, select_prototypicality_probes,
    soundness, symmetry, Audc, DistinguishabilityMatrix, MetricInput, ProbeSelection, RelationScore,
};
use crate::probegen::{ProbeId, ProbeSet};
use crate::responses::{
    load_human, load_model, oor_summary, AgentId, AgentKind, AgentResponses, BogusKey, HumanIngestStats,
    ModelIngestStats, OorSummary,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IngestStats {
    Human(HumanIngestStats),
    Model(ModelIngestStats),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub probe: ProbeId,
    pub target: String,
    pub relation: Relation,
    pub prompt_id: String,
    pub support: usize,
    pub entropy: f64,
    pub uniform: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionCounts {
    pub kept: usize,
    pub kept_by_relation: std::collections::BTreeMap<Relation, usize>,
    pub dropped_relation: usize,
    pub dropped_uniform: usize,
    pub dropped_oov: usize,
    pub dropped_no_gold: usize,
}

impl From<&ProbeSelection> for SelectionCounts {
    fn from(s: &ProbeSelection) -> Self {
        SelectionCounts {
            kept: s.kept.len(),
            kept_by_relation: s.kept_by_relation.clone(),
            dropped_relation: s.dropped_relation,
            dropped_uniform: s.dropped_uniform,
            dropped_oov: s.dropped_oov,
            dropped_no_gold: s.dropped_no_gold,
        }
    }
}

/// Everything computed for one agent; the report layer reads only this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEvaluation {
    pub agent: AgentId,
    /// Hash of the probe set the agent was scored on.
    pub probe_set_hash: String,
    pub scores: Vec<RelationScore>,
    pub distinguishability: DistinguishabilityMatrix,
    pub audc: Audc,
    pub oor: OorSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entropy: Vec<EntropyRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prototypicality_gold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionCounts>,
    pub ingest: IngestStats,
}

impl AgentEvaluation {
    pub fn score(&self, metric: crate::metrics::Metric, relation: Relation, k: Option<usize>) -> Option<&RelationScore> {
        self.scores
            .iter()
            .find(|s| s.metric == metric && s.relation == relation && (k.is_none() || s.k == k))
    }

    /// Range checks on everything computed; a failure is a bug, not bad input.
    pub fn check_invariants(&self) -> Result<()> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        for s in &self.scores {
            let units = s.units.iter().map(|u| u.value);
            let probes = s.probes.iter().map(|p| p.value);
            if let Some(bad) = s.value.into_iter().chain(units).chain(probes).find(|x| !in_unit(*x)) {
                return Err(Error::Invariant(format!(
                    "{} {} {} for {} out of [0, 1]: {bad}",
                    self.agent.name, s.metric, s.relation, s.agent
                )));
            }
        }
        if let Some(p) = self.distinguishability.pairs.iter().find(|p| !in_unit(p.d)) {
            return Err(Error::Invariant(format!("D({}, {}) = {} out of [0, 1]", p.r, p.s, p.d)));
        }
        if !(0.0..=30.0).contains(&self.audc.area) {
            return Err(Error::Invariant(format!("AuDC {} out of [0, 30]", self.audc.area)));
        }
        if let Some(e) = self.entropy.iter().find(|e| !in_unit(e.entropy)) {
            return Err(Error::Invariant(format!("entropy {} for probe {}", e.entropy, e.probe)));
        }
        Ok(())
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(format!("{}.json", self.agent.name)), self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&read_string(path)?)?)
    }
}

pub fn probe_set_hash(probes: &ProbeSet) -> String {
    let mut buf = Vec::new();
    for p in probes.iter() {
        buf.extend(serde_json::to_vec(p).expect("probe serializes"));
        buf.push(b'\n');
    }
    sha256_hex(&buf)
}

/// Read an agent's response file with the matching ingester.
pub fn load_agent_responses(
    agent: &AgentConfig,
    probes: &ProbeSet,
    bogus: &BogusKey,
    alpha: f64,
) -> Result<(AgentResponses, IngestStats)> {
    match agent.kind {
        AgentKind::HumanPool => {
            let (r, s) = load_human(&agent.responses, probes, bogus, agent.id())?;
            Ok((r, IngestStats::Human(s)))
        }
        AgentKind::Model => {
            let (r, s) = load_model(&agent.responses, probes, agent.id(), alpha)?;
            Ok((r, IngestStats::Model(s)))
        }
    }
}

pub fn entropy_rows(responses: &AgentResponses, probes: &ProbeSet) -> Vec<EntropyRow> {
    probes
        .iter()
        .filter_map(|p| {
            let d = responses.distribution(&p.id)?;
            Some(EntropyRow {
                probe: p.id.clone(),
                target: p.target.clone(),
                relation: p.relation,
                prompt_id: p.prompt_id.clone(),
                support: d.support(),
                entropy: response_entropy(d),
                uniform: is_uniform(d),
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub symmetry_k: Vec<usize>,
    pub oor_k: usize,
}

/// Score one agent. `gold` is the human pool used for prototypicality,
/// with its probe selection.
pub fn evaluate_agent(
    dataset: &Dataset,
    responses: &AgentResponses,
    ingest: IngestStats,
    gold: Option<(&AgentResponses, &ProbeSelection)>,
    opts: &EvalOptions,
) -> Result<AgentEvaluation> {
    let input = MetricInput {
        probes: &dataset.probes,
        sets: &dataset.sets,
        tuples: &dataset.tuples,
    };
    let mut scores = Vec::new();
    for r in Relation::ALL {
        scores.push(soundness(&input, responses, r));
        scores.push(completeness(&input, responses, r));
    }
    for r in Relation::SYMMETRIC {
        for &k in &opts.symmetry_k {
            scores.push(symmetry(&input, responses, r, k)?);
        }
    }
    if let Some((human, selection)) = gold {
        for r in Relation::PROTOTYPICAL {
            scores.push(prototypicality(&input, responses, human, selection, r)?);
        }
    }
    let matrix = distinguishability(&input, responses);
    let area = audc(&matrix);
    let human = responses.agent.is_human();
    Ok(AgentEvaluation {
        agent: responses.agent.clone(),
        probe_set_hash: probe_set_hash(&dataset.probes),
        scores,
        distinguishability: matrix,
        audc: area,
        oor: oor_summary(responses, &dataset.probes, &dataset.sets, (!human).then_some(opts.oor_k)),
        entropy: if human { entropy_rows(responses, &dataset.probes) } else { Vec::new() },
        prototypicality_gold: gold.map(|(h, _)| h.agent.name.clone()),
        selection: gold.filter(|(h, _)| h.agent == responses.agent).map(|(_, s)| s.into()),
        ingest,
    })
}

/// Probe selection for a human gold pool.
pub fn gold_selection(human: &AgentResponses, dataset: &Dataset) -> ProbeSelection {
    select_prototypicality_probes(human, &dataset.probes, &dataset.vocab)
}
