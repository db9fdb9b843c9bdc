use std::collections::BTreeMap;

use super::agent::AgentId;
use super::distribution::{rank, RankedList, ResponseDistribution};
use crate::probegen::ProbeId;

/// All responses of one agent, one distribution per probe (determiner
/// variants already merged).
#[derive(Debug, Clone)]
pub struct AgentResponses {
    pub agent: AgentId,
    distributions: BTreeMap<ProbeId, ResponseDistribution>,
    ranked: BTreeMap<ProbeId, RankedList>,
    /// Individual answer lists, kept for humans so OOR rates can be counted
    /// per participant answer rather than per pooled list.
    lists: Vec<(ProbeId, Vec<String>)>,
}

impl AgentResponses {
    pub fn new(agent: AgentId, distributions: impl IntoIterator<Item = ResponseDistribution>) -> Self {
        Self::with_lists(agent, distributions, Vec::new())
    }

    pub fn with_lists(
        agent: AgentId,
        distributions: impl IntoIterator<Item = ResponseDistribution>,
        lists: Vec<(ProbeId, Vec<String>)>,
    ) -> Self {
        let distributions: BTreeMap<ProbeId, ResponseDistribution> =
            distributions.into_iter().map(|d| (d.probe.clone(), d)).collect();
        let ranked = distributions.iter().map(|(id, d)| (id.clone(), rank(d, None))).collect();
        AgentResponses {
            agent,
            distributions,
            ranked,
            lists,
        }
    }

    pub fn distribution(&self, probe: &ProbeId) -> Option<&ResponseDistribution> {
        self.distributions.get(probe)
    }

    /// Full ranked list; callers slice it to the k they need.
    pub fn ranked(&self, probe: &ProbeId) -> Option<&RankedList> {
        self.ranked.get(probe)
    }

    pub fn contains(&self, probe: &ProbeId) -> bool {
        self.distributions.contains_key(probe)
    }

    pub fn probes(&self) -> impl Iterator<Item = &ProbeId> {
        self.distributions.keys()
    }

    pub fn distributions(&self) -> impl Iterator<Item = &ResponseDistribution> {
        self.distributions.values()
    }

    pub fn individual_lists(&self) -> &[(ProbeId, Vec<String>)] {
        &self.lists
    }

    pub fn len(&self) -> usize {
        self.distributions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distributions.is_empty()
    }
}
