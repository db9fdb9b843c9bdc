//! Score suite over ranked response lists and pruned relatum sets.
//!
//! Every per-relation score is a mean over targets (or tuples) of a mean
//! over prompts. Binary kernels also carry exact rational values.

mod distinguish;
mod entropy;
mod prototypicality;
mod retrieval;
mod symmetry;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::lexicon::{Relation, RelatumSets, Tuple};
use crate::probegen::{Probe, ProbeSet};

pub use distinguish::{audc, distinguishability, rank_score, Audc, DistinguishabilityMatrix, PairScore};
pub use entropy::{is_uniform, response_entropy, select_prototypicality_probes, ProbeSelection};
pub use prototypicality::{edit_distance, edit_similarity, prototypicality, prototypicality_instance};
pub use retrieval::{completeness, precision_at_1, recall_at_k, soundness};
pub use symmetry::{symmetry, symmetry_indicator, SYMMETRY_KS};

/// The data every metric reads besides the agent's lists.
#[derive(Debug, Clone, Copy)]
pub struct MetricInput<'a> {
    pub probes: &'a ProbeSet,
    pub sets: &'a RelatumSets,
    /// Symmetrically augmented tuples, already filtered to the vocabulary.
    pub tuples: &'a BTreeSet<Tuple>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Soundness,
    Completeness,
    Symmetry,
    Prototypicality,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Soundness,
        Metric::Completeness,
        Metric::Symmetry,
        Metric::Prototypicality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Soundness => "soundness",
            Metric::Completeness => "completeness",
            Metric::Symmetry => "symmetry",
            Metric::Prototypicality => "prototypicality",
        }
    }

    /// Binary per-probe outcomes are compared with McNemar, graded ones with
    /// Wilcoxon.
    pub fn is_binary(self) -> bool {
        matches!(self, Metric::Soundness | Metric::Symmetry)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-probe (or per tuple and prompt) kernel value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeScore {
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relatum: Option<String>,
    pub prompt_id: String,
    pub value: f64,
}

impl ProbeScore {
    /// Key used to pair outcomes of two agents.
    pub fn key(&self) -> (String, Option<String>, String) {
        (self.target.clone(), self.relatum.clone(), self.prompt_id.clone())
    }
}

/// Prompt-averaged score for one target (or tuple when `relatum` is set).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitScore {
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relatum: Option<String>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Ratio<i64>>,
    pub prompts: usize,
}

/// Why units or probes were left out of an average.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusions {
    /// Targets with no response for any prompt.
    pub no_responses: usize,
    /// Targets whose relatum set for the relation is empty after pruning.
    pub empty_relatum_set: usize,
    /// Tuples whose converse probe is missing or unanswered.
    pub missing_converse: usize,
    /// Probes without a human gold list.
    pub missing_gold: usize,
    /// Probes of the relation with an empty response list.
    pub unanswered_probes: usize,
}

/// One metric for one relation and agent, with its breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationScore {
    pub agent: String,
    pub metric: Metric,
    pub relation: Relation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// `None` when no unit could be scored.
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Ratio<i64>>,
    pub units: Vec<UnitScore>,
    pub probes: Vec<ProbeScore>,
    pub excluded: Exclusions,
}

impl RelationScore {
    /// Values by pairing key, for paired tests.
    pub fn probe_map(&self) -> BTreeMap<(String, Option<String>, String), f64> {
        self.probes.iter().map(|p| (p.key(), p.value)).collect()
    }
}

/// Running mean from a sum and a count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    pub fn push(&mut self, x: f64) {
        self.sum += x;
        self.n += 1;
    }

    pub fn merge(&mut self, other: Mean) {
        self.sum += other.sum;
        self.n += other.n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

impl FromIterator<f64> for Mean {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Mean::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

pub(crate) fn ratio_mean(values: &[Ratio<i64>]) -> Option<Ratio<i64>> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(Ratio::from_integer(0), |acc, v| acc + v);
    Some(sum / Ratio::from_integer(values.len() as i64))
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Probes of one relation grouped by target, prompts in file order.
pub(crate) fn probes_by_target(probes: &ProbeSet, relation: Relation) -> BTreeMap<&str, Vec<&Probe>> {
    let mut out: BTreeMap<&str, Vec<&Probe>> = BTreeMap::new();
    for p in probes.iter().filter(|p| p.relation == relation) {
        out.entry(p.target.as_str()).or_default().push(p);
    }
    out
}
