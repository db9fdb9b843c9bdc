use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probegen::ProbeId;

/// Response mass over word forms for one probe and one agent.
///
/// Human distributions keep their integer counts so that uniformity and
/// exact sums can be checked without float rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseDistribution {
    pub probe: ProbeId,
    pub agent: String,
    probs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counts: Option<BTreeMap<String, u64>>,
}

impl ResponseDistribution {
    /// Drops zero entries; rejects negative or non-finite mass and empty input.
    pub fn from_probs(probe: ProbeId, agent: impl Into<String>, probs: BTreeMap<String, f64>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (w, p) in probs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidArgument(format!("probe {probe}: score {p} for `{w}`")));
            }
            if p > 0.0 {
                kept.insert(w, p);
            }
        }
        if kept.is_empty() {
            return Err(Error::InvalidArgument(format!("probe {probe}: empty distribution")));
        }
        Ok(ResponseDistribution {
            probe,
            agent: agent.into(),
            probs: kept,
            counts: None,
        })
    }

    pub fn from_counts(probe: ProbeId, agent: impl Into<String>, counts: BTreeMap<String, u64>) -> Result<Self> {
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidArgument(format!("probe {probe}: no responses")));
        }
        let probs = counts.iter().map(|(w, &c)| (w.clone(), c as f64 / total as f64)).collect();
        Ok(ResponseDistribution {
            probe,
            agent: agent.into(),
            probs,
            counts: Some(counts),
        })
    }

    pub fn get(&self, word: &str) -> f64 {
        self.probs.get(word).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn counts(&self) -> Option<&BTreeMap<String, u64>> {
        self.counts.as_ref()
    }

    pub fn total_count(&self) -> Option<u64> {
        self.counts.as_ref().map(|c| c.values().sum())
    }

    /// Number of distinct words with positive mass.
    pub fn support(&self) -> usize {
        self.probs.len()
    }

    pub fn mass(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Keep the `k` highest-ranked words. Counts are dropped since a
    /// truncated count vector no longer describes the pool.
    pub fn truncate(&mut self, k: usize) {
        if self.probs.len() <= k {
            return;
        }
        let keep: Vec<String> = ranked_entries(&self.probs, self.counts.as_ref())
            .into_iter()
            .take(k)
            .map(|(w, _)| w)
            .collect();
        self.probs.retain(|w, _| keep.contains(w));
        self.counts = None;
    }
}

/// Score order: descending score then ascending word. Counts win over the
/// derived floats when present so equal counts always tie exactly.
fn ranked_entries(probs: &BTreeMap<String, f64>, counts: Option<&BTreeMap<String, u64>>) -> Vec<(String, f64)> {
    let mut entries: Vec<(String, f64, u64)> = probs
        .iter()
        .map(|(w, &p)| (w.clone(), p, counts.and_then(|c| c.get(w).copied()).unwrap_or(0)))
        .collect();
    entries.sort_by(|a, b| {
        let primary = if counts.is_some() {
            b.2.cmp(&a.2)
        } else {
            b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal)
        };
        primary.then_with(|| a.0.cmp(&b.0))
    });
    entries.into_iter().map(|(w, p, _)| (w, p)).collect()
}

/// Convex combination `alpha·d_a + (1−alpha)·d_an` with absent words at 0.
pub fn merge_determiner(d_a: &ResponseDistribution, d_an: &ResponseDistribution, alpha: f64) -> Result<ResponseDistribution> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    if d_a.probe != d_an.probe {
        return Err(Error::InvalidArgument(format!(
            "cannot merge responses of {} and {}",
            d_a.probe, d_an.probe
        )));
    }
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for (w, p) in &d_a.probs {
        *out.entry(w.clone()).or_default() += alpha * p;
    }
    for (w, p) in &d_an.probs {
        *out.entry(w.clone()).or_default() += (1.0 - alpha) * p;
    }
    ResponseDistribution::from_probs(d_a.probe.clone(), d_a.agent.clone(), out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedItem {
    pub word: String,
    pub score: f64,
    #[serde(default)]
    pub oor: bool,
}

/// Ordered response list, highest score first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub probe: ProbeId,
    pub agent: String,
    pub items: Vec<RankedItem>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.word.as_str())
    }

    pub fn top(&self, k: usize) -> &[RankedItem] {
        &self.items[..k.min(self.items.len())]
    }

    pub fn first(&self) -> Option<&str> {
        self.items.first().map(|i| i.word.as_str())
    }

    /// 0-based position of `word`.
    pub fn position(&self, word: &str) -> Option<usize> {
        self.items.iter().position(|i| i.word == word)
    }

    pub fn in_top(&self, word: &str, k: usize) -> bool {
        self.top(k).iter().any(|i| i.word == word)
    }
}

/// Top-`k` words (`None` keeps everything), ties broken by ascending word.
pub fn rank(d: &ResponseDistribution, k: Option<usize>) -> RankedList {
    let entries = ranked_entries(&d.probs, d.counts.as_ref());
    let k = k.unwrap_or(entries.len());
    RankedList {
        probe: d.probe.clone(),
        agent: d.agent.clone(),
        items: entries
            .into_iter()
            .take(k)
            .map(|(word, score)| RankedItem { word, score, oor: false })
            .collect(),
    }
}
