use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::agent::AgentId;
use super::distribution::{merge_determiner, ResponseDistribution};
use super::set::AgentResponses;
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};
use crate::probegen::{ProbeId, ProbeSet};

/// Slack on the stored mass of a top-K truncation before it is rejected.
pub const MASS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    A,
    An,
    None,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "a",
            Variant::An => "an",
            Variant::None => "none",
        })
    }
}

/// One line of a model response file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResponseRow {
    pub probe: ProbeId,
    pub agent: String,
    pub variant: Variant,
    pub topk: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelIngestStats {
    pub rows: usize,
    pub probes: usize,
    /// Probes in the probe set with no row at all.
    pub missing_probes: usize,
    pub zero_scores: usize,
    /// Entries folded into an existing word after lowercasing.
    pub case_merges: usize,
}

/// Validate rows against the probe set, then merge each a/an pair with
/// weight `alpha` on the `a` side. A merged list is cut back to the longer
/// of the two input lengths so merged and unmerged probes keep comparable K.
pub fn ingest_model_rows(
    rows: impl IntoIterator<Item = (usize, ModelResponseRow)>,
    source_name: &str,
    probes: &ProbeSet,
    agent: AgentId,
    alpha: f64,
) -> Result<(AgentResponses, ModelIngestStats)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    let mut stats = ModelIngestStats::default();
    let mut errors = Vec::new();
    let mut seen: HashMap<(ProbeId, Variant), usize> = HashMap::new();
    let mut by_probe: BTreeMap<ProbeId, BTreeMap<Variant, (ResponseDistribution, usize)>> = BTreeMap::new();

    for (line_no, row) in rows {
        stats.rows += 1;
        let err = |m: String| LineError::new(line_no, m);
        if row.agent != agent.name {
            errors.push(err(format!("row for agent `{}` in responses of `{}`", row.agent, agent.name)));
            continue;
        }
        let Some(probe) = probes.get(&row.probe) else {
            errors.push(err(format!("unknown probe `{}`", row.probe)));
            continue;
        };
        let variant_ok = match row.variant {
            Variant::None => !probe.det_before_v(),
            Variant::A | Variant::An => probe.det_before_v(),
        };
        if !variant_ok {
            errors.push(err(format!("variant `{}` does not fit probe `{}`", row.variant, row.probe)));
            continue;
        }
        if let Some(prev) = seen.insert((row.probe.clone(), row.variant), line_no) {
            errors.push(err(format!(
                "duplicate ({}, {}) row, first seen on line {prev}",
                row.probe, row.variant
            )));
            continue;
        }
        let mut probs: BTreeMap<String, f64> = BTreeMap::new();
        let mut bad = None;
        for (w, s) in &row.topk {
            if !s.is_finite() || *s < 0.0 {
                bad = Some(format!("score {s} for `{w}`"));
                break;
            }
            if *s == 0.0 {
                stats.zero_scores += 1;
                continue;
            }
            let w = w.trim().to_lowercase();
            if w.is_empty() {
                bad = Some("empty word".to_string());
                break;
            }
            let slot = probs.entry(w).or_insert(0.0);
            if *slot > 0.0 {
                stats.case_merges += 1;
            }
            *slot += s;
        }
        if let Some(m) = bad {
            errors.push(err(m));
            continue;
        }
        let mass: f64 = probs.values().sum();
        if mass > 1.0 + MASS_TOLERANCE {
            errors.push(err(format!("scores sum to {mass}, above 1")));
            continue;
        }
        let k = probs.len();
        match ResponseDistribution::from_probs(row.probe.clone(), agent.name.clone(), probs) {
            Ok(d) => {
                by_probe.entry(row.probe).or_default().insert(row.variant, (d, k));
            }
            Err(e) => errors.push(err(e.to_string())),
        }
    }
    if !errors.is_empty() {
        return Err(Error::schema(source_name, errors));
    }

    let mut dists = Vec::with_capacity(by_probe.len());
    for (id, mut variants) in by_probe {
        if let Some((d, _)) = variants.remove(&Variant::None) {
            dists.push(d);
            continue;
        }
        let (a, ka) = variants.remove(&Variant::A).ok_or_else(|| Error::MissingVariant {
            probe: id.to_string(),
            variant: "a".into(),
        })?;
        let (an, kan) = variants.remove(&Variant::An).ok_or_else(|| Error::MissingVariant {
            probe: id.to_string(),
            variant: "an".into(),
        })?;
        let mut merged = merge_determiner(&a, &an, alpha)?;
        merged.truncate(ka.max(kan));
        dists.push(merged);
    }
    stats.probes = dists.len();
    stats.missing_probes = probes.len() - dists.len();
    if stats.missing_probes > 0 {
        log::warn!("{source_name}: {} probe(s) have no response rows", stats.missing_probes);
    }
    Ok((AgentResponses::new(agent, dists), stats))
}

pub fn ingest_model<R: BufRead>(
    reader: R,
    source_name: &str,
    probes: &ProbeSet,
    agent: AgentId,
    alpha: f64,
) -> Result<(AgentResponses, ModelIngestStats)> {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (line_no, line) in numbered_lines(reader) {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        match serde_json::from_str::<ModelResponseRow>(&line) {
            Ok(r) => rows.push((line_no, r)),
            Err(e) => errors.push(LineError::new(line_no, e.to_string())),
        }
    }
    if !errors.is_empty() {
        return Err(Error::schema(source_name, errors));
    }
    ingest_model_rows(rows, source_name, probes, agent, alpha)
}

pub fn load_model(path: &Path, probes: &ProbeSet, agent: AgentId, alpha: f64) -> Result<(AgentResponses, ModelIngestStats)> {
    ingest_model(open_reader(path)?, &path.display().to_string(), probes, agent, alpha)
}
