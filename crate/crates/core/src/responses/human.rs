use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::agent::AgentId;
use super::distribution::ResponseDistribution;
use super::set::AgentResponses;
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};
use crate::lexicon::normalize_word;
use crate::probegen::{ProbeId, ProbeSet};

pub const MAX_HUMAN_WORDS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HumanRawResponse {
    pub participant: String,
    pub subset: String,
    pub probe: String,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BogusRow {
    probe: String,
    accepted: Vec<String>,
}

/// Accepted answers for attention-check probes.
#[derive(Debug, Clone, Default)]
pub struct BogusKey {
    accepted: HashMap<String, BTreeSet<String>>,
}

impl BogusKey {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<S>)>,
        S: Into<String>,
    {
        let accepted = entries
            .into_iter()
            .map(|(p, words)| {
                let words = words.into_iter().map(|w| w.into().trim().to_lowercase()).collect();
                (p.into(), words)
            })
            .collect();
        BogusKey { accepted }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            match serde_json::from_str::<BogusRow>(&line) {
                Ok(r) => rows.push((r.probe, r.accepted)),
                Err(e) => errors.push(LineError::new(line_no, e.to_string())),
            }
        }
        if !errors.is_empty() {
            return Err(Error::schema(source_name, errors));
        }
        Ok(Self::new(rows))
    }

    pub fn is_bogus(&self, probe: &str) -> bool {
        self.accepted.contains_key(probe)
    }

    /// An answer passes when it is non-empty and every word is accepted.
    pub fn passes(&self, probe: &str, words: &[String]) -> bool {
        let Some(ok) = self.accepted.get(probe) else {
            return true;
        };
        let words: Vec<String> = words
            .iter()
            .map(|w| w.trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        !words.is_empty() && words.iter().all(|w| ok.contains(w))
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HumanIngestStats {
    pub rows: usize,
    /// (participant, subset) pairs seen.
    pub submissions: usize,
    pub rejected_submissions: usize,
    pub unknown_probe_rows: usize,
    /// Multi-token or empty entries that were dropped.
    pub invalid_words: usize,
    /// Repeats within one participant's list that were collapsed.
    pub repeated_words: usize,
    pub probes_with_responses: usize,
}

/// Pool accepted human answers into per-probe frequency distributions.
///
/// The bogus-probe control works on submissions: a participant's answers
/// to one subset are dropped together if any bogus answer in that subset
/// fails the key. Every list contributes one count per distinct word.
pub fn ingest_human<R: BufRead>(
    reader: R,
    source_name: &str,
    probes: &ProbeSet,
    key: &BogusKey,
    agent: AgentId,
) -> Result<(AgentResponses, HumanIngestStats)> {
    let mut stats = HumanIngestStats::default();
    let mut errors = Vec::new();
    let mut rows: Vec<HumanRawResponse> = Vec::new();
    for (line_no, line) in numbered_lines(reader) {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        match serde_json::from_str::<HumanRawResponse>(&line) {
            Ok(r) if r.words.len() > MAX_HUMAN_WORDS => errors.push(LineError::new(
                line_no,
                format!("{} words given, at most {MAX_HUMAN_WORDS} allowed", r.words.len()),
            )),
            Ok(r) => rows.push(r),
            Err(e) => errors.push(LineError::new(line_no, e.to_string())),
        }
    }
    if !errors.is_empty() {
        return Err(Error::schema(source_name, errors));
    }
    stats.rows = rows.len();

    let mut failed: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut submissions: BTreeSet<(&str, &str)> = BTreeSet::new();
    for r in &rows {
        let sub = (r.participant.as_str(), r.subset.as_str());
        submissions.insert(sub);
        if key.is_bogus(&r.probe) && !key.passes(&r.probe, &r.words) {
            failed.insert(sub);
        }
    }
    stats.submissions = submissions.len();
    stats.rejected_submissions = failed.len();
    if !submissions.is_empty() && failed.len() == submissions.len() {
        return Err(Error::AllSubsetsRejected);
    }

    let mut counts: BTreeMap<ProbeId, BTreeMap<String, u64>> = BTreeMap::new();
    let mut lists = Vec::new();
    for r in &rows {
        if key.is_bogus(&r.probe) || failed.contains(&(r.participant.as_str(), r.subset.as_str())) {
            continue;
        }
        let id = ProbeId::from(r.probe.as_str());
        if !probes.contains(&id) {
            stats.unknown_probe_rows += 1;
            continue;
        }
        let mut list: Vec<String> = Vec::new();
        for raw in &r.words {
            match normalize_word(raw) {
                Some(w) if list.contains(&w) => stats.repeated_words += 1,
                Some(w) => list.push(w),
                None => stats.invalid_words += 1,
            }
        }
        if list.is_empty() {
            continue;
        }
        let c = counts.entry(id.clone()).or_default();
        for w in &list {
            *c.entry(w.clone()).or_default() += 1;
        }
        lists.push((id, list));
    }
    if stats.unknown_probe_rows > 0 {
        log::warn!("{source_name}: skipped {} row(s) with unknown probe ids", stats.unknown_probe_rows);
    }
    stats.probes_with_responses = counts.len();
    let dists = counts
        .into_iter()
        .map(|(id, c)| ResponseDistribution::from_counts(id, agent.name.clone(), c))
        .collect::<Result<Vec<_>>>()?;
    Ok((AgentResponses::with_lists(agent, dists, lists), stats))
}

pub fn load_human(
    path: &Path,
    probes: &ProbeSet,
    key: &BogusKey,
    agent: AgentId,
) -> Result<(AgentResponses, HumanIngestStats)> {
    ingest_human(open_reader(path)?, &path.display().to_string(), probes, key, agent)
}
