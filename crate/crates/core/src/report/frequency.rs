use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;

use super::compare::{metric_keys, scores_for};
use crate::error::{Error, LineError, Result};
use crate::evaluation::AgentEvaluation;
use crate::io::{numbered_lines, open_reader};
use crate::lexicon::{Relation, RelatumSets};
use crate::metrics::Metric;
use crate::stats::spearman;

/// Unigram counts. Words missing from the file count as 0.
#[derive(Debug, Clone, Default)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
}

impl FrequencyTable {
    pub fn from_pairs<I: IntoIterator<Item = (String, u64)>>(pairs: I) -> Self {
        FrequencyTable {
            counts: pairs.into_iter().map(|(w, c)| (w.to_lowercase(), c)).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut counts: HashMap<String, u64> = HashMap::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next().map(str::parse::<u64>), parts.next()) {
                (Some(w), Some(Ok(c)), None) => *counts.entry(w.to_lowercase()).or_default() += c,
                _ => errors.push(LineError::new(line_no, "expected `word count`")),
            }
        }
        if !errors.is_empty() {
            return Err(Error::schema(source_name, errors));
        }
        Ok(FrequencyTable { counts })
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub agent: String,
    pub metric: String,
    pub relation: Relation,
    pub covariate: &'static str,
    pub n: usize,
    pub rho: Option<f64>,
    pub p: f64,
    pub significant: bool,
}

fn covariates(metric: Metric) -> &'static [&'static str] {
    if metric == Metric::Symmetry {
        &["tuple_mean_frequency", "tuple_frequency_difference"]
    } else {
        &["target_frequency", "relata_mean_frequency", "relata_max_frequency"]
    }
}

fn covariate(name: &str, target: &str, relatum: Option<&str>, relation: Relation, freq: &FrequencyTable, sets: &RelatumSets) -> f64 {
    let ft = freq.get(target) as f64;
    let relata = || -> Vec<f64> {
        sets.get(target, relation)
            .map(|s| s.words().map(|w| freq.get(w) as f64).collect())
            .unwrap_or_default()
    };
    match name {
        "target_frequency" => ft,
        "relata_mean_frequency" => {
            let v = relata();
            if v.is_empty() {
                0.0
            } else {
                v.iter().sum::<f64>() / v.len() as f64
            }
        }
        "relata_max_frequency" => relata().into_iter().fold(0.0, f64::max),
        "tuple_mean_frequency" => (ft + relatum.map_or(0.0, |v| freq.get(v) as f64)) / 2.0,
        "tuple_frequency_difference" => (ft - relatum.map_or(0.0, |v| freq.get(v) as f64)).abs(),
        _ => unreachable!("unknown covariate {name}"),
    }
}

/// Spearman's rho between per-target (or per-tuple) scores and frequency
/// covariates, for every metric, relation and covariate with at least
/// three units.
pub fn frequency_correlations(
    evals: &[AgentEvaluation],
    sets: &RelatumSets,
    freq: &FrequencyTable,
    alpha: f64,
) -> Result<Vec<CorrelationRow>> {
    let mut rows = Vec::new();
    for e in evals {
        for key in metric_keys(e) {
            for score in scores_for(e, key) {
                if score.units.len() < 3 {
                    continue;
                }
                let x: Vec<f64> = score.units.iter().map(|u| u.value).collect();
                for &name in covariates(key.metric) {
                    let y: Vec<f64> = score
                        .units
                        .iter()
                        .map(|u| covariate(name, &u.target, u.relatum.as_deref(), score.relation, freq, sets))
                        .collect();
                    let c = spearman(&x, &y, alpha)?;
                    rows.push(CorrelationRow {
                        agent: e.agent.name.clone(),
                        metric: key.label(),
                        relation: score.relation,
                        covariate: name,
                        n: c.n,
                        rho: c.rho,
                        p: c.p_value,
                        significant: c.significant,
                    });
                }
            }
        }
    }
    Ok(rows)
}
