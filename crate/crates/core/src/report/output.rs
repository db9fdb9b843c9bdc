use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::compare::{
    macro_avg, metric_keys, micro, pretraining_comparison, scores_for, significance_grid, size_difference_table,
};
use super::frequency::{frequency_correlations, FrequencyTable};
use super::prompts::per_prompt_breakdown;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluation::AgentEvaluation;
use crate::io::{create_writer, file_sha256, sha256_hex, write_json, write_jsonl, write_string};
use crate::lexicon::Relation;
use crate::metrics::{Audc, DistinguishabilityMatrix, Metric};
use crate::responses::AgentId;
use crate::stats::mann_whitney_u;

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<PathBuf> {
    let mut w = csv::Writer::from_writer(create_writer(path)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

/// `p,eta` step points of the distinguishability curve.
pub fn curve_csv(audc: &Audc) -> String {
    let mut s = String::from("p,eta\n");
    for (p, eta) in &audc.curve {
        s.push_str(&format!("{p},{eta}\n"));
    }
    s
}

/// 6×6 grid with relation labels; the diagonal and missing pairs are empty.
pub fn matrix_csv(m: &DistinguishabilityMatrix) -> String {
    let labels: Vec<&str> = Relation::ALL.iter().map(|r| r.label()).collect();
    let mut s = format!("r,{}\n", labels.join(","));
    for (i, row) in m.grid().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.map(|v| v.to_string()).unwrap_or_default()).collect();
        s.push_str(&format!("{},{}\n", labels[i], cells.join(",")));
    }
    s
}

#[derive(Serialize)]
struct UnitRow<'a> {
    row: &'static str,
    relation: Relation,
    k: Option<usize>,
    target: &'a str,
    relatum: Option<&'a str>,
    prompts: Option<usize>,
    value: Option<f64>,
    exact: Option<String>,
}

/// reports/{metric}/{agent}.csv with per-unit rows and one summary row per
/// relation, plus the same scores as JSONL.
pub fn write_metric_reports(out: &Path, eval: &AgentEvaluation) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for metric in Metric::ALL {
        let scores: Vec<_> = eval.scores.iter().filter(|s| s.metric == metric).collect();
        if scores.is_empty() {
            continue;
        }
        let dir = out.join("reports").join(metric.name());
        let mut rows = Vec::new();
        for s in &scores {
            for u in &s.units {
                rows.push(UnitRow {
                    row: "unit",
                    relation: s.relation,
                    k: s.k,
                    target: &u.target,
                    relatum: u.relatum.as_deref(),
                    prompts: Some(u.prompts),
                    value: Some(u.value),
                    exact: u.exact.map(|r| r.to_string()),
                });
            }
            rows.push(UnitRow {
                row: "summary",
                relation: s.relation,
                k: s.k,
                target: "",
                relatum: None,
                prompts: None,
                value: s.value,
                exact: s.exact.map(|r| r.to_string()),
            });
        }
        written.push(write_csv(&dir.join(format!("{}.csv", eval.agent.name)), rows)?);
        let path = dir.join(format!("{}.jsonl", eval.agent.name));
        write_jsonl(&path, scores)?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    agent: &'a str,
    metric: String,
    scope: &'a str,
    value: Option<f64>,
    exact: Option<String>,
    units: Option<usize>,
    no_responses: Option<usize>,
    empty_relatum_set: Option<usize>,
    missing_converse: Option<usize>,
    missing_gold: Option<usize>,
}

fn summary_rows(eval: &AgentEvaluation) -> Vec<SummaryRow<'_>> {
    let mut rows = Vec::new();
    let agent = eval.agent.name.as_str();
    for key in metric_keys(eval) {
        for s in scores_for(eval, key) {
            rows.push(SummaryRow {
                agent,
                metric: key.label(),
                scope: s.relation.label(),
                value: s.value,
                exact: s.exact.map(|r| r.to_string()),
                units: Some(s.units.len()),
                no_responses: Some(s.excluded.no_responses),
                empty_relatum_set: Some(s.excluded.empty_relatum_set),
                missing_converse: Some(s.excluded.missing_converse),
                missing_gold: Some(s.excluded.missing_gold),
            });
        }
        for (scope, value) in [("micro", micro(eval, key)), ("macro", macro_avg(eval, key))] {
            rows.push(SummaryRow {
                agent,
                metric: key.label(),
                scope,
                value,
                exact: None,
                units: None,
                no_responses: None,
                empty_relatum_set: None,
                missing_converse: None,
                missing_gold: None,
            });
        }
    }
    rows.push(SummaryRow {
        agent,
        metric: "audc".into(),
        scope: "all",
        value: Some(eval.audc.area),
        exact: None,
        units: None,
        no_responses: None,
        empty_relatum_set: None,
        missing_converse: None,
        missing_gold: None,
    });
    rows
}

#[derive(Serialize)]
struct EntropyCsvRow<'a> {
    relation: Relation,
    prompt_id: &'a str,
    target: &'a str,
    support: usize,
    entropy: f64,
}

/// Plot data: metric bars, distinguishability curves and matrices, and
/// human entropy distributions.
pub fn emit_figures(out: &Path, evals: &[AgentEvaluation]) -> Result<Vec<PathBuf>> {
    let dir = out.join("figures");
    let mut written = Vec::new();
    let bars: Vec<SummaryRow> = evals.iter().flat_map(summary_rows).collect();
    written.push(write_csv(&dir.join("metric_bars.csv"), bars)?);
    for e in evals {
        let name = &e.agent.name;
        let p = dir.join(format!("audc_curve_{name}.csv"));
        write_string(&p, &curve_csv(&e.audc))?;
        written.push(p);
        let p = dir.join(format!("distinguishability_{name}.csv"));
        write_string(&p, &matrix_csv(&e.distinguishability))?;
        written.push(p);
        if !e.entropy.is_empty() {
            let rows = e.entropy.iter().map(|r| EntropyCsvRow {
                relation: r.relation,
                prompt_id: &r.prompt_id,
                target: &r.target,
                support: r.support,
                entropy: r.entropy,
            });
            written.push(write_csv(&dir.join(format!("entropy_{name}.csv")), rows)?);
        }
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyTestRow {
    pub agent: String,
    pub relation_a: Relation,
    pub relation_b: Relation,
    pub n_a: usize,
    pub n_b: usize,
    pub u: f64,
    pub p: f64,
    pub significant: bool,
}

/// Mann-Whitney U between the entropy distributions of every relation pair.
pub fn entropy_mann_whitney(eval: &AgentEvaluation, alpha: f64) -> Result<Vec<EntropyTestRow>> {
    let by_rel = |r: Relation| -> Vec<f64> { eval.entropy.iter().filter(|e| e.relation == r).map(|e| e.entropy).collect() };
    let mut rows = Vec::new();
    for (i, &a) in Relation::ALL.iter().enumerate() {
        for &b in &Relation::ALL[i + 1..] {
            let (xa, xb) = (by_rel(a), by_rel(b));
            if xa.is_empty() || xb.is_empty() {
                continue;
            }
            let t = mann_whitney_u(&xa, &xb, alpha)?;
            rows.push(EntropyTestRow {
                agent: eval.agent.name.clone(),
                relation_a: a,
                relation_b: b,
                n_a: xa.len(),
                n_b: xb.len(),
                u: t.statistic,
                p: t.p_value,
                significant: t.significant,
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct PromptCsvRow<'a> {
    agent: &'a str,
    metric: &'a str,
    relation: Relation,
    prompt_id: &'a str,
    value: Option<f64>,
    units: usize,
    best: bool,
}

#[derive(Serialize)]
struct LeveneCsvRow<'a> {
    agent: &'a str,
    metric: &'a str,
    relation: Relation,
    best_prompt: Option<&'a str>,
    statistic: Option<f64>,
    p: Option<f64>,
    heteroscedastic: Option<bool>,
}

#[derive(Serialize)]
struct OorCsvRow<'a> {
    agent: &'a str,
    responses: usize,
    tokens: usize,
    oor_tokens: usize,
    oor_token_rate: f64,
    types: usize,
    oor_types: usize,
    oor_type_rate: f64,
    all_oor_responses: usize,
    all_oor_rate: f64,
    mean_first_non_oor_rank: f64,
}

/// Write every table under reports/, figures/ and stats/. Tables needing a
/// missing agent kind are skipped with a warning.
pub fn write_reports(
    out: &Path,
    dataset: &Dataset,
    evals: &[AgentEvaluation],
    freq: Option<&FrequencyTable>,
    alpha: f64,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for e in evals {
        written.extend(write_metric_reports(out, e)?);
    }
    let summary: Vec<SummaryRow> = evals.iter().flat_map(summary_rows).collect();
    written.push(write_csv(&out.join("reports").join("summary.csv"), summary)?);
    written.extend(emit_figures(out, evals)?);

    let stats = out.join("stats");
    written.push(write_csv(&stats.join("significance_grid.csv"), significance_grid(evals, alpha)?)?);
    written.push(write_csv(&stats.join("size_difference.csv"), size_difference_table(evals, alpha)?)?);
    match pretraining_comparison(evals, alpha) {
        Ok((best, counts)) => {
            written.push(write_csv(&stats.join("pretraining_best.csv"), best)?);
            written.push(write_csv(&stats.join("pretraining_counts.csv"), counts)?);
        }
        Err(Error::MissingAgentKind(kind)) => log::warn!("no {kind} agents; pretraining comparison skipped"),
        Err(e) => return Err(e),
    }

    let mut prompt_rows = Vec::new();
    let mut levene_rows = Vec::new();
    let breakdowns: Vec<_> = evals
        .iter()
        .flat_map(|e| {
            metric_keys(e)
                .into_iter()
                .filter(|k| k.metric != Metric::Prototypicality)
                .flat_map(move |k| scores_for(e, k).map(move |s| (k, s)))
        })
        .map(|(k, s)| per_prompt_breakdown(s, k, &dataset.templates, alpha))
        .collect::<Result<_>>()?;
    for b in &breakdowns {
        for p in &b.prompts {
            prompt_rows.push(PromptCsvRow {
                agent: &b.agent,
                metric: &b.metric,
                relation: b.relation,
                prompt_id: &p.prompt_id,
                value: p.value,
                units: p.units,
                best: b.best_prompt.as_deref() == Some(p.prompt_id.as_str()),
            });
        }
        levene_rows.push(LeveneCsvRow {
            agent: &b.agent,
            metric: &b.metric,
            relation: b.relation,
            best_prompt: b.best_prompt.as_deref(),
            statistic: b.levene.as_ref().map(|t| t.statistic),
            p: b.levene.as_ref().map(|t| t.p_value),
            heteroscedastic: b.levene.as_ref().map(|t| t.significant),
        });
    }
    written.push(write_csv(&stats.join("per_prompt.csv"), prompt_rows)?);
    written.push(write_csv(&stats.join("levene.csv"), levene_rows)?);

    let mut mw = Vec::new();
    for e in evals.iter().filter(|e| !e.entropy.is_empty()) {
        mw.extend(entropy_mann_whitney(e, alpha)?);
    }
    written.push(write_csv(&stats.join("entropy_mann_whitney.csv"), mw)?);
    if let Some(freq) = freq {
        let rows = frequency_correlations(evals, &dataset.sets, freq, alpha)?;
        written.push(write_csv(&stats.join("frequency_spearman.csv"), rows)?);
    }
    let oor = evals.iter().map(|e| OorCsvRow {
        agent: &e.agent.name,
        responses: e.oor.responses,
        tokens: e.oor.tokens,
        oor_tokens: e.oor.oor_tokens,
        oor_token_rate: e.oor.oor_token_rate(),
        types: e.oor.types,
        oor_types: e.oor.oor_types,
        oor_type_rate: e.oor.oor_type_rate(),
        all_oor_responses: e.oor.all_oor_responses,
        all_oor_rate: e.oor.all_oor_rate(),
        mean_first_non_oor_rank: e.oor.mean_first_non_oor_rank(),
    });
    written.push(write_csv(&stats.join("oor.csv"), oor)?);
    let selections: Vec<_> = evals
        .iter()
        .filter_map(|e| e.selection.as_ref().map(|s| (e.agent.name.clone(), s)))
        .collect();
    if !selections.is_empty() {
        let p = stats.join("prototypicality_selection.json");
        write_json(&p, &selections)?;
        written.push(p);
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestInput {
    pub path: PathBuf,
    pub sha256: String,
}

/// Run fingerprint: identical inputs give an identical manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub inputs: Vec<ManifestInput>,
    pub agents: Vec<AgentId>,
    pub probes: usize,
    pub probe_counts: std::collections::BTreeMap<Relation, usize>,
    pub source_tuples: usize,
    pub augmented_tuples: usize,
    pub probe_set_sha256: String,
}

impl Manifest {
    pub fn collect(config_src: &str, inputs: &[&Path], agents: Vec<AgentId>, dataset: &Dataset) -> Result<Self> {
        let inputs = inputs
            .iter()
            .map(|p| {
                Ok(ManifestInput {
                    path: p.to_path_buf(),
                    sha256: file_sha256(p)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Manifest {
            config_sha256: sha256_hex(config_src.as_bytes()),
            inputs,
            agents,
            probes: dataset.probes.len(),
            probe_counts: dataset.probes.counts(),
            source_tuples: dataset.source_tuples.len(),
            augmented_tuples: dataset.tuples.len(),
            probe_set_sha256: crate::evaluation::probe_set_hash(&dataset.probes),
        })
    }

    pub fn save(&self, out: &Path) -> Result<()> {
        write_json(&out.join("manifest.json"), self)
    }
}
