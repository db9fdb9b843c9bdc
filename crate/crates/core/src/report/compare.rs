use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::AgentEvaluation;
use crate::lexicon::Relation;
use crate::metrics::{Mean, Metric, RelationScore};
use crate::responses::Pretraining;
use crate::stats::{mcnemar, wilcoxon_signed_rank, TestResult};

/// A metric plus its cutoff (symmetry only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MetricKey {
    pub metric: Metric,
    pub k: Option<usize>,
}

impl MetricKey {
    pub fn label(&self) -> String {
        match self.k {
            Some(k) => format!("{}@{k}", self.metric),
            None => self.metric.to_string(),
        }
    }
}

/// Metric keys present in an evaluation, in a fixed order.
pub fn metric_keys(eval: &AgentEvaluation) -> Vec<MetricKey> {
    let mut keys: Vec<MetricKey> = eval
        .scores
        .iter()
        .map(|s| MetricKey { metric: s.metric, k: s.k })
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

pub fn scores_for(eval: &AgentEvaluation, key: MetricKey) -> impl Iterator<Item = &RelationScore> {
    eval.scores.iter().filter(move |s| s.metric == key.metric && s.k == key.k)
}

fn score(eval: &AgentEvaluation, key: MetricKey, r: Relation) -> Option<&RelationScore> {
    scores_for(eval, key).find(|s| s.relation == r)
}

/// Mean over every per-target (or per-tuple) score pooled across relations.
pub fn micro(eval: &AgentEvaluation, key: MetricKey) -> Option<f64> {
    scores_for(eval, key).flat_map(|s| s.units.iter().map(|u| u.value)).collect::<Mean>().value()
}

/// Mean of the per-relation values.
pub fn macro_avg(eval: &AgentEvaluation, key: MetricKey) -> Option<f64> {
    scores_for(eval, key).filter_map(|s| s.value).collect::<Mean>().value()
}

/// Paired test on the probe-level outcomes both agents have: McNemar for
/// binary metrics, Wilcoxon otherwise.
pub fn paired_test(a: &RelationScore, b: &RelationScore, alpha: f64) -> Result<TestResult> {
    let ma = a.probe_map();
    let mb = b.probe_map();
    let shared: Vec<(f64, f64)> = ma.iter().filter_map(|(k, va)| mb.get(k).map(|vb| (*va, *vb))).collect();
    if a.metric.is_binary() {
        let xa: Vec<bool> = shared.iter().map(|p| p.0 == 1.0).collect();
        let xb: Vec<bool> = shared.iter().map(|p| p.1 == 1.0).collect();
        mcnemar(&xa, &xb, alpha)
    } else {
        let xa: Vec<f64> = shared.iter().map(|p| p.0).collect();
        let xb: Vec<f64> = shared.iter().map(|p| p.1).collect();
        wilcoxon_signed_rank(&xa, &xb, alpha)
    }
}

pub fn ensure_paired(a: &AgentEvaluation, b: &AgentEvaluation) -> Result<()> {
    if a.probe_set_hash != b.probe_set_hash {
        return Err(Error::ProbeSetMismatch {
            left: a.agent.name.clone(),
            right: b.agent.name.clone(),
        });
    }
    Ok(())
}

/// One line of a difference table: `b − a` for one metric and scope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRow {
    pub group: String,
    pub agent_a: String,
    pub agent_b: String,
    pub metric: String,
    /// A relation label, `micro`, `macro`, or `all` for AuDC.
    pub scope: String,
    pub delta: Option<f64>,
    pub p_value: Option<f64>,
    pub significant: Option<bool>,
}

fn delta(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(b? - a?)
}

/// Differences `b − a` per relation (with a paired test), micro, macro,
/// and AuDC (no test).
pub fn delta_rows(group: &str, a: &AgentEvaluation, b: &AgentEvaluation, alpha: f64) -> Result<Vec<DeltaRow>> {
    ensure_paired(a, b)?;
    let row = |metric: String, scope: String, d: Option<f64>, t: Option<&TestResult>| DeltaRow {
        group: group.to_string(),
        agent_a: a.agent.name.clone(),
        agent_b: b.agent.name.clone(),
        metric,
        scope,
        delta: d,
        p_value: t.map(|t| t.p_value),
        significant: t.map(|t| t.significant),
    };
    let mut rows = Vec::new();
    for key in metric_keys(a) {
        let mut rel_deltas = Mean::default();
        for r in Relation::ALL {
            let (Some(sa), Some(sb)) = (score(a, key, r), score(b, key, r)) else {
                continue;
            };
            let d = delta(sa.value, sb.value);
            let t = paired_test(sa, sb, alpha)?;
            if let Some(d) = d {
                rel_deltas.push(d);
            }
            rows.push(row(key.label(), r.label().to_string(), d, Some(&t)));
        }
        rows.push(row(key.label(), "micro".into(), delta(micro(a, key), micro(b, key)), None));
        rows.push(row(key.label(), "macro".into(), rel_deltas.value(), None));
    }
    rows.push(row("audc".into(), "all".into(), Some(b.audc.area - a.audc.area), None));
    Ok(rows)
}

/// Large-minus-small differences inside each model family, smallest and
/// largest member by parameter count.
pub fn size_difference_table(evals: &[AgentEvaluation], alpha: f64) -> Result<Vec<DeltaRow>> {
    let mut families: BTreeMap<&str, Vec<&AgentEvaluation>> = BTreeMap::new();
    for e in evals {
        if let (Some(f), Some(_)) = (&e.agent.family, e.agent.parameters) {
            families.entry(f.as_str()).or_default().push(e);
        }
    }
    let mut rows = Vec::new();
    for (family, mut members) in families {
        if members.len() < 2 {
            continue;
        }
        members.sort_by_key(|e| (e.agent.parameters, e.agent.name.clone()));
        rows.extend(delta_rows(family, members[0], members[members.len() - 1], alpha)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestPairRow {
    pub metric: String,
    pub relation: Relation,
    pub best_mlm: String,
    pub best_clm: String,
    /// best CLM minus best MLM
    pub delta: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Delta to two decimals, parenthesised when not significant.
    pub cell: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCountRow {
    pub metric: String,
    pub relation: Relation,
    pub pairs: usize,
    pub mlm_significantly_better: usize,
    pub clm_significantly_better: usize,
}

fn by_kind(evals: &[AgentEvaluation], kind: Pretraining) -> Vec<&AgentEvaluation> {
    evals.iter().filter(|e| e.agent.pretraining == Some(kind)).collect()
}

fn best<'a>(agents: &[&'a AgentEvaluation], key: MetricKey, r: Relation) -> Option<(&'a AgentEvaluation, &'a RelationScore)> {
    let mut out: Option<(&AgentEvaluation, &RelationScore)> = None;
    for e in agents {
        if let Some(s) = score(e, key, r).filter(|s| s.value.is_some()) {
            if out.is_none_or(|(_, b)| s.value > b.value) {
                out = Some((e, s));
            }
        }
    }
    out
}

/// Best CLM against best MLM per metric and relation, and counts of
/// significant wins over all MLM×CLM pairs.
pub fn pretraining_comparison(evals: &[AgentEvaluation], alpha: f64) -> Result<(Vec<BestPairRow>, Vec<PairCountRow>)> {
    let mlm = by_kind(evals, Pretraining::Mlm);
    let clm = by_kind(evals, Pretraining::Clm);
    if mlm.is_empty() {
        return Err(Error::MissingAgentKind("mlm".into()));
    }
    if clm.is_empty() {
        return Err(Error::MissingAgentKind("clm".into()));
    }
    for b in mlm.iter().chain(&clm).skip(1) {
        ensure_paired(mlm[0], b)?;
    }
    let mut best_rows = Vec::new();
    let mut counts = Vec::new();
    for key in metric_keys(mlm[0]) {
        for r in Relation::ALL {
            if let (Some((em, sm)), Some((ec, sc))) = (best(&mlm, key, r), best(&clm, key, r)) {
                let t = paired_test(sm, sc, alpha)?;
                let d = sc.value.unwrap_or(0.0) - sm.value.unwrap_or(0.0);
                let cell = if t.significant { format!("{d:+.2}") } else { format!("({d:+.2})") };
                best_rows.push(BestPairRow {
                    metric: key.label(),
                    relation: r,
                    best_mlm: em.agent.name.clone(),
                    best_clm: ec.agent.name.clone(),
                    delta: d,
                    p_value: t.p_value,
                    significant: t.significant,
                    cell,
                });
            }
            let mut row = PairCountRow {
                metric: key.label(),
                relation: r,
                pairs: 0,
                mlm_significantly_better: 0,
                clm_significantly_better: 0,
            };
            for m in &mlm {
                for c in &clm {
                    let (Some(sm), Some(sc)) = (score(m, key, r), score(c, key, r)) else {
                        continue;
                    };
                    let (Some(vm), Some(vc)) = (sm.value, sc.value) else {
                        continue;
                    };
                    row.pairs += 1;
                    if paired_test(sm, sc, alpha)?.significant {
                        if vm > vc {
                            row.mlm_significantly_better += 1;
                        } else if vc > vm {
                            row.clm_significantly_better += 1;
                        }
                    }
                }
            }
            if row.pairs > 0 {
                counts.push(row);
            }
        }
    }
    Ok((best_rows, counts))
}

/// One paired test for every agent pair, metric and relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub metric: String,
    pub relation: Relation,
    pub agent_a: String,
    pub agent_b: String,
    pub test: String,
    pub statistic: f64,
    pub p: f64,
    pub significant: bool,
}

pub fn significance_grid(evals: &[AgentEvaluation], alpha: f64) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    for (i, a) in evals.iter().enumerate() {
        for b in &evals[i + 1..] {
            ensure_paired(a, b)?;
            for key in metric_keys(a) {
                for r in Relation::ALL {
                    let (Some(sa), Some(sb)) = (score(a, key, r), score(b, key, r)) else {
                        continue;
                    };
                    let t = paired_test(sa, sb, alpha)?;
                    rows.push(GridRow {
                        metric: key.label(),
                        relation: r,
                        agent_a: a.agent.name.clone(),
                        agent_b: b.agent.name.clone(),
                        test: t.test.name().to_string(),
                        statistic: t.statistic,
                        p: t.p_value,
                        significant: t.significant,
                    });
                }
            }
        }
    }
    Ok(rows)
}
