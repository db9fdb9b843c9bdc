use serde::Serialize;

use super::compare::MetricKey;
use crate::error::Result;
use crate::lexicon::Relation;
use crate::metrics::{Mean, RelationScore};
use crate::probegen::TemplateSet;
use crate::stats::{levene, TestResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptValue {
    pub prompt_id: String,
    pub value: Option<f64>,
    pub units: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptBreakdown {
    pub agent: String,
    pub metric: String,
    pub relation: Relation,
    pub prompts: Vec<PromptValue>,
    /// First prompt in template order with the highest value.
    pub best_prompt: Option<String>,
    /// Equal-variance check across prompts; `None` with fewer than two
    /// prompts holding two or more values.
    pub levene: Option<TestResult>,
}

/// Score the relation as if each prompt were the only one: per prompt, the
/// mean over targets of that prompt's per-probe values.
pub fn per_prompt_breakdown(score: &RelationScore, key: MetricKey, templates: &TemplateSet, alpha: f64) -> Result<PromptBreakdown> {
    let mut prompts = Vec::new();
    let mut groups = Vec::new();
    for id in templates.prompt_ids(score.relation) {
        let values: Vec<f64> = score.probes.iter().filter(|p| p.prompt_id == id).map(|p| p.value).collect();
        prompts.push(PromptValue {
            prompt_id: id.to_string(),
            value: values.iter().copied().collect::<Mean>().value(),
            units: values.len(),
        });
        if values.len() >= 2 {
            groups.push(values);
        }
    }
    let mut best: Option<&PromptValue> = None;
    for p in &prompts {
        if p.value.is_some() && best.is_none_or(|b| p.value > b.value) {
            best = Some(p);
        }
    }
    let best_prompt = best.map(|b| b.prompt_id.clone());
    let levene = if groups.len() >= 2 { Some(levene(&groups, alpha)?) } else { None };
    Ok(PromptBreakdown {
        agent: score.agent.clone(),
        metric: key.label(),
        relation: score.relation,
        prompts,
        best_prompt,
        levene,
    })
}
