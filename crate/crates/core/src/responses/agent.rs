use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentKind {
    HumanPool,
    Model,
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgentKind::HumanPool => "human-pool",
            AgentKind::Model => "model",
        })
    }
}

/// Pretraining objective; drives the masked-vs-causal comparison tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pretraining {
    Mlm,
    Clm,
}

impl fmt::Display for Pretraining {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pretraining::Mlm => "MLM",
            Pretraining::Clm => "CLM",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentId {
    pub name: String,
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pretraining: Option<Pretraining>,
    /// Parameter count, used to order size comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<u64>,
}

impl AgentId {
    pub fn human(name: impl Into<String>) -> Self {
        AgentId {
            name: name.into(),
            kind: AgentKind::HumanPool,
            family: None,
            pretraining: None,
            parameters: None,
        }
    }

    pub fn model(name: impl Into<String>, pretraining: Pretraining) -> Self {
        AgentId {
            name: name.into(),
            kind: AgentKind::Model,
            family: None,
            pretraining: Some(pretraining),
            parameters: None,
        }
    }

    pub fn is_human(&self) -> bool {
        self.kind == AgentKind::HumanPool
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
