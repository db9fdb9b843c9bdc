//! Declarative run configuration (TOML).
//!
//! Relative paths are resolved against the directory holding the config
//! file. See the README for the full grammar.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_string;
use crate::lexicon::TupleFormat;
use crate::responses::{AgentId, AgentKind, Pretraining};
use crate::stats::DEFAULT_ALPHA;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleSource {
    pub path: PathBuf,
    pub format: TupleFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub tuples: Vec<TupleSource>,
    /// Vocabulary files; their intersection is the shared vocabulary.
    pub vocab: Vec<PathBuf>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    /// Defaults to the built-in prompt inventory.
    #[serde(default)]
    pub templates: Option<PathBuf>,
    /// Word onset lexicon (CMU dictionary or `word vowel|consonant` lines).
    #[serde(default)]
    pub pronunciation: Option<PathBuf>,
    #[serde(default)]
    pub bogus_key: Option<PathBuf>,
    /// Unigram counts, `word<whitespace>count` per line.
    #[serde(default)]
    pub frequency: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentConfig {
    pub name: String,
    pub kind: AgentKind,
    pub responses: PathBuf,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub pretraining: Option<Pretraining>,
    #[serde(default)]
    pub parameters: Option<u64>,
}

impl AgentConfig {
    pub fn id(&self) -> AgentId {
        AgentId {
            name: self.name.clone(),
            kind: self.kind,
            family: self.family.clone(),
            pretraining: self.pretraining,
            parameters: self.parameters,
        }
    }
}

fn default_ks() -> Vec<usize> {
    vec![1, 5, 10]
}

fn default_oor_k() -> usize {
    10
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Weight of the `a` variant when merging a/an responses. Derive it as
    /// count("a") / (count("a") + count("an")) from a reference corpus.
    pub determiner_alpha: f64,
    #[serde(default = "default_ks")]
    pub symmetry_k: Vec<usize>,
    #[serde(default = "default_alpha")]
    pub significance: f64,
    /// List cutoff for model OOR counts; human answers are counted whole.
    #[serde(default = "default_oor_k")]
    pub oor_k: usize,
    /// Worker threads for metric kernels; 0 means all cores.
    #[serde(default)]
    pub threads: usize,
    /// Human pool used as prototypicality gold; defaults to the first one.
    #[serde(default)]
    pub gold: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output: PathBuf,
    pub inputs: Inputs,
    pub params: Params,
    #[serde(default)]
    pub agents: Vec<AgentConfig>,
}

impl RunConfig {
    pub fn parse(src: &str, base: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve(base);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = read_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&src, base)
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output);
        let i = &mut self.inputs;
        i.tuples.iter_mut().for_each(|t| fix(&mut t.path));
        i.vocab.iter_mut().for_each(fix);
        for p in [&mut i.graph, &mut i.templates, &mut i.pronunciation, &mut i.bogus_key, &mut i.frequency]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
        self.agents.iter_mut().for_each(|a| fix(&mut a.responses));
    }

    fn check(&self) -> Result<()> {
        let p = &self.params;
        if !(0.0..=1.0).contains(&p.determiner_alpha) {
            return Err(Error::Config(format!("determiner_alpha {} outside [0, 1]", p.determiner_alpha)));
        }
        if p.symmetry_k.is_empty() || p.symmetry_k.contains(&0) {
            return Err(Error::Config("symmetry_k must list positive cutoffs".into()));
        }
        if p.oor_k == 0 {
            return Err(Error::Config("oor_k must be positive".into()));
        }
        if !(p.significance > 0.0 && p.significance < 1.0) {
            return Err(Error::Config(format!("significance {} outside (0, 1)", p.significance)));
        }
        if self.inputs.tuples.is_empty() {
            return Err(Error::Config("no tuple sources".into()));
        }
        if self.inputs.vocab.is_empty() {
            return Err(Error::Config("no vocabulary files".into()));
        }
        let mut names = std::collections::BTreeSet::new();
        for a in &self.agents {
            if !names.insert(a.name.as_str()) {
                return Err(Error::Config(format!("agent `{}` listed twice", a.name)));
            }
            if a.kind == AgentKind::Model && a.pretraining.is_none() {
                return Err(Error::Config(format!("model `{}` needs a pretraining objective (mlm or clm)", a.name)));
            }
        }
        if let Some(g) = &p.gold {
            if !self.agents.iter().any(|a| &a.name == g && a.kind == AgentKind::HumanPool) {
                return Err(Error::Config(format!("gold `{g}` is not a human-pool agent")));
            }
        }
        Ok(())
    }

    /// Files the dataset build reads.
    pub fn dataset_inputs(&self) -> Vec<&Path> {
        let i = &self.inputs;
        let mut out: Vec<&Path> = i.tuples.iter().map(|t| t.path.as_path()).collect();
        out.extend(i.vocab.iter().map(PathBuf::as_path));
        out.extend(
            [&i.graph, &i.templates, &i.pronunciation, &i.bogus_key, &i.frequency]
                .into_iter()
                .flatten()
                .map(PathBuf::as_path),
        );
        out
    }

    /// Every input file the config names, response files included.
    pub fn input_files(&self) -> Vec<&Path> {
        let mut out = self.dataset_inputs();
        out.extend(self.agents.iter().map(|a| a.responses.as_path()));
        out
    }

    /// First missing input, if any. Response files are only checked when
    /// `responses` is set, since they are produced after the build.
    pub fn missing_input(&self, responses: bool) -> Option<PathBuf> {
        let files = if responses { self.input_files() } else { self.dataset_inputs() };
        files.into_iter().find(|p| !p.exists()).map(Path::to_path_buf)
    }

    pub fn gold_agent(&self) -> Option<&AgentConfig> {
        match &self.params.gold {
            Some(g) => self.agents.iter().find(|a| &a.name == g),
            None => self.agents.iter().find(|a| a.kind == AgentKind::HumanPool),
        }
    }

    pub fn dataset_dir(&self) -> PathBuf {
        self.output.join("dataset")
    }

    pub fn results_dir(&self) -> PathBuf {
        self.output.join("results")
    }
}
