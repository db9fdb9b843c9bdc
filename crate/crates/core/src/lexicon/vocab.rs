use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;

use super::tuple::normalize_word;
use super::Tuple;
use crate::error::{Error, Result};
use crate::io::{numbered_lines, open_reader};

/// A lowercase, deduplicated word list; usually the intersection of the
/// single-token vocabularies of every agent under test.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Vocabulary {
    words: BTreeSet<String>,
    provenance: String,
}

impl Vocabulary {
    pub fn from_words<I, S>(words: I, provenance: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().filter_map(|w| normalize_word(w.as_ref())).collect(),
            provenance: provenance.into(),
        }
    }

    pub fn parse<R: BufRead>(reader: R, provenance: &str) -> Result<Self> {
        let mut words = BTreeSet::new();
        for (_, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(provenance, e))?;
            if let Some(w) = normalize_word(&line) {
                words.insert(w);
            }
        }
        Ok(Self {
            words,
            provenance: provenance.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(open_reader(path)?, &name)
    }

    /// Load several vocabulary files and keep only the shared words.
    pub fn load_intersection(paths: &[impl AsRef<Path>]) -> Result<Self> {
        let mut iter = paths.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Config("at least one vocabulary file is required".into()))?;
        let mut vocab = Self::load(first.as_ref())?;
        for p in iter {
            vocab = vocab.intersect(&Self::load(p.as_ref())?);
        }
        Ok(vocab)
    }

    pub fn intersect(&self, other: &Vocabulary) -> Vocabulary {
        Vocabulary {
            words: self.words.intersection(&other.words).cloned().collect(),
            provenance: format!("{} ∩ {}", self.provenance, other.provenance),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Keep tuples whose target and relatum are both in the vocabulary.
    pub fn retain_tuples(&self, tuples: &BTreeSet<Tuple>) -> BTreeSet<Tuple> {
        tuples
            .iter()
            .filter(|t| self.contains(&t.target) && self.contains(&t.relatum))
            .cloned()
            .collect()
    }
}
