//! Sense-level lexical graph.
//!
//! Input is line-oriented JSON, one sense per line:
//! `{"sense":"ending/1","edges":[["SYN","termination/4"],["HYP","end/2"]]}`.
//! Edge targets that never appear as a `sense` record are created on the fly,
//! and every edge is stored together with its reverse so that HYP/HPO and
//! HOL/MER stay paired and ANT/SYN stay symmetric.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use super::tuple::normalize_word;
use super::Relation;
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SenseId {
    pub word: String,
    pub index: u32,
}

impl fmt::Display for SenseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.word, self.index)
    }
}

impl FromStr for SenseId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (word, idx) = s.rsplit_once('/').ok_or_else(|| format!("sense `{s}` lacks a /index suffix"))?;
        let word = normalize_word(word).ok_or_else(|| format!("sense `{s}` has an invalid word form"))?;
        let index = idx.parse().map_err(|_| format!("sense `{s}` has a non-numeric index"))?;
        Ok(SenseId { word, index })
    }
}

type SenseIdx = usize;

#[derive(Debug, Clone, Default)]
pub struct LexiconGraph {
    senses: Vec<SenseId>,
    lookup: HashMap<SenseId, SenseIdx>,
    by_word: BTreeMap<String, Vec<SenseIdx>>,
    edges: Vec<BTreeSet<(Relation, SenseIdx)>>,
}

#[derive(Deserialize)]
struct SenseRecord {
    sense: String,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

impl LexiconGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut graph = Self::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            let record: SenseRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    errors.push(LineError::new(line_no, e.to_string()));
                    continue;
                }
            };
            let from = match record.sense.parse::<SenseId>() {
                Ok(s) => s,
                Err(e) => {
                    errors.push(LineError::new(line_no, e));
                    continue;
                }
            };
            let from_idx = graph.add_sense(from);
            for (label, target) in record.edges {
                let parsed = label
                    .parse::<Relation>()
                    .map_err(|e| e.to_string())
                    .and_then(|r| target.parse::<SenseId>().map(|t| (r, t)));
                match parsed {
                    Ok((relation, to)) => {
                        let to_idx = graph.add_sense(to);
                        graph.link(from_idx, relation, to_idx);
                    }
                    Err(e) => errors.push(LineError::new(line_no, e)),
                }
            }
        }
        if errors.is_empty() {
            Ok(graph)
        } else {
            Err(Error::schema(source_name, errors))
        }
    }

    pub fn add_sense(&mut self, sense: SenseId) -> SenseIdx {
        if let Some(&idx) = self.lookup.get(&sense) {
            return idx;
        }
        let idx = self.senses.len();
        self.by_word.entry(sense.word.clone()).or_default().push(idx);
        self.lookup.insert(sense.clone(), idx);
        self.senses.push(sense);
        self.edges.push(BTreeSet::new());
        idx
    }

    /// Add `from -r-> to` together with `to -reverse(r)-> from`.
    pub fn add_edge(&mut self, from: SenseId, relation: Relation, to: SenseId) {
        let a = self.add_sense(from);
        let b = self.add_sense(to);
        self.link(a, relation, b);
    }

    fn link(&mut self, a: SenseIdx, relation: Relation, b: SenseIdx) {
        if a == b {
            return;
        }
        self.edges[a].insert((relation, b));
        self.edges[b].insert((relation.reverse(), a));
    }

    pub fn sense(&self, idx: SenseIdx) -> &SenseId {
        &self.senses[idx]
    }

    pub fn senses_of(&self, word: &str) -> &[SenseIdx] {
        self.by_word.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.by_word.contains_key(word)
    }

    pub fn neighbors(&self, idx: SenseIdx, relation: Relation) -> impl Iterator<Item = SenseIdx> + '_ {
        self.edges[idx]
            .range((relation, 0)..=(relation, usize::MAX))
            .map(|&(_, to)| to)
    }

    pub fn sense_count(&self) -> usize {
        self.senses.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }

    /// Check that every edge has its reverse partner.
    pub fn is_consistent(&self) -> bool {
        self.edges.iter().enumerate().all(|(a, set)| {
            set.iter()
                .all(|&(r, b)| b < self.senses.len() && self.edges[b].contains(&(r.reverse(), a)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sid(s: &str) -> SenseId {
        s.parse().unwrap()
    }

    #[test]
    fn reverse_edges_are_materialized() {
        let src = r#"{"sense":"robin/1","edges":[["HYP","bird/1"]]}
{"sense":"building/1","edges":[["MER","wall/1"]]}
{"sense":"hot/1","edges":[["ANT","cold/1"]]}"#;
        let g = LexiconGraph::parse(src.as_bytes(), "g").unwrap();
        assert!(g.is_consistent());
        let bird = g.senses_of("bird")[0];
        let hpo: Vec<_> = g.neighbors(bird, Relation::Hyponymy).map(|i| g.sense(i).to_string()).collect();
        assert_eq!(hpo, vec!["robin/1"]);
        let wall = g.senses_of("wall")[0];
        assert_eq!(g.neighbors(wall, Relation::Holonymy).count(), 1);
        let cold = g.senses_of("cold")[0];
        assert_eq!(g.neighbors(cold, Relation::Antonymy).count(), 1);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn malformed_lines_are_reported_with_numbers() {
        let src = "{\"sense\":\"a/1\",\"edges\":[[\"HYP\",\"b\"]]}\n\n{oops\n";
        match LexiconGraph::parse(src.as_bytes(), "g") {
            Err(Error::Schema { errors, .. }) => {
                assert_eq!(errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![1, 3]);
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn sense_ids_parse() {
        assert_eq!(sid("Ending/3"), SenseId { word: "ending".into(), index: 3 });
        assert!("ending".parse::<SenseId>().is_err());
    }
}
