//! Tuple-source readers.
//!
//! Three layouts are understood:
//!
//! * `hyperlex-tsv`: whitespace separated with a `WORD1 WORD2 POS TYPE ...`
//!   header. `hyp-N` maps to HYP, `r-hyp-N` to HPO, `mero` to MER (WORD1 is
//!   the whole), `r-mero` to HOL, `syn` and `ant` to SYN and ANT. Other types
//!   (`cohyp`, `no-rel`) are dropped.
//! * `category-norm-csv`: CSV with `category` and `exemplar` columns; each
//!   row yields `(category, HPO, exemplar)`.
//! * `native-jsonl`: one `{"w":..,"r":..,"v":..}` object per line.
//!
//! All three accept an optional part-of-speech column (`POS`, `pos`); rows
//! tagged with anything other than a noun are dropped, rows without a tag are
//! kept and counted.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Relation, Tuple};
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TupleFormat {
    #[serde(rename = "hyperlex-tsv")]
    HyperlexTsv,
    #[serde(rename = "category-norm-csv")]
    CategoryNormCsv,
    #[serde(rename = "native-jsonl")]
    NativeJsonl,
}

impl FromStr for TupleFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperlex-tsv" => Ok(TupleFormat::HyperlexTsv),
            "category-norm-csv" => Ok(TupleFormat::CategoryNormCsv),
            "native-jsonl" => Ok(TupleFormat::NativeJsonl),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for TupleFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TupleFormat::HyperlexTsv => "hyperlex-tsv",
            TupleFormat::CategoryNormCsv => "category-norm-csv",
            TupleFormat::NativeJsonl => "native-jsonl",
        })
    }
}

/// Result of reading one tuple source, with counters for everything dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TupleIngest {
    pub tuples: BTreeSet<Tuple>,
    pub rows: usize,
    pub duplicates: usize,
    pub non_noun: usize,
    pub malformed: usize,
    pub unmapped_relation: usize,
    pub missing_pos: usize,
}

impl TupleIngest {
    fn accept(&mut self, tuple: Tuple) {
        if !self.tuples.insert(tuple) {
            self.duplicates += 1;
        }
    }

    fn warn(&self, source_name: &str) {
        if self.malformed > 0 {
            log::warn!("{source_name}: dropped {} malformed row(s)", self.malformed);
        }
        if self.non_noun > 0 {
            log::warn!("{source_name}: dropped {} non-noun row(s)", self.non_noun);
        }
        if self.missing_pos > 0 {
            log::warn!("{source_name}: {} row(s) carry no part-of-speech tag", self.missing_pos);
        }
    }
}

pub fn ingest_tuples(path: &Path, format: TupleFormat) -> Result<TupleIngest> {
    let reader = open_reader(path)?;
    parse_tuples(reader, format, &path.display().to_string())
}

pub fn parse_tuples<R: BufRead>(reader: R, format: TupleFormat, source_name: &str) -> Result<TupleIngest> {
    let ingest = match format {
        TupleFormat::HyperlexTsv => parse_hyperlex(reader, source_name)?,
        TupleFormat::CategoryNormCsv => parse_category_norms(reader)?,
        TupleFormat::NativeJsonl => parse_native(reader, source_name)?,
    };
    ingest.warn(source_name);
    if ingest.tuples.is_empty() {
        return Err(Error::NoTuples {
            source_name: source_name.to_string(),
        });
    }
    Ok(ingest)
}

enum PosTag {
    Noun,
    Other,
    Missing,
}

fn classify_pos(tag: Option<&str>) -> PosTag {
    match tag.map(str::trim) {
        None | Some("") => PosTag::Missing,
        Some(t) if matches!(t.to_ascii_lowercase().as_str(), "n" | "noun" | "nn" | "nns") => PosTag::Noun,
        Some(_) => PosTag::Other,
    }
}

/// Apply the noun filter; returns false when the row is to be dropped.
fn pos_gate(ingest: &mut TupleIngest, tag: Option<&str>) -> bool {
    match classify_pos(tag) {
        PosTag::Noun => true,
        PosTag::Missing => {
            ingest.missing_pos += 1;
            true
        }
        PosTag::Other => {
            ingest.non_noun += 1;
            false
        }
    }
}

fn hyperlex_relation(tag: &str) -> Option<Relation> {
    let tag = tag.trim().to_ascii_lowercase();
    if tag.starts_with("r-hyp") {
        Some(Relation::Hyponymy)
    } else if tag.starts_with("hyp") {
        Some(Relation::Hypernymy)
    } else if tag == "r-mero" {
        Some(Relation::Holonymy)
    } else if tag == "mero" {
        Some(Relation::Meronymy)
    } else if tag == "syn" {
        Some(Relation::Synonymy)
    } else if tag == "ant" {
        Some(Relation::Antonymy)
    } else {
        None
    }
}

fn parse_hyperlex<R: BufRead>(reader: R, source_name: &str) -> Result<TupleIngest> {
    let mut ingest = TupleIngest::default();
    // Positional defaults match the distributed header.
    let (mut w1, mut w2, mut pos, mut ty) = (0usize, 1usize, Some(2usize), 3usize);
    let mut first = true;
    for (line_no, line) in numbered_lines(reader) {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if first {
            first = false;
            let upper: Vec<String> = cols.iter().map(|c| c.to_ascii_uppercase()).collect();
            if upper.iter().any(|c| c == "WORD1") {
                let find = |name: &str| upper.iter().position(|c| c == name);
                w1 = find("WORD1").unwrap_or(0);
                w2 = find("WORD2").unwrap_or(1);
                pos = find("POS");
                ty = find("TYPE").unwrap_or(3);
                continue;
            }
        }
        ingest.rows += 1;
        let needed = w1.max(w2).max(ty);
        if cols.len() <= needed {
            log::debug!("{source_name}:{line_no}: too few columns");
            ingest.malformed += 1;
            continue;
        }
        if !pos_gate(&mut ingest, pos.and_then(|p| cols.get(p).copied())) {
            continue;
        }
        let Some(relation) = hyperlex_relation(cols[ty]) else {
            ingest.unmapped_relation += 1;
            continue;
        };
        match Tuple::new(cols[w1], relation, cols[w2]) {
            Ok(t) => ingest.accept(t),
            Err(_) => ingest.malformed += 1,
        }
    }
    Ok(ingest)
}

fn parse_category_norms<R: BufRead>(reader: R) -> Result<TupleIngest> {
    let mut ingest = TupleIngest::default();
    let mut csv = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = csv.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (Some(category), Some(exemplar)) = (find("category"), find("exemplar")) else {
        return Err(Error::schema(
            "category norms",
            vec![LineError::new(1, "header must name `category` and `exemplar` columns")],
        ));
    };
    let pos = find("pos");
    for record in csv.records() {
        ingest.rows += 1;
        let Ok(record) = record else {
            ingest.malformed += 1;
            continue;
        };
        if !pos_gate(&mut ingest, pos.and_then(|p| record.get(p))) {
            continue;
        }
        match (record.get(category), record.get(exemplar)) {
            (Some(c), Some(e)) => match Tuple::new(c, Relation::Hyponymy, e) {
                Ok(t) => ingest.accept(t),
                Err(_) => ingest.malformed += 1,
            },
            _ => ingest.malformed += 1,
        }
    }
    Ok(ingest)
}

#[derive(Deserialize)]
struct NativeRow {
    w: String,
    r: String,
    v: String,
    #[serde(default)]
    pos: Option<String>,
}

fn parse_native<R: BufRead>(reader: R, source_name: &str) -> Result<TupleIngest> {
    let mut ingest = TupleIngest::default();
    for (line_no, line) in numbered_lines(reader) {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        ingest.rows += 1;
        let row: NativeRow = match serde_json::from_str(&line) {
            Ok(row) => row,
            Err(e) => {
                log::debug!("{source_name}:{line_no}: {e}");
                ingest.malformed += 1;
                continue;
            }
        };
        if !pos_gate(&mut ingest, row.pos.as_deref()) {
            continue;
        }
        let Ok(relation) = row.r.parse::<Relation>() else {
            ingest.unmapped_relation += 1;
            continue;
        };
        match Tuple::new(&row.w, relation, &row.v) {
            Ok(t) => ingest.accept(t),
            Err(_) => ingest.malformed += 1,
        }
    }
    Ok(ingest)
}
