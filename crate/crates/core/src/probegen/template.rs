//! Prompt templates with `[W]`, `[V]` and `[DET]` slot markers.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};
use crate::lexicon::Relation;

const DEFAULT_TEMPLATES: &str = include_str!("../../data/templates.jsonl");

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Segment {
    Text(String),
    Target,
    Det,
    Relatum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TemplateRow", into = "TemplateRow")]
pub struct PromptTemplate {
    id: String,
    relation: Relation,
    template: String,
    segments: Vec<Segment>,
    det_before_target: bool,
    det_before_v: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TemplateRow {
    id: String,
    r: Relation,
    template: String,
}

impl TryFrom<TemplateRow> for PromptTemplate {
    type Error = Error;

    fn try_from(row: TemplateRow) -> Result<Self> {
        PromptTemplate::new(row.id, row.r, row.template)
    }
}

impl From<PromptTemplate> for TemplateRow {
    fn from(t: PromptTemplate) -> Self {
        TemplateRow {
            id: t.id,
            r: t.relation,
            template: t.template,
        }
    }
}

fn marker_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\[(W|V|DET)\]").expect("static regex"))
}

impl PromptTemplate {
    pub fn new(id: impl Into<String>, relation: Relation, template: impl Into<String>) -> Result<Self> {
        let id = id.into();
        let template = template.into();
        let fail = |reason: &str| Error::Template {
            id: id.clone(),
            reason: reason.to_string(),
        };

        let mut segments = Vec::new();
        let mut last = 0;
        for m in marker_re().find_iter(&template) {
            if m.start() > last {
                segments.push(Segment::Text(template[last..m.start()].to_string()));
            }
            segments.push(match m.as_str() {
                "[W]" => Segment::Target,
                "[V]" => Segment::Relatum,
                _ => Segment::Det,
            });
            last = m.end();
        }
        if last < template.len() {
            segments.push(Segment::Text(template[last..].to_string()));
        }

        for seg in &segments {
            if let Segment::Text(t) = seg {
                if t.contains('[') || t.contains(']') {
                    return Err(fail("malformed slot marker"));
                }
            }
        }
        let count = |want: &Segment| segments.iter().filter(|s| *s == want).count();
        if count(&Segment::Target) != 1 {
            return Err(fail("[W] must occur exactly once"));
        }
        if count(&Segment::Relatum) != 1 {
            return Err(fail("[V] must occur exactly once"));
        }
        let w_pos = segments.iter().position(|s| *s == Segment::Target).unwrap_or(0);
        let v_pos = segments.iter().position(|s| *s == Segment::Relatum).unwrap_or(0);
        if w_pos > v_pos {
            return Err(fail("[W] must precede [V]"));
        }
        if segments[v_pos + 1..]
            .iter()
            .any(|s| !matches!(s, Segment::Text(t) if t.trim().is_empty()))
        {
            return Err(fail("[V] must be the final token"));
        }
        segments.truncate(v_pos + 1);

        // Every [DET] must sit directly in front of [W] or [V].
        let mut det_before_target = false;
        let mut det_before_v = false;
        for (i, seg) in segments.iter().enumerate() {
            if *seg != Segment::Det {
                continue;
            }
            let next = segments[i + 1..]
                .iter()
                .find(|s| !matches!(s, Segment::Text(t) if t.trim().is_empty()));
            match next {
                Some(Segment::Target) => det_before_target = true,
                Some(Segment::Relatum) => det_before_v = true,
                _ => return Err(fail("[DET] must immediately precede [W] or [V]")),
            }
        }

        Ok(Self {
            id,
            relation,
            template,
            segments,
            det_before_target,
            det_before_v,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn det_before_target(&self) -> bool {
        self.det_before_target
    }

    pub fn det_before_v(&self) -> bool {
        self.det_before_v
    }

    pub(crate) fn segments(&self) -> &[Segment] {
        &self.segments
    }
}

/// An ordered template inventory. Order within a relation is the order of
/// the source file and is used for tie-breaking best prompts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateSet {
    templates: Vec<PromptTemplate>,
}

impl TemplateSet {
    pub fn new(templates: Vec<PromptTemplate>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for t in &templates {
            if !seen.insert(t.id.clone()) {
                return Err(Error::Template {
                    id: t.id.clone(),
                    reason: "duplicate template id".into(),
                });
            }
        }
        Ok(Self { templates })
    }

    /// The shipped 40-prompt inventory.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TEMPLATES.as_bytes(), "builtin templates").expect("builtin templates are valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut templates = Vec::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            match serde_json::from_str::<PromptTemplate>(&line) {
                Ok(t) => templates.push(t),
                Err(e) => errors.push(LineError::new(line_no, e.to_string())),
            }
        }
        if !errors.is_empty() {
            return Err(Error::schema(source_name, errors));
        }
        Self::new(templates)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PromptTemplate> {
        self.templates.iter()
    }

    pub fn for_relation(&self, relation: Relation) -> impl Iterator<Item = &PromptTemplate> {
        self.templates.iter().filter(move |t| t.relation == relation)
    }

    pub fn prompt_ids(&self, relation: Relation) -> Vec<&str> {
        self.for_relation(relation).map(|t| t.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&PromptTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }

    pub fn counts(&self) -> BTreeMap<Relation, usize> {
        Relation::ALL
            .into_iter()
            .map(|r| (r, self.for_relation(r).count()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}
