use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::determiner::{select_determiner, Determiner, PronunciationLexicon};
use super::template::{PromptTemplate, Segment, TemplateSet};
use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader, sha256_hex};
use crate::lexicon::{Relation, TargetInventory};

/// Stable probe identifier; the same (relation, prompt, target) always maps
/// to the same id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbeId(pub String);

impl ProbeId {
    pub fn derive(relation: Relation, prompt_id: &str, target: &str) -> Self {
        let digest = sha256_hex(format!("{relation}\u{1f}{prompt_id}\u{1f}{target}").as_bytes());
        ProbeId(format!("{}-{}", relation.label().to_lowercase(), &digest[..16]))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProbeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ProbeId {
    fn from(s: &str) -> Self {
        ProbeId(s.to_string())
    }
}

/// A verbalized prompt with the target filled and `[V]` left open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub id: ProbeId,
    pub target: String,
    pub relation: Relation,
    pub prompt_id: String,
    /// Human-facing form, `[DET] [V]` kept when the article is open.
    pub text: String,
    /// With `a` before `[V]`, or the only surface when there is no article.
    pub surface_a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_an: Option<String>,
}

impl Probe {
    pub fn det_before_v(&self) -> bool {
        self.surface_an.is_some()
    }
}

fn render(template: &PromptTemplate, target: &str, target_det: Determiner, v_det: Option<&str>) -> String {
    let mut out = String::new();
    let segs = template.segments();
    for (i, seg) in segs.iter().enumerate() {
        match seg {
            Segment::Text(t) => out.push_str(t),
            Segment::Target => out.push_str(target),
            Segment::Relatum => out.push_str("[V]"),
            Segment::Det => {
                let before_target = segs[i + 1..]
                    .iter()
                    .find(|s| !matches!(s, Segment::Text(t) if t.trim().is_empty()))
                    == Some(&Segment::Target);
                if before_target {
                    out.push_str(target_det.as_str());
                } else {
                    out.push_str(v_det.unwrap_or("[DET]"));
                }
            }
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Fill `[W]`, resolve the article in front of it, and emit the a/an pair
/// when an article precedes `[V]`.
pub fn verbalize(target: &str, template: &PromptTemplate, lexicon: Option<&PronunciationLexicon>) -> Probe {
    let det = select_determiner(target, lexicon);
    let text = render(template, target, det, None);
    let (surface_a, surface_an) = if template.det_before_v() {
        (
            render(template, target, det, Some("a")),
            Some(render(template, target, det, Some("an"))),
        )
    } else {
        (text.clone(), None)
    };
    Probe {
        id: ProbeId::derive(template.relation(), template.id(), target),
        target: target.to_string(),
        relation: template.relation(),
        prompt_id: template.id().to_string(),
        text,
        surface_a,
        surface_an,
    }
}

/// Probe set with lookups by id and by (relation, target, prompt).
#[derive(Debug, Clone, Default)]
pub struct ProbeSet {
    probes: Vec<Probe>,
    by_id: HashMap<ProbeId, usize>,
    by_key: HashMap<(Relation, String, String), usize>,
}

impl ProbeSet {
    pub fn new(probes: Vec<Probe>) -> Result<Self> {
        let mut set = ProbeSet::default();
        for p in probes {
            if set.by_id.contains_key(&p.id) {
                return Err(Error::InvalidArgument(format!("duplicate probe id {}", p.id)));
            }
            let idx = set.probes.len();
            set.by_id.insert(p.id.clone(), idx);
            set.by_key.insert((p.relation, p.target.clone(), p.prompt_id.clone()), idx);
            set.probes.push(p);
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut probes = Vec::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            match serde_json::from_str::<Probe>(&line) {
                Ok(p) => probes.push(p),
                Err(e) => errors.push(LineError::new(line_no, e.to_string())),
            }
        }
        if !errors.is_empty() {
            return Err(Error::schema(source_name, errors));
        }
        Self::new(probes)
    }

    pub fn get(&self, id: &ProbeId) -> Option<&Probe> {
        self.by_id.get(id).map(|&i| &self.probes[i])
    }

    pub fn find(&self, relation: Relation, target: &str, prompt_id: &str) -> Option<&Probe> {
        self.by_key
            .get(&(relation, target.to_string(), prompt_id.to_string()))
            .map(|&i| &self.probes[i])
    }

    pub fn contains(&self, id: &ProbeId) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Probe> {
        self.probes.iter()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<Relation, usize> {
        let mut counts: BTreeMap<Relation, usize> = Relation::ALL.into_iter().map(|r| (r, 0)).collect();
        for p in &self.probes {
            *counts.entry(p.relation).or_default() += 1;
        }
        counts
    }
}

/// Outcome of probe generation with relations that had no template.
#[derive(Debug, Clone, Default)]
pub struct ProbeGeneration {
    pub probes: ProbeSet,
    pub relations_without_templates: Vec<Relation>,
}

/// The cartesian product of targets and prompts, per relation. Order:
/// relation, then target, then template file order.
pub fn generate_probe_set(
    inventory: &TargetInventory,
    templates: &TemplateSet,
    lexicon: Option<&PronunciationLexicon>,
) -> Result<ProbeGeneration> {
    let mut probes = Vec::new();
    let mut missing = Vec::new();
    for relation in Relation::ALL {
        let prompts: Vec<&PromptTemplate> = templates.for_relation(relation).collect();
        if prompts.is_empty() {
            if inventory.count(relation) > 0 {
                log::warn!("no templates for {relation}; its {} target(s) get no probes", inventory.count(relation));
            }
            missing.push(relation);
            continue;
        }
        for target in inventory.targets(relation) {
            for template in &prompts {
                probes.push(verbalize(target, template, lexicon));
            }
        }
    }
    Ok(ProbeGeneration {
        probes: ProbeSet::new(probes)?,
        relations_without_templates: missing,
    })
}
