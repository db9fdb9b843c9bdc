use std::fmt;

use serde::{Deserialize, Serialize};

use super::Relation;

/// Lowercase a word form and reject anything that is not a single
/// orthographic word.
pub fn normalize_word(raw: &str) -> Option<String> {
    let word = raw.trim();
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return None;
    }
    Some(word.to_lowercase())
}

/// A (target, relation, relatum) triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tuple {
    #[serde(rename = "w")]
    pub target: String,
    #[serde(rename = "r")]
    pub relation: Relation,
    #[serde(rename = "v")]
    pub relatum: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleError {
    BadWord(String),
    SelfRelation(String),
}

impl fmt::Display for TupleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleError::BadWord(w) => write!(f, "`{w}` is not a single non-empty word"),
            TupleError::SelfRelation(w) => write!(f, "target and relatum are both `{w}`"),
        }
    }
}

impl Tuple {
    pub fn new(target: &str, relation: Relation, relatum: &str) -> Result<Self, TupleError> {
        let target = normalize_word(target).ok_or_else(|| TupleError::BadWord(target.to_string()))?;
        let relatum = normalize_word(relatum).ok_or_else(|| TupleError::BadWord(relatum.to_string()))?;
        if target == relatum {
            return Err(TupleError::SelfRelation(target));
        }
        Ok(Self {
            target,
            relation,
            relatum,
        })
    }

    /// The image of this tuple under symmetric augmentation: `(v, r, w)` for
    /// symmetric relations, `(v, reverse(r), w)` otherwise.
    pub fn mirrored(&self) -> Tuple {
        Tuple {
            target: self.relatum.clone(),
            relation: self.relation.reverse(),
            relatum: self.target.clone(),
        }
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.target, self.relation, self.relatum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_case_and_rejects_phrases() {
        assert_eq!(normalize_word(" Robin "), Some("robin".into()));
        assert_eq!(normalize_word("ice cream"), None);
        assert_eq!(normalize_word(""), None);
    }

    #[test]
    fn rejects_self_relation() {
        assert_eq!(
            Tuple::new("Hot", Relation::Antonymy, "hot"),
            Err(TupleError::SelfRelation("hot".into()))
        );
    }

    #[test]
    fn mirror_uses_reverse_relation() {
        let t = Tuple::new("building", Relation::Meronymy, "wall").unwrap();
        assert_eq!(t.mirrored(), Tuple::new("wall", Relation::Holonymy, "building").unwrap());
        assert_eq!(t.mirrored().mirrored(), t);
    }
}
