//! Indefinite-article selection.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, LineError, Result};
use crate::io::{numbered_lines, open_reader};

const EXCEPTIONS: &str = include_str!("../../data/determiner_exceptions.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Onset {
    Vowel,
    Consonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Determiner {
    A,
    An,
}

impl Determiner {
    pub fn as_str(self) -> &'static str {
        match self {
            Determiner::A => "a",
            Determiner::An => "an",
        }
    }

    fn for_onset(onset: Onset) -> Self {
        match onset {
            Onset::Vowel => Determiner::An,
            Onset::Consonant => Determiner::A,
        }
    }
}

impl fmt::Display for Determiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Word → onset class.
///
/// Lines are either `word vowel|consonant` or CMUdict-style
/// `WORD  PH1 PH2 ...`, in which case the first ARPAbet phone decides.
#[derive(Debug, Clone, Default)]
pub struct PronunciationLexicon {
    onsets: HashMap<String, Onset>,
}

const ARPABET_VOWELS: [&str; 15] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW",
];

impl PronunciationLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(open_reader(path)?, &path.display().to_string())
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut onsets = HashMap::new();
        let mut errors = Vec::new();
        for (line_no, line) in numbered_lines(reader) {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            if line.starts_with(";;;") || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(word), Some(first)) = (cols.next(), cols.next()) else {
                errors.push(LineError::new(line_no, "expected `word onset` or `WORD PHONES...`"));
                continue;
            };
            // CMUdict marks alternates as WORD(2); keep the first reading.
            let word = word.split('(').next().unwrap_or(word).to_lowercase();
            let onset = match first.to_ascii_lowercase().as_str() {
                "vowel" | "v" | "an" => Onset::Vowel,
                "consonant" | "c" | "a" => Onset::Consonant,
                _ => {
                    let phone = first.trim_end_matches(|c: char| c.is_ascii_digit()).to_ascii_uppercase();
                    if ARPABET_VOWELS.contains(&phone.as_str()) {
                        Onset::Vowel
                    } else {
                        Onset::Consonant
                    }
                }
            };
            onsets.entry(word).or_insert(onset);
        }
        if errors.is_empty() {
            Ok(Self { onsets })
        } else {
            Err(Error::schema(source_name, errors))
        }
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Onset)>) -> Self {
        Self {
            onsets: pairs.into_iter().map(|(w, o)| (w.to_lowercase(), o)).collect(),
        }
    }

    pub fn onset(&self, word: &str) -> Option<Onset> {
        self.onsets.get(&word.to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.onsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.onsets.is_empty()
    }
}

struct Exception {
    stem: String,
    prefix: bool,
    onset: Onset,
}

fn exceptions() -> &'static [Exception] {
    static LIST: OnceLock<Vec<Exception>> = OnceLock::new();
    LIST.get_or_init(|| {
        EXCEPTIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .filter_map(|l| {
                let (det, pattern) = l.split_once(' ')?;
                let onset = if det == "an" { Onset::Vowel } else { Onset::Consonant };
                let (stem, prefix) = match pattern.strip_suffix('*') {
                    Some(stem) => (stem, true),
                    None => (pattern, false),
                };
                Some(Exception {
                    stem: stem.to_string(),
                    prefix,
                    onset,
                })
            })
            .collect()
    })
}

/// Orthographic guess: vowel letters are vowel onsets, except for the
/// shipped exception list.
pub fn heuristic_onset(word: &str) -> Onset {
    let word = word.to_lowercase();
    for ex in exceptions() {
        let hit = if ex.prefix {
            word.starts_with(&ex.stem)
        } else {
            word == ex.stem
        };
        if hit {
            return ex.onset;
        }
    }
    match word.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => Onset::Vowel,
        _ => Onset::Consonant,
    }
}

pub fn select_determiner(word: &str, lexicon: Option<&PronunciationLexicon>) -> Determiner {
    let onset = lexicon
        .and_then(|lex| lex.onset(word))
        .unwrap_or_else(|| heuristic_onset(word));
    Determiner::for_onset(onset)
}
