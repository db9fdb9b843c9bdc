use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The six lexical semantic relations probed by the toolkit.
///
/// Ordering follows the canonical report order HYP, HPO, HOL, MER, ANT, SYN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "HYP")]
    Hypernymy,
    #[serde(rename = "HPO")]
    Hyponymy,
    #[serde(rename = "HOL")]
    Holonymy,
    #[serde(rename = "MER")]
    Meronymy,
    #[serde(rename = "ANT")]
    Antonymy,
    #[serde(rename = "SYN")]
    Synonymy,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Hypernymy,
        Relation::Hyponymy,
        Relation::Holonymy,
        Relation::Meronymy,
        Relation::Antonymy,
        Relation::Synonymy,
    ];

    /// Relations whose reverse is themselves.
    pub const SYMMETRIC: [Relation; 2] = [Relation::Antonymy, Relation::Synonymy];

    /// Relations with a human prototypicality gold standard.
    pub const PROTOTYPICAL: [Relation; 4] = [
        Relation::Hypernymy,
        Relation::Holonymy,
        Relation::Antonymy,
        Relation::Synonymy,
    ];

    pub fn reverse(self) -> Relation {
        match self {
            Relation::Hypernymy => Relation::Hyponymy,
            Relation::Hyponymy => Relation::Hypernymy,
            Relation::Holonymy => Relation::Meronymy,
            Relation::Meronymy => Relation::Holonymy,
            Relation::Antonymy => Relation::Antonymy,
            Relation::Synonymy => Relation::Synonymy,
        }
    }

    pub fn is_symmetric(self) -> bool {
        self.reverse() == self
    }

    /// Whether indirect relata at path length two are admitted during expansion.
    pub fn is_hierarchical(self) -> bool {
        matches!(self, Relation::Hypernymy | Relation::Hyponymy)
    }

    pub fn label(self) -> &'static str {
        match self {
            Relation::Hypernymy => "HYP",
            Relation::Hyponymy => "HPO",
            Relation::Holonymy => "HOL",
            Relation::Meronymy => "MER",
            Relation::Antonymy => "ANT",
            Relation::Synonymy => "SYN",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HYP" => Ok(Relation::Hypernymy),
            "HPO" => Ok(Relation::Hyponymy),
            "HOL" => Ok(Relation::Holonymy),
            "MER" => Ok(Relation::Meronymy),
            "ANT" => Ok(Relation::Antonymy),
            "SYN" => Ok(Relation::Synonymy),
            other => Err(Error::InvalidArgument(format!("unknown relation label `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_is_an_involution() {
        for r in Relation::ALL {
            assert_eq!(r.reverse().reverse(), r);
            assert_eq!(r.is_symmetric(), r.reverse() == r);
        }
    }

    #[test]
    fn symmetric_relations_are_ant_and_syn() {
        let sym: Vec<_> = Relation::ALL.into_iter().filter(|r| r.is_symmetric()).collect();
        assert_eq!(sym, Relation::SYMMETRIC.to_vec());
    }

    #[test]
    fn labels_round_trip() {
        for r in Relation::ALL {
            assert_eq!(r.label().parse::<Relation>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.label()));
        }
        assert!("XYZ".parse::<Relation>().is_err());
    }
}
