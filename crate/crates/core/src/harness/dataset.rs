use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::read_delimited;
use crate::taxonomy::Pos;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatingPair {
    pub word1: String,
    pub word2: String,
    pub pos: Pos,
    pub rating: f64,
}

impl RatingPair {
    pub fn new(word1: &str, word2: &str, pos: Pos, rating: f64) -> Self {
        RatingPair {
            word1: word1.to_string(),
            word2: word2.to_string(),
            pos,
            rating,
        }
    }

    pub fn id(&self) -> String {
        format!("{}-{}-{}", self.word1, self.word2, self.pos.tag())
    }
}

/// Noun and verb word pairs with a similarity rating each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatingDataset {
    pub source: String,
    pub pairs: Vec<RatingPair>,
}

impl RatingDataset {
    pub fn new(source: impl Into<String>, pairs: Vec<RatingPair>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &pairs {
            if !p.rating.is_finite() {
                return Err(Error::NonFinite(format!("rating of {}", p.id())));
            }
            if !seen.insert((p.word1.clone(), p.word2.clone(), p.pos)) {
                return Err(Error::InvalidArgument(format!("duplicate pair {}", p.id())));
            }
        }
        Ok(RatingDataset {
            source: source.into(),
            pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ratings(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.rating).collect()
    }

    /// Every distinct word, in first-seen order.
    pub fn words(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.pairs
            .iter()
            .flat_map(|p| [&p.word1, &p.word2])
            .filter(|w| seen.insert(w.as_str()))
            .cloned()
            .collect()
    }
}

/// Reads a tab-separated SimLex-style file with at least the columns
/// `word1`, `word2`, `POS` and `SimLex999`. Adjective pairs are dropped.
pub fn load_simlex(path: impl AsRef<Path>) -> Result<RatingDataset> {
    let path = path.as_ref();
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (line, r) in read_delimited(path, b'\t', &["word1", "word2", "POS", "SimLex999"])? {
        let pos = match r[2].as_str() {
            "A" | "a" => continue,
            other => other
                .parse::<Pos>()
                .map_err(|_| Error::parse(path, line, format!("unknown POS `{other}`")))?,
        };
        let rating: f64 = r[3]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::parse(path, line, format!("bad rating `{}`", r[3])))?;
        let pair = RatingPair::new(&r[0].to_lowercase(), &r[1].to_lowercase(), pos, rating);
        if !seen.insert((pair.word1.clone(), pair.word2.clone(), pos)) {
            return Err(Error::parse(path, line, format!("duplicate pair {}", pair.id())));
        }
        pairs.push(pair);
    }
    RatingDataset::new(path.display().to_string(), pairs)
}
