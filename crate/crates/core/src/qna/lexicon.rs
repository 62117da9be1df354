use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::read_table as reader;

/// Corpus word counts for Zipf-scale frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyLexicon {
    counts: HashMap<String, f64>,
    total_tokens: f64,
}

impl FrequencyLexicon {
    /// `total_tokens` defaults to the sum of counts.
    pub fn new(counts: HashMap<String, f64>, total_tokens: Option<f64>) -> Result<Self> {
        let counts: HashMap<String, f64> = counts.into_iter().map(|(w, c)| (w.to_lowercase(), c)).collect();
        let total = total_tokens.unwrap_or_else(|| counts.values().sum());
        if !(total > 0.0) || counts.is_empty() {
            return Err(Error::EmptyCounts);
        }
        Ok(FrequencyLexicon {
            counts,
            total_tokens: total,
        })
    }

    /// CSV with header `word,count`; an optional `__total__,N` row sets the
    /// corpus size.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut counts = HashMap::new();
        let mut total = None;
        for (line, record) in reader(path, &["word", "count"])? {
            let count: f64 = record[1]
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite() && *c >= 0.0)
                .ok_or_else(|| Error::parse(path, line, format!("bad count `{}`", &record[1])))?;
            if record[0] == "__total__" {
                total = Some(count);
            } else {
                *counts.entry(record[0].to_lowercase()).or_insert(0.0) += count;
            }
        }
        Self::new(counts, total)
    }

    pub fn count(&self, word: &str) -> f64 {
        self.counts.get(&word.to_lowercase()).copied().unwrap_or(0.0)
    }

    pub fn total_tokens(&self) -> f64 {
        self.total_tokens
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    /// Zipf scale: `log10((count + 1) · 1e9 / (total + vocab))`.
    pub fn zipf(&self, word: &str) -> f64 {
        ((self.count(word) + 1.0) * 1e9 / (self.total_tokens + self.vocab_size() as f64)).log10()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub valence: f64,
    pub arousal: f64,
    pub imageability: f64,
    pub dominance: f64,
    pub concreteness: f64,
}

/// Affective and semantic rating norms, looked up case-insensitively.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormLexicon {
    norms: HashMap<String, Norms>,
}

impl NormLexicon {
    pub fn new(norms: impl IntoIterator<Item = (String, Norms)>) -> Self {
        NormLexicon {
            norms: norms.into_iter().map(|(w, n)| (w.to_lowercase(), n)).collect(),
        }
    }

    /// CSV with header `word,valence,arousal,imageability,dominance,concreteness`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let columns = ["word", "valence", "arousal", "imageability", "dominance", "concreteness"];
        let mut norms = HashMap::new();
        for (line, record) in reader(path, &columns)? {
            let mut v = [0.0; 5];
            for (k, slot) in v.iter_mut().enumerate() {
                *slot = record[k + 1]
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite())
                    .ok_or_else(|| Error::parse(path, line, format!("bad {} `{}`", columns[k + 1], &record[k + 1])))?;
            }
            norms.insert(
                record[0].to_lowercase(),
                Norms {
                    valence: v[0],
                    arousal: v[1],
                    imageability: v[2],
                    dominance: v[3],
                    concreteness: v[4],
                },
            );
        }
        Ok(NormLexicon { norms })
    }

    pub fn get(&self, word: &str) -> Option<&Norms> {
        self.norms.get(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }
}

/// Letter sonority classes. The default table:
/// stops 1 (b c d g k p q t), fricatives 2 (f h j s v x z), nasals 3 (m n),
/// liquids 4 (l r), glides 5 (w y), vowels 6 (a e i o u).
#[derive(Clone, Debug, PartialEq)]
pub struct SonorityTable {
    classes: [f64; 26],
}

impl Default for SonorityTable {
    fn default() -> Self {
        let mut classes = [0.0; 26];
        for (letters, class) in [
            ("bcdgkpqt", 1.0),
            ("fhjsvxz", 2.0),
            ("mn", 3.0),
            ("lr", 4.0),
            ("wy", 5.0),
            ("aeiou", 6.0),
        ] {
            for b in letters.bytes() {
                classes[(b - b'a') as usize] = class;
            }
        }
        SonorityTable { classes }
    }
}

impl SonorityTable {
    /// Every letter a-z needs a positive class and vowels must outrank
    /// every consonant.
    pub fn from_classes(classes: [f64; 26]) -> Result<Self> {
        if let Some(i) = classes.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "letter `{}` needs a positive sonority class",
                (b'a' + i as u8) as char
            )));
        }
        let is_vowel = |i: usize| b"aeiou".contains(&(b'a' + i as u8));
        let min_vowel = (0..26).filter(|&i| is_vowel(i)).map(|i| classes[i]).fold(f64::INFINITY, f64::min);
        let max_consonant = (0..26).filter(|&i| !is_vowel(i)).map(|i| classes[i]).fold(0.0, f64::max);
        if min_vowel <= max_consonant {
            return Err(Error::InvalidArgument("vowels must have the highest sonority".into()));
        }
        Ok(SonorityTable { classes })
    }

    /// CSV `letter,class` covering a-z.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut classes = [f64::NAN; 26];
        for (line, record) in reader(path, &["letter", "class"])? {
            let letter = record[0].to_ascii_lowercase();
            let &[b] = letter.as_bytes() else {
                return Err(Error::parse(path, line, format!("`{letter}` is not a single letter")));
            };
            if !b.is_ascii_lowercase() {
                return Err(Error::parse(path, line, format!("`{letter}` is not a letter a-z")));
            }
            classes[(b - b'a') as usize] = record[1]
                .parse()
                .map_err(|_| Error::parse(path, line, format!("bad class `{}`", &record[1])))?;
        }
        Self::from_classes(classes)
    }

    pub fn class(&self, letter: char) -> Option<f64> {
        let l = letter.to_ascii_lowercase();
        l.is_ascii_lowercase().then(|| self.classes[(l as u8 - b'a') as usize])
    }
}

/// Externally supplied aesthetic-potential scores.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ApLexicon {
    values: HashMap<String, f64>,
}

impl ApLexicon {
    pub fn new(values: impl IntoIterator<Item = (String, f64)>) -> Self {
        ApLexicon {
            values: values.into_iter().map(|(w, v)| (w.to_lowercase(), v)).collect(),
        }
    }

    /// CSV with header `word,ap`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut values = HashMap::new();
        for (line, record) in reader(path, &["word", "ap"])? {
            let v: f64 = record[1]
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| Error::parse(path, line, format!("bad ap `{}`", &record[1])))?;
            values.insert(record[0].to_lowercase(), v);
        }
        Ok(ApLexicon { values })
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.values.get(&word.to_lowercase()).copied()
    }
}

/// Words against which orthographic neighbours are counted, bucketed by length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceList {
    by_len: HashMap<usize, Vec<Vec<char>>>,
}

impl ReferenceList {
    pub fn new<S: AsRef<str>>(words: impl IntoIterator<Item = S>) -> Self {
        let mut unique: Vec<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        unique.sort();
        unique.dedup();
        let mut by_len: HashMap<usize, Vec<Vec<char>>> = HashMap::new();
        for w in unique {
            let chars: Vec<char> = w.chars().collect();
            by_len.entry(chars.len()).or_default().push(chars);
        }
        ReferenceList { by_len }
    }

    /// One word per line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(text.lines()))
    }

    /// Coltheart's N: same-length words differing in exactly one position.
    pub fn neighbours(&self, word: &str) -> usize {
        let w: Vec<char> = word.to_lowercase().chars().collect();
        self.by_len.get(&w.len()).map_or(0, |bucket| {
            bucket
                .iter()
                .filter(|r| r.iter().zip(&w).filter(|(a, b)| a != b).count() == 1)
                .count()
        })
    }

    pub fn len(&self) -> usize {
        self.by_len.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_len.is_empty()
    }
}
