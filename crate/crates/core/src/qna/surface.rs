use super::{ApLexicon, FrequencyLexicon, NormLexicon, ReferenceList, SonorityTable, WordFeatures};
use crate::error::{Error, Result};

fn normalize(word: &str) -> Result<String> {
    let w = word.trim().to_lowercase();
    if w.is_empty() || !w.chars().all(|c| c.is_ascii_lowercase()) {
        return Err(Error::InvalidArgument(format!("`{word}` is not an alphabetic word")));
    }
    Ok(w)
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Vowel-group heuristic over {a e i o u y}. A final lone `e` after a
/// consonant is silent unless the word ends in consonant + "le".
pub fn count_syllables(word: &str) -> usize {
    let w = word.to_lowercase();
    let b = w.as_bytes();
    let syllabic = |c: u8| is_vowel(c) || c == b'y';
    let mut groups = 0;
    let mut prev = false;
    for &c in b {
        let v = syllabic(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    let n = b.len();
    if n >= 2 && b[n - 1] == b'e' && !syllabic(b[n - 2]) {
        let consonant_le = n >= 3 && b[n - 2] == b'l' && !syllabic(b[n - 3]);
        if !consonant_le {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// `nlet`, `cvq` and `nsyl` from the spelling alone; `logfZ` when a frequency
/// lexicon is supplied and `on` when a reference list is.
///
/// A word without any of a, e, i, o, u takes its consonant count as `cvq`.
pub fn surface_features(
    word: &str,
    freq: Option<&FrequencyLexicon>,
    reference: Option<&ReferenceList>,
) -> Result<WordFeatures> {
    let w = normalize(word)?;
    let vowels = w.bytes().filter(|&c| is_vowel(c)).count();
    let consonants = w.len() - vowels;
    Ok(WordFeatures {
        nlet: Some(w.len() as f64),
        nsyl: Some(count_syllables(&w) as f64),
        cvq: Some(consonants as f64 / vowels.max(1) as f64),
        on: reference.map(|r| r.neighbours(&w) as f64),
        logfz: freq.map(|f| f.zipf(&w)),
        ..Default::default()
    })
}

pub fn norm_features(word: &str, norms: &NormLexicon) -> WordFeatures {
    match norms.get(word) {
        Some(n) => WordFeatures {
            val: Some(n.valence),
            aro: Some(n.arousal),
            ima: Some(n.imageability),
            dom: Some(n.dominance),
            conc: Some(n.concreteness),
            ..Default::default()
        },
        None => WordFeatures::default(),
    }
}

/// `sc` is the mean letter sonority. `ap` comes from the lexicon, falling
/// back to `|val|`. `logfZ` and `val` are filled when their sources exist.
pub fn aesthetic_features(
    word: &str,
    sonority: &SonorityTable,
    ap: Option<&ApLexicon>,
    freq: Option<&FrequencyLexicon>,
    norms: Option<&NormLexicon>,
) -> Result<WordFeatures> {
    let w = normalize(word)?;
    let sc = w.chars().filter_map(|c| sonority.class(c)).sum::<f64>() / w.len() as f64;
    let val = norms.and_then(|n| n.get(&w)).map(|n| n.valence);
    Ok(WordFeatures {
        sc: Some(sc),
        ap: ap.and_then(|a| a.get(&w)).or(val.map(f64::abs)),
        logfz: freq.map(|f| f.zipf(&w)),
        val,
        ..Default::default()
    })
}
