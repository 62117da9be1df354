use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::vsm::{cosine, dot, norm, EmbeddingSpace, VecFileScan};

/// `1 − mean cosine(word, v)` over the sample, with the word itself left out.
/// Sample words missing from the space or with zero vectors are ignored.
pub fn distinctiveness<S: AsRef<str>>(word: &str, space: &EmbeddingSpace, sample: &[S]) -> Result<f64> {
    let u = space.get(word).ok_or_else(|| Error::OutOfVocabulary(word.to_string()))?;
    if norm(u) == 0.0 {
        return Err(Error::ZeroVector(word.to_string()));
    }
    let (sum, n) = sample
        .iter()
        .map(AsRef::as_ref)
        .filter(|&w| w != word)
        .filter_map(|w| space.get(w).and_then(|v| cosine(u, v)))
        .fold((0.0, 0usize), |(s, n), c| (s + c, n + 1));
    if n == 0 {
        return Err(Error::InvalidArgument(format!("empty distinctiveness sample for `{word}`")));
    }
    Ok(1.0 - sum / n as f64)
}

/// Distinctiveness against a whole vocabulary in O(dim) per word, using the
/// sum of that vocabulary's unit vectors.
#[derive(Clone, Debug)]
pub struct DistinctivenessIndex {
    space: EmbeddingSpace,
    unit_sum: Vec<f64>,
    count: usize,
    sample: Option<HashSet<String>>,
}

impl DistinctivenessIndex {
    /// Every non-zero vector in `space` forms the sample.
    pub fn from_space(space: EmbeddingSpace) -> Self {
        let mut unit_sum = vec![0.0; space.dim()];
        let mut count = 0;
        for (_, v) in space.iter() {
            count += add_unit(&mut unit_sum, v) as usize;
        }
        DistinctivenessIndex {
            space,
            unit_sum,
            count,
            sample: None,
        }
    }

    /// The sample is every line of the scanned file; targets are the words
    /// the scan kept.
    pub fn from_scan(scan: VecFileScan) -> Self {
        DistinctivenessIndex {
            space: scan.space,
            unit_sum: scan.unit_sum,
            count: scan.unit_count,
            sample: None,
        }
    }

    /// Restricts the sample to `words` (e.g. the most frequent N).
    pub fn from_sample<S: AsRef<str>>(space: EmbeddingSpace, words: &[S]) -> Self {
        let mut unit_sum = vec![0.0; space.dim()];
        let mut members = HashSet::new();
        for w in words.iter().map(AsRef::as_ref) {
            if let Some(v) = space.get(w) {
                if !members.contains(w) && add_unit(&mut unit_sum, v) {
                    members.insert(w.to_string());
                }
            }
        }
        DistinctivenessIndex {
            space,
            unit_sum,
            count: members.len(),
            sample: Some(members),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.space.contains(word)
    }

    pub fn sample_size(&self) -> usize {
        self.count
    }

    pub fn get(&self, word: &str) -> Result<f64> {
        let v = self.space.get(word).ok_or_else(|| Error::OutOfVocabulary(word.to_string()))?;
        let len = norm(v);
        if len == 0.0 {
            return Err(Error::ZeroVector(word.to_string()));
        }
        let in_sample = self.sample.as_ref().is_none_or(|s| s.contains(word));
        let (sum, n) = if in_sample {
            (dot(v, &self.unit_sum) / len - 1.0, self.count.saturating_sub(1))
        } else {
            (dot(v, &self.unit_sum) / len, self.count)
        };
        if n == 0 {
            return Err(Error::InvalidArgument(format!("empty distinctiveness sample for `{word}`")));
        }
        Ok(1.0 - sum / n as f64)
    }
}

fn add_unit(sum: &mut [f64], v: &[f64]) -> bool {
    let len = norm(v);
    if len == 0.0 {
        return false;
    }
    for (s, x) in sum.iter_mut().zip(v) {
        *s += x / len;
    }
    true
}
