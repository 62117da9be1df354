//! Vector-space models: term-document counts reduced by truncated SVD (LSA),
//! skip-gram / CBOW with negative sampling, and pretrained vector files.

mod corpus;
mod lsa;
mod sgns;
pub mod svd;
mod vecfile;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use corpus::{build_dtm, read_corpus, Segmentation, TermDocMatrix};
pub use lsa::{train_lsa, LsaConfig, LsaModel, VectorScale, Weighting};
pub use sgns::{
    generate_training_pairs, pair_loss, train_sgns, train_sgns_with_history, NegativeDistribution,
    PairLoss, SgnsConfig, SgnsMode, Vocabulary,
};
pub use vecfile::{load_vec_file, read_vec_file, write_vec_file, VecFileScan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Lsa,
    Sgns,
    Loaded,
}

/// Words mapped to dense vectors of one fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    provenance: Provenance,
}

impl EmbeddingSpace {
    pub fn new(dim: usize, provenance: Provenance) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        EmbeddingSpace {
            dim,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            provenance,
        }
    }

    /// Adds or replaces a vector. Returns `true` when `word` was already present.
    pub fn insert(&mut self, word: &str, vector: &[f64]) -> Result<bool> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("vector for `{word}`")));
        }
        if let Some(&i) = self.index.get(word) {
            self.data[i * self.dim..(i + 1) * self.dim].copy_from_slice(vector);
            return Ok(true);
        }
        self.index.insert(word.to_string(), self.words.len());
        self.words.push(word.to_string());
        self.data.extend_from_slice(vector);
        Ok(false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .zip(self.data.chunks_exact(self.dim))
            .map(|(w, v)| (w.as_str(), v))
    }

    pub fn cosine(&self, w1: &str, w2: &str) -> Result<f64> {
        pair_cosine(self, w1, w2)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine of two vectors, clamped to [-1, 1]. `None` when either is zero.
pub fn cosine(u: &[f64], v: &[f64]) -> Option<f64> {
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    Some((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

pub fn pair_cosine(space: &EmbeddingSpace, w1: &str, w2: &str) -> Result<f64> {
    let u = space.get(w1).ok_or_else(|| Error::OutOfVocabulary(w1.to_string()))?;
    let v = space.get(w2).ok_or_else(|| Error::OutOfVocabulary(w2.to_string()))?;
    if norm(u) == 0.0 {
        return Err(Error::ZeroVector(w1.to_string()));
    }
    cosine(u, v).ok_or_else(|| Error::ZeroVector(w2.to_string()))
}
