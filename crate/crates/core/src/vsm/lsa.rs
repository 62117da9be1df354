use serde::{Deserialize, Serialize};

use super::svd::{truncated_svd, CsrMatrix, SvdOptions};
use super::{EmbeddingSpace, Provenance, TermDocMatrix};
use crate::error::Result;

/// Cell weighting applied before factorization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    #[default]
    Raw,
    TfIdf,
    LogEntropy,
}

/// Which factor becomes the word vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorScale {
    /// Rows of `U_k Σ_k`.
    #[default]
    ScaledBySingularValues,
    /// Rows of `U_k`.
    LeftSingularVectors,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LsaConfig {
    pub dim: usize,
    pub seed: u64,
    pub weighting: Weighting,
    pub scale: VectorScale,
    pub svd: SvdOptions,
}

impl LsaConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        LsaConfig {
            dim,
            seed,
            weighting: Weighting::default(),
            scale: VectorScale::default(),
            svd: SvdOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LsaModel {
    pub space: EmbeddingSpace,
    /// Non-increasing.
    pub singular_values: Vec<f64>,
}

pub fn train_lsa(dtm: &TermDocMatrix, config: &LsaConfig) -> Result<LsaModel> {
    let rows = weighted_rows(dtm, config.weighting);
    let a = CsrMatrix::from_rows(dtm.doc_count(), &rows);
    let svd = truncated_svd(&a, config.dim, config.seed, &config.svd)?;

    let mut space = EmbeddingSpace::new(config.dim, Provenance::Lsa);
    let mut vector = vec![0.0; config.dim];
    for (r, word) in dtm.words().iter().enumerate() {
        for (j, (u, s)) in svd.u.iter().zip(&svd.s).enumerate() {
            vector[j] = match config.scale {
                VectorScale::ScaledBySingularValues => u[r] * s,
                VectorScale::LeftSingularVectors => u[r],
            };
        }
        space.insert(word, &vector)?;
    }
    Ok(LsaModel {
        space,
        singular_values: svd.s,
    })
}

fn weighted_rows(dtm: &TermDocMatrix, weighting: Weighting) -> Vec<Vec<(usize, f64)>> {
    let n_docs = dtm.doc_count() as f64;
    (0..dtm.vocab_size())
        .map(|r| {
            let row = dtm.row(r);
            match weighting {
                Weighting::Raw => row.to_vec(),
                Weighting::TfIdf => {
                    let idf = (n_docs / row.len() as f64).ln();
                    row.iter().map(|&(d, c)| (d, c * idf)).collect()
                }
                Weighting::LogEntropy => {
                    let total: f64 = row.iter().map(|&(_, c)| c).sum();
                    let entropy: f64 = row
                        .iter()
                        .map(|&(_, c)| {
                            let p = c / total;
                            p * p.ln()
                        })
                        .sum();
                    let global = if n_docs > 1.0 { 1.0 + entropy / n_docs.ln() } else { 1.0 };
                    row.iter().map(|&(d, c)| (d, (1.0 + c).ln() * global)).collect()
                }
            }
        })
        .collect()
}
