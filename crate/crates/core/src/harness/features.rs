use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::RatingDataset;
use super::registry::{Availability, FeatureSource, ModelSpec};
use crate::error::{Error, Result};
use crate::qna::{DifferenceMode, PairFeatureVector, QnaFeature, QnaResources, WordFeatures};
use crate::regress::DesignMatrix;
use crate::taxonomy::{word_similarities, IcTable, Metric, Taxonomy};
use crate::vsm::{pair_cosine, EmbeddingSpace};

/// Loaded resources that feature sources are computed from.
#[derive(Clone, Debug, Default)]
pub struct Providers {
    pub taxonomy: Option<Taxonomy>,
    pub ic: Option<IcTable>,
    pub embeddings: BTreeMap<String, EmbeddingSpace>,
    pub qna: QnaResources,
}

impl Providers {
    pub fn availability(&self) -> Availability {
        Availability {
            taxonomy: self.taxonomy.is_some(),
            information_content: self.taxonomy.is_some() && self.ic.is_some(),
            embeddings: self.embeddings.keys().cloned().collect(),
            qna: QnaFeature::ALL.into_iter().filter(|&f| self.qna.supports(f)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    /// Rows lacking any of a model's features are left out.
    #[default]
    DropRow,
    /// Missing cells take the mean of the observed cells in their column.
    MeanImpute,
}

/// Every available feature source evaluated on every pair of a dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub pair_ids: Vec<String>,
    pub target: Vec<f64>,
    columns: BTreeMap<FeatureSource, Vec<Option<f64>>>,
}

impl FeatureTable {
    /// Evaluates every source `providers` can supply. Pairs a provider cannot
    /// score (unknown words, zero vectors) are recorded as missing.
    pub fn compute(dataset: &RatingDataset, providers: &Providers, mode: DifferenceMode) -> Self {
        let available = providers.availability();
        let mut columns = BTreeMap::new();

        if let Some(t) = &providers.taxonomy {
            let metrics: Vec<Metric> = Metric::ALL
                .into_iter()
                .filter(|m| available.provides(&FeatureSource::Metric(*m)))
                .collect();
            let scores: Vec<Option<Vec<f64>>> = dataset
                .pairs
                .par_iter()
                .map(|p| {
                    word_similarities(&metrics, t, &p.word1, &p.word2, p.pos, providers.ic.as_ref())
                        .ok()
                        .map(|s| s.iter().map(|m| m.value).collect())
                })
                .collect();
            for (k, m) in metrics.iter().enumerate() {
                let col = scores.iter().map(|s| s.as_ref().map(|v| v[k])).collect();
                columns.insert(FeatureSource::Metric(*m), col);
            }
        }

        for (slot, space) in &providers.embeddings {
            let col = dataset
                .pairs
                .iter()
                .map(|p| pair_cosine(space, &p.word1, &p.word2).ok())
                .collect();
            columns.insert(FeatureSource::Embedding(slot.clone()), col);
        }

        let qna: Vec<QnaFeature> = available.qna.iter().copied().collect();
        if !qna.is_empty() {
            let words = dataset.words();
            let per_word: HashMap<&str, WordFeatures> = words
                .par_iter()
                .map(|w| (w.as_str(), providers.qna.word_features(w)))
                .collect();
            for f in qna {
                let col = dataset
                    .pairs
                    .iter()
                    .map(|p| {
                        let a = per_word[p.word1.as_str()].get(f)?;
                        let b = per_word[p.word2.as_str()].get(f)?;
                        Some(mode.apply(a, b))
                    })
                    .collect();
                columns.insert(FeatureSource::Qna(f), col);
            }
        }

        FeatureTable {
            pair_ids: dataset.pairs.iter().map(|p| p.id()).collect(),
            target: dataset.ratings(),
            columns,
        }
    }

    /// A table from precomputed columns, e.g. features from another tool.
    pub fn from_columns(
        pair_ids: Vec<String>,
        target: Vec<f64>,
        columns: BTreeMap<FeatureSource, Vec<Option<f64>>>,
    ) -> Result<Self> {
        if pair_ids.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: pair_ids.len(),
            });
        }
        if let Some(c) = columns.values().find(|c| c.len() != target.len()) {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: c.len(),
            });
        }
        if target.iter().chain(columns.values().flatten().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature table".into()));
        }
        Ok(FeatureTable {
            pair_ids,
            target,
            columns,
        })
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = &FeatureSource> {
        self.columns.keys()
    }

    pub fn column(&self, source: &FeatureSource) -> Option<&[Option<f64>]> {
        self.columns.get(source).map(Vec::as_slice)
    }

    /// Row `i` of the table, for the pair of `dataset` it was computed from.
    pub fn pair_vector(&self, dataset: &RatingDataset, i: usize) -> PairFeatureVector {
        let p = &dataset.pairs[i];
        let mut v = PairFeatureVector::new(&p.word1, &p.word2);
        for (source, col) in &self.columns {
            v.push(&source.name(), col[i]);
        }
        v
    }

    /// `word1,word2,pos,rating` and one column per source; missing cells
    /// are empty.
    pub fn write_csv<W: Write>(&self, dataset: &RatingDataset, out: W) -> Result<()> {
        if dataset.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: dataset.len(),
            });
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["word1", "word2", "pos", "rating"].map(String::from).to_vec();
        header.extend(self.columns.keys().map(FeatureSource::name));
        w.write_record(&header)?;
        for (i, p) in dataset.pairs.iter().enumerate() {
            let mut row = vec![p.word1.clone(), p.word2.clone(), p.pos.tag().to_string(), p.rating.to_string()];
            row.extend(self.columns.values().map(|c| c[i].map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureCoverage {
    pub feature: String,
    pub observed: usize,
}

/// How many rows survived the missing-data policy, and how many pairs had
/// each feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub total_rows: usize,
    pub retained_rows: usize,
    pub imputed_cells: usize,
    pub per_feature: Vec<FeatureCoverage>,
}

impl Coverage {
    pub fn summary(&self) -> String {
        format!("{}/{}", self.retained_rows, self.total_rows)
    }
}

/// The design matrix of `spec` over the table's pairs.
pub fn assemble_design_matrix(
    table: &FeatureTable,
    spec: &ModelSpec,
    policy: MissingPolicy,
) -> Result<(DesignMatrix, Coverage)> {
    let columns: Vec<&[Option<f64>]> = spec
        .features
        .iter()
        .map(|f| {
            table
                .column(f)
                .ok_or_else(|| Error::MissingResource(format!("no provider for feature `{f}`")))
        })
        .collect::<Result<_>>()?;
    let per_feature: Vec<FeatureCoverage> = spec
        .features
        .iter()
        .zip(&columns)
        .map(|(f, c)| FeatureCoverage {
            feature: f.name(),
            observed: c.iter().flatten().count(),
        })
        .collect();

    let n = table.len();
    let mut rows = Vec::new();
    let mut ids = Vec::new();
    let mut target = Vec::new();
    let mut imputed = 0;
    match policy {
        MissingPolicy::DropRow => {
            for i in 0..n {
                if let Some(row) = columns.iter().map(|c| c[i]).collect::<Option<Vec<f64>>>() {
                    rows.push(row);
                    ids.push(table.pair_ids[i].clone());
                    target.push(table.target[i]);
                }
            }
        }
        MissingPolicy::MeanImpute => {
            let means: Vec<f64> = spec
                .features
                .iter()
                .zip(&columns)
                .map(|(f, c)| {
                    let observed: Vec<f64> = c.iter().flatten().copied().collect();
                    if observed.is_empty() {
                        Err(Error::MissingResource(format!("feature `{f}` has no observed values")))
                    } else {
                        Ok(observed.iter().sum::<f64>() / observed.len() as f64)
                    }
                })
                .collect::<Result<_>>()?;
            for i in 0..n {
                let row = columns
                    .iter()
                    .zip(&means)
                    .map(|(c, m)| {
                        c[i].unwrap_or_else(|| {
                            imputed += 1;
                            *m
                        })
                    })
                    .collect();
                rows.push(row);
                ids.push(table.pair_ids[i].clone());
                target.push(table.target[i]);
            }
        }
    }
    let coverage = Coverage {
        total_rows: n,
        retained_rows: rows.len(),
        imputed_cells: imputed,
        per_feature,
    };
    let x = DesignMatrix::new(spec.feature_names(), rows, target)?.with_row_ids(ids)?;
    Ok((x, coverage))
}
