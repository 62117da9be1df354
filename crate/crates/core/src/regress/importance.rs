use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::model::{FittedModel, ModelBody};
use super::{r_squared, DesignMatrix};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportanceMethod {
    Impurity,
    Permutation,
}

pub const PERMUTATION_REPEATS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub method: ImportanceMethod,
    pub features: Vec<String>,
    pub values: Vec<f64>,
}

impl ImportanceReport {
    /// Features above `threshold`, most important first.
    pub fn ranked_above(&self, threshold: f64) -> Vec<(String, f64)> {
        let mut ranked: Vec<(String, f64)> = self
            .features
            .iter()
            .cloned()
            .zip(self.values.iter().copied())
            .filter(|(_, v)| *v > threshold)
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        ranked
    }
}

/// Impurity importance of an extra-trees model, or the mean drop in R² on
/// `(x, y)` over [`PERMUTATION_REPEATS`] shuffles of each column.
pub fn importance(
    model: &FittedModel,
    x: &DesignMatrix,
    method: ImportanceMethod,
    seed: u64,
) -> Result<ImportanceReport> {
    let values = match method {
        ImportanceMethod::Impurity => match &model.body {
            ModelBody::Ert { importance, .. } => importance.clone(),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "impurity importance needs an ert model, not {}",
                    model.kind()
                )))
            }
        },
        ImportanceMethod::Permutation => permutation(model, x, seed)?,
    };
    Ok(ImportanceReport {
        method,
        features: model.feature_names.clone(),
        values,
    })
}

fn permutation(model: &FittedModel, x: &DesignMatrix, seed: u64) -> Result<Vec<f64>> {
    let baseline = r_squared(x.target(), &model.predict(x)?)?;
    let mut shuffled = x.clone();
    let mut out = Vec::with_capacity(x.p());
    for j in 0..x.p() {
        let original = x.column(j);
        let mut column = original.clone();
        let mut rng = rng::rng(rng::derive(seed, j as u64));
        let mut drop = 0.0;
        for _ in 0..PERMUTATION_REPEATS {
            column.shuffle(&mut rng);
            shuffled.set_column(j, &column);
            drop += baseline - r_squared(x.target(), &model.predict(&shuffled)?)?;
        }
        shuffled.set_column(j, &original);
        out.push(drop / PERMUTATION_REPEATS as f64);
    }
    Ok(out)
}
