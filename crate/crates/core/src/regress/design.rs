use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major feature matrix with its target.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    data: Vec<f64>,
    target: Vec<f64>,
    row_ids: Vec<String>,
}

impl DesignMatrix {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>, target: Vec<f64>) -> Result<Self> {
        let p = names.len();
        if rows.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: target.len(),
            });
        }
        let mut data = Vec::with_capacity(rows.len() * p);
        for row in &rows {
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(names, data, target)
    }

    pub fn from_flat(names: Vec<String>, data: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        if data.len() != names.len() * target.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len() * target.len(),
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            let p = names.len();
            return Err(Error::NonFinite(format!("row {}, column `{}`", i / p, names[i % p])));
        }
        if let Some(i) = target.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFinite(format!("target of row {i}")));
        }
        let row_ids = (0..target.len()).map(|i| i.to_string()).collect();
        Ok(DesignMatrix {
            names,
            data,
            target,
            row_ids,
        })
    }

    pub fn with_row_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: ids.len(),
            });
        }
        self.row_ids = ids;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    pub fn p(&self) -> usize {
        self.names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.p();
        &self.data[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n()).map(|i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.p() + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn select_rows(&self, indices: &[usize]) -> DesignMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.p());
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        DesignMatrix {
            names: self.names.clone(),
            data,
            target: indices.iter().map(|&i| self.target[i]).collect(),
            row_ids: indices.iter().map(|&i| self.row_ids[i].clone()).collect(),
        }
    }

    pub fn select_columns(&self, columns: &[usize]) -> DesignMatrix {
        let mut data = Vec::with_capacity(self.n() * columns.len());
        for row in self.rows() {
            data.extend(columns.iter().map(|&j| row[j]));
        }
        DesignMatrix {
            names: columns.iter().map(|&j| self.names[j].clone()).collect(),
            data,
            target: self.target.clone(),
            row_ids: self.row_ids.clone(),
        }
    }

    /// Replaces column `j`, e.g. with a permutation of itself.
    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        let p = self.p();
        for (i, v) in values.iter().enumerate() {
            self.data[i * p + j] = *v;
        }
    }
}

/// Column means and population standard deviations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub constant: Vec<bool>,
    pub target_mean: f64,
    pub target_std: f64,
    pub target_constant: bool,
}

fn moments(values: &[f64]) -> (f64, f64, bool) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    let constant = std <= 1e-12 * (1.0 + mean.abs());
    (mean, std, constant)
}

fn scale(x: f64, mean: f64, std: f64, constant: bool) -> f64 {
    if constant {
        0.0
    } else {
        (x - mean) / std
    }
}

impl StandardizationParams {
    pub fn fit(x: &DesignMatrix) -> Result<Self> {
        if x.n() < 2 {
            return Err(Error::InsufficientRows {
                needed: 2,
                available: x.n(),
            });
        }
        let (mut mean, mut std, mut constant) = (Vec::new(), Vec::new(), Vec::new());
        for j in 0..x.p() {
            let (m, s, c) = moments(&x.column(j));
            mean.push(m);
            std.push(s);
            constant.push(c);
        }
        let (target_mean, target_std, target_constant) = moments(x.target());
        Ok(StandardizationParams {
            mean,
            std,
            constant,
            target_mean,
            target_std,
            target_constant,
        })
    }

    /// Scales `x` with these parameters; constant columns become zero.
    pub fn apply(&self, x: &DesignMatrix) -> Result<DesignMatrix> {
        if x.p() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: x.p(),
            });
        }
        let p = x.p();
        let data = x
            .data
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let j = k % p;
                scale(v, self.mean[j], self.std[j], self.constant[j])
            })
            .collect();
        let target = x
            .target
            .iter()
            .map(|&y| scale(y, self.target_mean, self.target_std, self.target_constant))
            .collect();
        Ok(DesignMatrix {
            names: x.names.clone(),
            data,
            target,
            row_ids: x.row_ids.clone(),
        })
    }

    /// Maps a standardized target value back to original units.
    pub fn unscale_target(&self, v: f64) -> f64 {
        if self.target_constant {
            self.target_mean
        } else {
            v * self.target_std + self.target_mean
        }
    }
}

/// Z-scores every column and the target (population standard deviation).
pub fn standardize(x: &DesignMatrix) -> Result<(DesignMatrix, StandardizationParams)> {
    let params = StandardizationParams::fit(x)?;
    Ok((params.apply(x)?, params))
}
