use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{assemble_design_matrix, Coverage, FeatureTable, MissingPolicy};
use super::registry::{ModelSpec, SpecStatus};
use crate::error::{Error, Result};
use crate::regress::{
    fit, grid_search, importance, r_squared, DesignMatrix, Grid, ImportanceMethod, ImportanceReport, Objective,
    RegressorKind, RegressorParams, StandardizationParams,
};
use crate::rng;

/// Importance above this is listed among a model's top features.
pub const IMPORTANCE_THRESHOLD: f64 = 0.1;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub train_size: usize,
    pub test_size: usize,
    pub iterations: usize,
    pub seed: u64,
    pub missing_policy: MissingPolicy,
    /// Standardize once over all retained rows before splitting. With
    /// `false`, each split is standardized with its training rows only.
    pub standardize_before_split: bool,
    /// Replaces every model's regressors, e.g. `[ert, mlp, mlr]` for all.
    pub regressors: Option<Vec<RegressorKind>>,
    /// Hyperparameter grids per regressor, tuned once per model on all rows.
    pub grids: BTreeMap<RegressorKind, Grid>,
    pub grid_objective: Objective,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            train_size: 666,
            test_size: 222,
            iterations: 1000,
            seed: 0,
            missing_policy: MissingPolicy::DropRow,
            standardize_before_split: true,
            regressors: None,
            grids: BTreeMap::new(),
            grid_objective: Objective::TrainR2,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if self.train_size < 2 || self.test_size < 2 {
            return Err(Error::InvalidArgument("train and test sets need at least 2 rows each".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", content = "reason", rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Skipped(String),
    Failed(String),
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Skipped(_) => "skipped",
            RunStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressorResult {
    pub regressor: RegressorKind,
    pub params: RegressorParams,
    pub r2_train_mean: Option<f64>,
    pub r2_train_sd: Option<f64>,
    pub r2_test_mean: Option<f64>,
    pub r2_test_sd: Option<f64>,
    pub r2_train: Vec<f64>,
    pub r2_test: Vec<f64>,
}

impl RegressorResult {
    pub(crate) fn empty(params: RegressorParams) -> Self {
        RegressorResult {
            regressor: params.kind(),
            params,
            r2_train_mean: None,
            r2_train_sd: None,
            r2_test_mean: None,
            r2_test_sd: None,
            r2_train: Vec::new(),
            r2_test: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelResult {
    pub id: u32,
    pub name: String,
    pub features: Vec<String>,
    pub status: RunStatus,
    pub coverage: Option<Coverage>,
    pub regressors: Vec<RegressorResult>,
    pub best_regressor: Option<RegressorKind>,
    pub importance: Option<ImportanceReport>,
    /// Features with importance above [`IMPORTANCE_THRESHOLD`], descending.
    pub top_features: Vec<(String, f64)>,
    /// `(predicted, observed)` in rating units on the first iteration's
    /// test split, for the best regressor.
    pub scatter: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub wordsim_version: String,
    pub dataset: String,
    pub dataset_pairs: usize,
    pub config: ExperimentConfig,
    pub models: Vec<ModelResult>,
}

impl ExperimentReport {
    pub fn model(&self, id: u32) -> Option<&ModelResult> {
        self.models.iter().find(|m| m.id == id)
    }
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Runs every ready spec. Skipped specs and specs that fail (too few rows,
/// a diverging fit) stay in the report with their status.
pub fn run_experiment(table: &FeatureTable, specs: &[ModelSpec], config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if config.grid_objective == Objective::TrainR2 && !config.grids.is_empty() {
        log::warn!("hyperparameters are tuned on all rows, including future test rows");
    }
    if config.standardize_before_split {
        log::info!("standardizing before the split; test rows inform the scaling");
    }
    let mut models = Vec::with_capacity(specs.len());
    for spec in specs {
        let params: Vec<RegressorParams> = match &config.regressors {
            Some(kinds) => kinds.iter().map(|&k| RegressorParams::default_for(k)).collect(),
            None => spec.regressors.clone(),
        };
        let result = match &spec.status {
            SpecStatus::Skipped(reason) => skipped(spec, &params, RunStatus::Skipped(reason.clone()), None),
            SpecStatus::Ready => match run_model(table, spec, &params, config) {
                Ok(r) => r,
                Err(Error::InsufficientRows { needed, available }) => {
                    log::error!("model {}: {available} rows retained, {needed} needed", spec.id);
                    let coverage = assemble_design_matrix(table, spec, config.missing_policy).ok().map(|c| c.1);
                    let reason = format!("{available} rows retained, {needed} needed");
                    skipped(spec, &params, RunStatus::Failed(reason), coverage)
                }
                Err(e) if e.exit_code() == 3 => {
                    log::error!("model {}: {e}", spec.id);
                    skipped(spec, &params, RunStatus::Failed(e.to_string()), None)
                }
                Err(e) => return Err(e),
            },
        };
        models.push(result);
    }
    Ok(ExperimentReport {
        format_version: REPORT_FORMAT_VERSION,
        wordsim_version: env!("CARGO_PKG_VERSION").to_string(),
        dataset: String::new(),
        dataset_pairs: table.len(),
        config: config.clone(),
        models,
    })
}

fn skipped(spec: &ModelSpec, params: &[RegressorParams], status: RunStatus, coverage: Option<Coverage>) -> ModelResult {
    ModelResult {
        id: spec.id,
        name: spec.name.clone(),
        features: spec.feature_names(),
        status,
        coverage,
        regressors: params.iter().cloned().map(RegressorResult::empty).collect(),
        best_regressor: None,
        importance: None,
        top_features: Vec::new(),
        scatter: Vec::new(),
    }
}

/// The disjoint train and test rows of iteration `i`.
pub fn split_indices(n: usize, train: usize, test: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::rng(seed));
    (order[..train].to_vec(), order[train..train + test].to_vec())
}

fn split_seed(master: u64, spec: u32, iteration: usize) -> u64 {
    rng::derive(rng::derive(master, spec as u64), iteration as u64)
}

struct Iteration {
    train: Vec<f64>,
    test: Vec<f64>,
    /// Test-row predictions per regressor, kept for the first iteration.
    predictions: Option<(Vec<usize>, Vec<Vec<f64>>)>,
}

/// Cross-validates one spec with each of `params`.
pub fn run_model(
    table: &FeatureTable,
    spec: &ModelSpec,
    params: &[RegressorParams],
    config: &ExperimentConfig,
) -> Result<ModelResult> {
    config.validate()?;
    let (raw, coverage) = assemble_design_matrix(table, spec, config.missing_policy)?;
    let needed = config.train_size + config.test_size;
    if raw.n() < needed {
        return Err(Error::InsufficientRows {
            needed,
            available: raw.n(),
        });
    }
    let full_scaler = StandardizationParams::fit(&raw)?;
    let full = full_scaler.apply(&raw)?;
    let modeled = if config.standardize_before_split { &full } else { &raw };

    let params: Vec<RegressorParams> = params
        .iter()
        .enumerate()
        .map(|(r, p)| match config.grids.get(&p.kind()) {
            Some(grid) => {
                let seed = rng::derive(rng::derive(config.seed, spec.id as u64), 0x6772_6964 + r as u64);
                Ok(grid_search(p, &full, grid, config.grid_objective, seed)?.best)
            }
            None => Ok(p.clone()),
        })
        .collect::<Result<_>>()?;

    let iterations: Vec<Iteration> = (0..config.iterations)
        .into_par_iter()
        .map(|i| {
            let seed = split_seed(config.seed, spec.id, i);
            let (train_idx, test_idx) = split_indices(modeled.n(), config.train_size, config.test_size, seed);
            let (train, test, scaler) = split(modeled, &train_idx, &test_idx, config.standardize_before_split)?;
            let scaler = scaler.as_ref().unwrap_or(&full_scaler);
            let mut out = Iteration {
                train: Vec::new(),
                test: Vec::new(),
                predictions: None,
            };
            let mut preds = Vec::new();
            for (r, p) in params.iter().enumerate() {
                let model = fit(p, &train, rng::derive(seed, r as u64 + 1))?;
                out.train.push(r_squared(train.target(), &model.predict(&train)?)?);
                let test_pred = model.predict(&test)?;
                out.test.push(r_squared(test.target(), &test_pred)?);
                if i == 0 {
                    preds.push(test_pred.iter().map(|&v| scaler.unscale_target(v)).collect());
                }
            }
            if i == 0 {
                out.predictions = Some((test_idx, preds));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut regressors = Vec::with_capacity(params.len());
    for (r, p) in params.iter().enumerate() {
        let train: Vec<f64> = iterations.iter().map(|it| it.train[r]).collect();
        let test: Vec<f64> = iterations.iter().map(|it| it.test[r]).collect();
        let (train_mean, train_sd) = mean_sd(&train);
        let (test_mean, test_sd) = mean_sd(&test);
        regressors.push(RegressorResult {
            regressor: p.kind(),
            params: p.clone(),
            r2_train_mean: Some(train_mean),
            r2_train_sd: Some(train_sd),
            r2_test_mean: Some(test_mean),
            r2_test_sd: Some(test_sd),
            r2_train: train,
            r2_test: test,
        });
    }

    // Best regressor by mean test R²; the first listed wins ties.
    let best = (0..regressors.len())
        .reduce(|a, b| {
            if regressors[b].r2_test_mean > regressors[a].r2_test_mean {
                b
            } else {
                a
            }
        })
        .expect("at least one regressor");
    let best_params = &params[best];
    let importance_seed = rng::derive(rng::derive(config.seed, spec.id as u64), 0x696d_7072);
    let full_fit = fit(best_params, &full, importance_seed)?;
    let method = match best_params.kind() {
        RegressorKind::Ert => ImportanceMethod::Impurity,
        _ => ImportanceMethod::Permutation,
    };
    let report = importance(&full_fit, &full, method, importance_seed)?;

    let (test_idx, preds) = iterations[0].predictions.clone().expect("first iteration keeps predictions");
    let scatter = test_idx
        .iter()
        .zip(&preds[best])
        .map(|(&i, &p)| (p, raw.target()[i]))
        .collect();

    Ok(ModelResult {
        id: spec.id,
        name: spec.name.clone(),
        features: spec.feature_names(),
        status: RunStatus::Ok,
        coverage: Some(coverage),
        regressors,
        best_regressor: Some(best_params.kind()),
        top_features: report.ranked_above(IMPORTANCE_THRESHOLD),
        importance: Some(report),
        scatter,
    })
}

fn split(
    x: &DesignMatrix,
    train_idx: &[usize],
    test_idx: &[usize],
    already_standardized: bool,
) -> Result<(DesignMatrix, DesignMatrix, Option<StandardizationParams>)> {
    let train = x.select_rows(train_idx);
    let test = x.select_rows(test_idx);
    if already_standardized {
        return Ok((train, test, None));
    }
    let scaler = StandardizationParams::fit(&train)?;
    Ok((scaler.apply(&train)?, scaler.apply(&test)?, Some(scaler)))
}
