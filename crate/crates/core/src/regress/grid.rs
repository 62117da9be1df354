use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::model::{fit, RegressorParams};
use super::{r_squared, DesignMatrix};
use crate::error::{Error, Result};
use crate::rng;

/// Hyperparameter names with their candidate values, in enumeration order.
pub type Grid = Vec<(String, Vec<serde_json::Value>)>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Objective {
    /// R² of a fit on all rows, scored on the same rows.
    #[default]
    TrainR2,
    /// Mean held-out R² over shuffled k folds.
    CrossValidated { folds: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: RegressorParams,
    pub best_score: f64,
    pub evaluated: Vec<(RegressorParams, f64)>,
}

/// Every combination of `grid` applied on top of `base`. The last name
/// varies fastest.
pub fn grid_candidates(base: &RegressorParams, grid: &Grid) -> Result<Vec<RegressorParams>> {
    if grid.is_empty() || grid.iter().any(|(_, values)| values.is_empty()) {
        return Err(Error::InvalidArgument("empty hyperparameter grid".into()));
    }
    let mut out = vec![base.clone()];
    for (name, values) in grid {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for params in &out {
            for v in values {
                next.push(params.with(name, v)?);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Scores each candidate and returns the best; ties keep the earlier one.
pub fn grid_search(
    base: &RegressorParams,
    x: &DesignMatrix,
    grid: &Grid,
    objective: Objective,
    seed: u64,
) -> Result<GridResult> {
    let candidates = grid_candidates(base, grid)?;
    if objective == Objective::TrainR2 {
        log::warn!("grid search scored on the training rows; the selected setting has seen the test data");
    }
    let mut evaluated = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    for (k, params) in candidates.into_iter().enumerate() {
        let score = score(&params, x, objective, seed)?;
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((k, score));
        }
        evaluated.push((params, score));
    }
    let (k, best_score) = best.expect("non-empty grid");
    Ok(GridResult {
        best: evaluated[k].0.clone(),
        best_score,
        evaluated,
    })
}

fn score(params: &RegressorParams, x: &DesignMatrix, objective: Objective, seed: u64) -> Result<f64> {
    match objective {
        Objective::TrainR2 => {
            let model = fit(params, x, seed)?;
            r_squared(x.target(), &model.predict(x)?)
        }
        Objective::CrossValidated { folds } => {
            if folds < 2 || folds > x.n() / 2 {
                return Err(Error::InvalidArgument(format!("{folds} folds for {} rows", x.n())));
            }
            let mut order: Vec<usize> = (0..x.n()).collect();
            order.shuffle(&mut rng::rng(seed));
            let mut total = 0.0;
            for f in 0..folds {
                let (test, train): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
                    order.iter().copied().enumerate().partition(|(i, _)| i % folds == f);
                let test: Vec<usize> = test.into_iter().map(|(_, r)| r).collect();
                let train: Vec<usize> = train.into_iter().map(|(_, r)| r).collect();
                let model = fit(params, &x.select_rows(&train), rng::derive(seed, f as u64))?;
                let held = x.select_rows(&test);
                total += r_squared(held.target(), &model.predict(&held)?)?;
            }
            Ok(total / folds as f64)
        }
    }
}
