//! Regressors, standardization, R², feature importance and grid search.
//!
//! [`fit`] dispatches on [`RegressorParams`] to ordinary least squares
//! (`mlr`), a tanh multilayer perceptron (`mlp`) or extremely randomized
//! trees (`ert`). Every fit is deterministic given its seed, and a
//! [`FittedModel`] round-trips exactly through JSON.

mod design;
pub mod forest;
mod grid;
mod importance;
mod linear;
pub mod mlp;
mod model;

pub use design::{standardize, DesignMatrix, StandardizationParams};
pub use forest::{ErtParams, Node, Tree};
pub use grid::{grid_candidates, grid_search, Grid, GridResult, Objective};
pub use importance::{importance, ImportanceMethod, ImportanceReport, PERMUTATION_REPEATS};
pub use mlp::{MlpParams, MlpTrace, Network};
pub use model::{fit, FittedModel, MlrParams, ModelBody, RegressorKind, RegressorParams, MODEL_FORMAT_VERSION};

use crate::error::{Error, Result};

/// `1 − SS_res / SS_tot`.
pub fn r_squared(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: y_hat.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::InsufficientRows {
            needed: 2,
            available: y.len(),
        });
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if !(ss_tot > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]], y: &[f64]) -> DesignMatrix {
        let names = (0..rows.first().map_or(0, |r| r.len())).map(|j| format!("x{j}")).collect();
        DesignMatrix::new(names, rows.iter().map(|r| r.to_vec()).collect(), y.to_vec()).unwrap()
    }

    #[test]
    fn r_squared_cases() {
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert!((r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(r_squared(&[4.0, 4.0], &[1.0, 2.0]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn mlr_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.7 - 2.0).collect();
        let rows: Vec<&[f64]> = xs.iter().map(std::slice::from_ref).collect();
        let y: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let m = fit(&RegressorParams::Mlr(MlrParams {}), &matrix(&rows, &y), 0).unwrap();
        let ModelBody::Mlr {
            intercept,
            coefficients,
        } = &m.body
        else {
            panic!()
        };
        assert!((intercept - 1.0).abs() < 1e-12 && (coefficients[0] - 2.0).abs() < 1e-12);
        assert!((r_squared(&y, &m.predict(&matrix(&rows, &y)).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mlr_zero_row_zero_intercept() {
        let x = matrix(&[&[-1.0, 2.0], &[1.0, -2.0], &[0.5, 0.5], &[-0.5, -0.5]], &[-3.0, 3.0, 0.5, -0.5]);
        let m = fit(&RegressorParams::Mlr(MlrParams {}), &x, 0).unwrap();
        assert!(m.predict_row(&[0.0, 0.0]).abs() < 1e-12);
    }

    #[test]
    fn ert_constant_target() {
        let x = matrix(&[&[0.0], &[1.0], &[2.0], &[3.0]], &[7.5; 4]);
        let m = fit(&RegressorParams::Ert(ErtParams::default()), &x, 3).unwrap();
        assert!(m.predict(&x).unwrap().iter().all(|&p| p == 7.5));
        let report = importance(&m, &x, ImportanceMethod::Impurity, 0).unwrap();
        assert_eq!(report.values, vec![0.0]);
    }

    #[test]
    fn impurity_needs_ert() {
        let x = matrix(&[&[0.0], &[1.0], &[2.0]], &[0.0, 1.0, 2.0]);
        let m = fit(&RegressorParams::Mlr(MlrParams {}), &x, 0).unwrap();
        assert!(matches!(
            importance(&m, &x, ImportanceMethod::Impurity, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn params_override() {
        let p = RegressorParams::default_for(RegressorKind::Ert);
        let q = p.with("n_trees", &serde_json::json!(7)).unwrap();
        assert!(matches!(q, RegressorParams::Ert(ErtParams { n_trees: 7, .. })));
        assert!(p.with("nope", &serde_json::json!(1)).is_err());
        assert!(p.with("n_trees", &serde_json::json!("x")).is_err());
    }

    #[test]
    fn dimension_checked_on_predict() {
        let x = matrix(&[&[0.0], &[1.0], &[2.0]], &[0.0, 1.0, 2.0]);
        let m = fit(&RegressorParams::Mlr(MlrParams {}), &x, 0).unwrap();
        let wide = matrix(&[&[0.0, 1.0], &[1.0, 1.0]], &[0.0, 1.0]);
        assert!(matches!(m.predict(&wide), Err(Error::DimensionMismatch { .. })));
    }
}
