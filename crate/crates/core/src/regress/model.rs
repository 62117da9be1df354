use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::forest::{fit_forest, ErtParams, Tree};
use super::linear::fit_mlr;
use super::mlp::{train_mlp, MlpParams, MlpTrace, Network};
use super::DesignMatrix;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegressorKind {
    Mlr,
    Mlp,
    Ert,
}

impl RegressorKind {
    pub const ALL: [RegressorKind; 3] = [RegressorKind::Ert, RegressorKind::Mlp, RegressorKind::Mlr];

    pub fn name(self) -> &'static str {
        match self {
            RegressorKind::Mlr => "mlr",
            RegressorKind::Mlp => "mlp",
            RegressorKind::Ert => "ert",
        }
    }
}

impl fmt::Display for RegressorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegressorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mlr" => Ok(RegressorKind::Mlr),
            "mlp" => Ok(RegressorKind::Mlp),
            "ert" => Ok(RegressorKind::Ert),
            _ => Err(Error::InvalidArgument(format!("unknown regressor `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlrParams {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegressorParams {
    Mlr(MlrParams),
    Mlp(MlpParams),
    Ert(ErtParams),
}

impl RegressorParams {
    pub fn default_for(kind: RegressorKind) -> Self {
        match kind {
            RegressorKind::Mlr => RegressorParams::Mlr(MlrParams::default()),
            RegressorKind::Mlp => RegressorParams::Mlp(MlpParams::default()),
            RegressorKind::Ert => RegressorParams::Ert(ErtParams::default()),
        }
    }

    pub fn kind(&self) -> RegressorKind {
        match self {
            RegressorParams::Mlr(_) => RegressorKind::Mlr,
            RegressorParams::Mlp(_) => RegressorKind::Mlp,
            RegressorParams::Ert(_) => RegressorKind::Ert,
        }
    }

    /// Overrides one named hyperparameter with a JSON value.
    pub fn with(&self, name: &str, value: &serde_json::Value) -> Result<Self> {
        let mut json = serde_json::to_value(self)?;
        let fields = json.as_object_mut().expect("params serialize to an object");
        if name == "kind" || !fields.contains_key(name) {
            return Err(Error::InvalidArgument(format!(
                "{} has no hyperparameter `{name}`",
                self.kind()
            )));
        }
        fields.insert(name.to_string(), value.clone());
        serde_json::from_value(json)
            .map_err(|e| Error::InvalidArgument(format!("bad value {value} for `{name}`: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelBody {
    Mlr { intercept: f64, coefficients: Vec<f64> },
    Mlp { network: Network, trace: MlpTrace },
    Ert { trees: Vec<Tree>, importance: Vec<f64> },
}

/// A trained regressor with the settings that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub format_version: u32,
    pub params: RegressorParams,
    pub seed: u64,
    pub feature_names: Vec<String>,
    pub n_train: usize,
    pub body: ModelBody,
}

pub fn fit(params: &RegressorParams, x: &DesignMatrix, seed: u64) -> Result<FittedModel> {
    let body = match params {
        RegressorParams::Mlr(_) => {
            let (intercept, coefficients) = fit_mlr(x)?;
            ModelBody::Mlr {
                intercept,
                coefficients,
            }
        }
        RegressorParams::Mlp(p) => {
            let (network, trace) = train_mlp(x, p, seed)?;
            if !trace.converged {
                log::debug!("mlp stopped at the {}-epoch cap", trace.epochs);
            }
            ModelBody::Mlp { network, trace }
        }
        RegressorParams::Ert(p) => {
            let forest = fit_forest(x, p, seed)?;
            ModelBody::Ert {
                trees: forest.trees,
                importance: forest.importance,
            }
        }
    };
    Ok(FittedModel {
        format_version: MODEL_FORMAT_VERSION,
        params: params.clone(),
        seed,
        feature_names: x.feature_names().to_vec(),
        n_train: x.n(),
        body,
    })
}

impl FittedModel {
    pub fn kind(&self) -> RegressorKind {
        self.params.kind()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        match &self.body {
            ModelBody::Mlr {
                intercept,
                coefficients,
            } => intercept + coefficients.iter().zip(x).map(|(c, v)| c * v).sum::<f64>(),
            ModelBody::Mlp { network, .. } => network.predict(x),
            ModelBody::Ert { trees, .. } => trees.iter().map(|t| t.predict(x)).sum::<f64>() / trees.len() as f64,
        }
    }

    pub fn predict(&self, x: &DesignMatrix) -> Result<Vec<f64>> {
        if x.p() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: x.p(),
            });
        }
        Ok(x.rows().map(|r| self.predict_row(r)).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: FittedModel = serde_json::from_str(text)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported model format version {}",
                model.format_version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}
