use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qna::QnaFeature;
use crate::regress::{RegressorKind, RegressorParams};
use crate::taxonomy::Metric;

/// Embedding slots of the standard registry, in model order 8-11.
pub const EMBEDDING_SLOTS: [&str; 4] = ["LSAb10", "LSAb100", "w2vb200", "w2vwiki300"];

/// One predictor column: a taxonomy metric, the cosine in a named
/// embedding space, or the pairwise difference of a QNA feature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeatureSource {
    Metric(Metric),
    Embedding(String),
    Qna(QnaFeature),
}

impl FeatureSource {
    pub fn name(&self) -> String {
        match self {
            FeatureSource::Metric(m) => m.name().to_string(),
            FeatureSource::Embedding(slot) => slot.clone(),
            FeatureSource::Qna(f) => f.name().to_string(),
        }
    }
}

impl fmt::Display for FeatureSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `wn-*` names a metric, a QNA symbol names that feature, anything else an
/// embedding slot.
impl FromStr for FeatureSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty feature name".into()));
        }
        if s.starts_with("wn-") {
            return s.parse().map(FeatureSource::Metric);
        }
        if let Ok(f) = s.parse() {
            return Ok(FeatureSource::Qna(f));
        }
        Ok(FeatureSource::Embedding(s.to_string()))
    }
}

impl From<FeatureSource> for String {
    fn from(f: FeatureSource) -> String {
        f.name()
    }
}

impl TryFrom<String> for FeatureSource {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Expands a feature or group name: `typeI`, `typeII`, `surf`, `AS`, `AEST`
/// or a single feature.
pub fn expand_feature_group(name: &str) -> Result<Vec<FeatureSource>> {
    Ok(match name.trim().to_ascii_lowercase().as_str() {
        "typei" | "typeiall" => Metric::ALL.map(FeatureSource::Metric).to_vec(),
        "typeii" | "typeiiall" => EMBEDDING_SLOTS.map(|s| FeatureSource::Embedding(s.to_string())).to_vec(),
        "surf" | "surface" => QnaFeature::SURFACE.map(FeatureSource::Qna).to_vec(),
        "as" | "affective-semantic" => QnaFeature::AFFECTIVE_SEMANTIC.map(FeatureSource::Qna).to_vec(),
        "aest" | "aesthetic" => QnaFeature::AESTHETIC.map(FeatureSource::Qna).to_vec(),
        _ => vec![name.parse()?],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", content = "reason", rename_all = "lowercase")]
pub enum SpecStatus {
    Ready,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: u32,
    pub name: String,
    pub features: Vec<FeatureSource>,
    pub regressors: Vec<RegressorParams>,
    pub status: SpecStatus,
}

impl ModelSpec {
    /// Deduplicates `features` keeping first occurrences.
    pub fn new(id: u32, name: &str, features: Vec<FeatureSource>, regressors: &[RegressorKind]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let features: Vec<FeatureSource> = features.into_iter().filter(|f| seen.insert(f.clone())).collect();
        if features.is_empty() {
            return Err(Error::InvalidArgument(format!("model {id} has no features")));
        }
        if regressors.is_empty() {
            return Err(Error::InvalidArgument(format!("model {id} has no regressors")));
        }
        Ok(ModelSpec {
            id,
            name: name.to_string(),
            features,
            regressors: regressors.iter().map(|&k| RegressorParams::default_for(k)).collect(),
            status: SpecStatus::Ready,
        })
    }

    pub fn is_ready(&self) -> bool {
        self.status == SpecStatus::Ready
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(FeatureSource::name).collect()
    }
}

/// Which feature sources the loaded resources can provide.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Availability {
    pub taxonomy: bool,
    pub information_content: bool,
    pub embeddings: BTreeSet<String>,
    pub qna: BTreeSet<QnaFeature>,
}

impl Availability {
    pub fn provides(&self, source: &FeatureSource) -> bool {
        match source {
            FeatureSource::Metric(m) => self.taxonomy && (!m.needs_ic() || self.information_content),
            FeatureSource::Embedding(slot) => self.embeddings.contains(slot),
            FeatureSource::Qna(f) => self.qna.contains(f),
        }
    }

    /// Marks `spec` skipped when any of its sources is unavailable.
    pub fn check(&self, spec: &mut ModelSpec) {
        let missing: Vec<String> = spec.features.iter().filter(|f| !self.provides(f)).map(|f| f.name()).collect();
        spec.status = if missing.is_empty() {
            SpecStatus::Ready
        } else {
            SpecStatus::Skipped(format!("unavailable: {}", missing.join(", ")))
        };
    }
}

/// The 28 standard models. Single-feature models use MLR; combined models
/// use ERT, MLP and MLR.
pub fn build_registry(available: &Availability) -> Vec<ModelSpec> {
    use RegressorKind::*;
    let single = [Mlr];
    let combined = [Ert, Mlp, Mlr];
    let group = |names: &[&str]| -> Vec<FeatureSource> {
        names
            .iter()
            .flat_map(|n| expand_feature_group(n).expect("built-in group"))
            .collect()
    };

    let mut specs = Vec::with_capacity(28);
    for (k, m) in Metric::ALL.iter().enumerate() {
        specs.push((k as u32 + 1, m.name().to_string(), vec![FeatureSource::Metric(*m)], &single[..]));
    }
    specs.push((7, "Type Iall".into(), group(&["typeI"]), &combined[..]));
    for (k, slot) in EMBEDDING_SLOTS.iter().enumerate() {
        specs.push((k as u32 + 8, slot.to_string(), vec![FeatureSource::Embedding(slot.to_string())], &single[..]));
    }
    specs.push((12, "Type IIall".into(), group(&["typeII"]), &combined[..]));
    let qna: [(&str, &[&str]); 7] = [
        ("Surf", &["surf"]),
        ("AS", &["AS"]),
        ("AEST", &["AEST"]),
        ("Surf+AS", &["surf", "AS"]),
        ("Surf+AEST", &["surf", "AEST"]),
        ("AS+AEST", &["AS", "AEST"]),
        ("Surf+AS+AEST", &["surf", "AS", "AEST"]),
    ];
    for (k, (name, groups)) in qna.iter().enumerate() {
        specs.push((k as u32 + 13, name.to_string(), group(groups), &combined[..]));
    }
    let hybrids: [(&str, &[&str]); 9] = [
        ("Type Iall+Surf", &["typeI", "surf"]),
        ("Type Iall+AS", &["typeI", "AS"]),
        ("Type Iall+Surf+AS", &["typeI", "surf", "AS"]),
        ("Type Iall+Surf+AS+AEST", &["typeI", "surf", "AS", "AEST"]),
        ("Type IIall+Surf", &["typeII", "surf"]),
        ("Type IIall+AS", &["typeII", "AS"]),
        ("Type IIall+Surf+AS", &["typeII", "surf", "AS"]),
        ("Type IIall+Surf+AS+AEST", &["typeII", "surf", "AS", "AEST"]),
        ("Type Iall+Type IIall+Surf+AS+AEST", &["typeI", "typeII", "surf", "AS", "AEST"]),
    ];
    for (k, (name, groups)) in hybrids.iter().enumerate() {
        specs.push((k as u32 + 20, name.to_string(), group(groups), &combined[..]));
    }

    specs
        .into_iter()
        .map(|(id, name, features, regressors)| {
            let mut spec = ModelSpec::new(id, &name, features, regressors).expect("non-empty built-in spec");
            available.check(&mut spec);
            spec
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn everything() -> Availability {
        Availability {
            taxonomy: true,
            information_content: true,
            embeddings: EMBEDDING_SLOTS.iter().map(|s| s.to_string()).collect(),
            qna: QnaFeature::ALL.into_iter().collect(),
        }
    }

    #[test]
    fn standard_sizes() {
        let specs = build_registry(&everything());
        assert_eq!(specs.len(), 28);
        let sizes: Vec<usize> = specs.iter().map(|s| s.features.len()).collect();
        assert_eq!(
            sizes,
            [1, 1, 1, 1, 1, 1, 6, 1, 1, 1, 1, 4, 5, 6, 4, 11, 8, 9, 13, 11, 12, 17, 19, 9, 10, 15, 17, 23]
        );
        assert!(specs.iter().all(ModelSpec::is_ready));
        assert_eq!(specs[12].feature_names(), ["nlet", "logfZ", "cvq", "on", "nsyl"]);
        for s in &specs {
            let n = if s.features.len() == 1 { 1 } else { 3 };
            assert_eq!(s.regressors.len(), n, "model {}", s.id);
        }
    }

    #[test]
    fn missing_embeddings_skip_type_two() {
        let mut a = everything();
        a.embeddings.clear();
        let skipped: Vec<u32> = build_registry(&a).iter().filter(|s| !s.is_ready()).map(|s| s.id).collect();
        assert_eq!(skipped, [8, 9, 10, 11, 12, 24, 25, 26, 27, 28]);
    }

    #[test]
    fn missing_counts_skip_ic_metrics() {
        let mut a = everything();
        a.information_content = false;
        let skipped: Vec<u32> = build_registry(&a).iter().filter(|s| !s.is_ready()).map(|s| s.id).collect();
        assert_eq!(skipped, [4, 5, 6, 7, 20, 21, 22, 23, 28]);
    }

    #[test]
    fn source_names_parse() {
        assert_eq!("wn-lin".parse::<FeatureSource>().unwrap(), FeatureSource::Metric(Metric::Lin));
        assert_eq!("logfZ".parse::<FeatureSource>().unwrap(), FeatureSource::Qna(QnaFeature::LogFz));
        assert_eq!(
            "w2vb200".parse::<FeatureSource>().unwrap(),
            FeatureSource::Embedding("w2vb200".into())
        );
        assert!("wn-foo".parse::<FeatureSource>().is_err());
        let json = serde_json::to_string(&FeatureSource::Metric(Metric::Path)).unwrap();
        assert_eq!(json, "\"wn-path\"");
    }
}
