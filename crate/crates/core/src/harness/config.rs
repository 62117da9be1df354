use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::{load_simlex, RatingDataset};
use super::experiment::ExperimentConfig;
use super::features::Providers;
use super::registry::{build_registry, expand_feature_group, Availability, ModelSpec};
use crate::error::{Error, Result};
use crate::qna::{
    ApLexicon, DifferenceMode, DistinctivenessIndex, FrequencyLexicon, NormLexicon, QnaResources, ReferenceList,
    SonorityTable,
};
use crate::regress::RegressorKind;
use crate::table::read_delimited;
use crate::taxonomy::{compute_ic, load_counts_csv, load_taxonomy, TaxonomyFormat};
use crate::vsm::read_vec_file;

/// Overrides `experiment.seed` when set.
pub const SEED_ENV: &str = "WORDSIM_SEED";

/// Embedding slot whose vectors back distinctiveness when no dedicated file
/// is configured.
pub const DEFAULT_DIST_SLOT: &str = "w2vwiki300";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaxonomySource {
    pub path: PathBuf,
    #[serde(default = "default_format")]
    pub format: TaxonomyFormat,
}

fn default_format() -> TaxonomyFormat {
    TaxonomyFormat::Tsv
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourceConfig {
    pub taxonomy: Option<TaxonomySource>,
    /// `word,count` CSV for information content.
    pub counts: Option<PathBuf>,
    /// Vector files keyed by embedding slot.
    pub embeddings: BTreeMap<String, PathBuf>,
    /// Vector file for distinctiveness; defaults to the `w2vwiki300` slot.
    pub dist_embedding: Option<PathBuf>,
    /// One word per line. Without it distinctiveness averages over the whole
    /// vector file.
    pub dist_sample: Option<PathBuf>,
    pub norms: Option<PathBuf>,
    pub frequency: Option<PathBuf>,
    pub sonority: Option<PathBuf>,
    pub ap: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    /// `word,nsyl` CSV overriding the spelling heuristic.
    pub syllables: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomModel {
    pub id: u32,
    pub name: String,
    /// Feature names or group names (`typeI`, `typeII`, `surf`, `AS`, `AEST`).
    pub features: Vec<String>,
    #[serde(default = "all_regressors")]
    pub regressors: Vec<RegressorKind>,
}

fn all_regressors() -> Vec<RegressorKind> {
    RegressorKind::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSelection {
    /// `"all"`
    Named(String),
    Ids(Vec<u32>),
    Detailed {
        #[serde(default)]
        ids: Vec<u32>,
        #[serde(default)]
        custom: Vec<CustomModel>,
    },
}

impl Default for ModelSelection {
    fn default() -> Self {
        ModelSelection::Named("all".into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// Models whose scatter data is written as `scatter_<id>.csv`.
    pub scatter: Vec<u32>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("results"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
            scatter: Vec::new(),
        }
    }
}

/// A complete run description. Relative paths are resolved against the
/// directory of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    #[serde(default)]
    pub resources: ResourceConfig,
    pub dataset: PathBuf,
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub models: ModelSelection,
    #[serde(default)]
    pub difference: DifferenceMode,
    #[serde(default)]
    pub output: OutputConfig,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl WorkbenchConfig {
    /// Parses a JSON config, resolves its paths and applies [`SEED_ENV`].
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config: WorkbenchConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve_paths(base);
        if let Ok(seed) = std::env::var(SEED_ENV) {
            config.experiment.seed = seed
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}=`{seed}` is not an unsigned integer")))?;
        }
        config.experiment.validate()?;
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let r = &mut self.resources;
        if let Some(t) = &mut r.taxonomy {
            resolve(base, &mut t.path);
        }
        for p in r.embeddings.values_mut() {
            resolve(base, p);
        }
        for p in [
            &mut r.counts,
            &mut r.dist_embedding,
            &mut r.dist_sample,
            &mut r.norms,
            &mut r.frequency,
            &mut r.sonority,
            &mut r.ap,
            &mut r.reference,
            &mut r.syllables,
        ]
        .into_iter()
        .flatten()
        {
            resolve(base, p);
        }
        resolve(base, &mut self.dataset);
        resolve(base, &mut self.output.dir);
    }

    pub fn load_dataset(&self) -> Result<RatingDataset> {
        load_simlex(&self.dataset)
    }

    /// Loads every configured resource. Vector files are filtered to the
    /// dataset's words.
    pub fn load_providers(&self, dataset: &RatingDataset) -> Result<Providers> {
        let r = &self.resources;
        let words: HashSet<String> = dataset.words().into_iter().collect();
        let taxonomy = r.taxonomy.as_ref().map(|t| load_taxonomy(&t.path, t.format)).transpose()?;
        let ic = match (&taxonomy, &r.counts) {
            (Some(t), Some(c)) => Some(compute_ic(t, &load_counts_csv(c)?)?),
            (None, Some(_)) => {
                log::warn!("counts given without a taxonomy; information content is unavailable");
                None
            }
            _ => None,
        };
        let mut embeddings = BTreeMap::new();
        for (slot, path) in &r.embeddings {
            embeddings.insert(slot.clone(), read_vec_file(path, Some(&words))?.space);
        }

        let dist_path = r.dist_embedding.as_ref().or_else(|| r.embeddings.get(DEFAULT_DIST_SLOT));
        let distinctiveness = match (dist_path, &r.dist_sample) {
            (Some(p), Some(sample)) => {
                let sample = read_word_list(sample)?;
                let mut keep = words.clone();
                keep.extend(sample.iter().cloned());
                let space = read_vec_file(p, Some(&keep))?.space;
                Some(DistinctivenessIndex::from_sample(space, &sample))
            }
            (Some(p), None) => Some(DistinctivenessIndex::from_scan(read_vec_file(p, Some(&words))?)),
            (None, Some(_)) => {
                return Err(Error::MissingResource(
                    "dist_sample needs dist_embedding or a w2vwiki300 embedding".into(),
                ))
            }
            (None, None) => None,
        };

        let qna = QnaResources {
            frequency: r.frequency.as_ref().map(FrequencyLexicon::load).transpose()?,
            norms: r.norms.as_ref().map(NormLexicon::load).transpose()?,
            sonority: r.sonority.as_ref().map(SonorityTable::load).transpose()?.unwrap_or_default(),
            ap: r.ap.as_ref().map(ApLexicon::load).transpose()?,
            reference: r.reference.as_ref().map(ReferenceList::load).transpose()?,
            distinctiveness,
            syllables: r.syllables.as_ref().map(|p| load_syllables(p)).transpose()?,
        };
        Ok(Providers {
            taxonomy,
            ic,
            embeddings,
            qna,
        })
    }

    /// The selected standard models plus any custom ones, each checked
    /// against `available`.
    pub fn model_specs(&self, available: &Availability) -> Result<Vec<ModelSpec>> {
        let registry = build_registry(available);
        let (ids, custom): (Vec<u32>, &[CustomModel]) = match &self.models {
            ModelSelection::Named(s) if s == "all" => (registry.iter().map(|m| m.id).collect(), &[]),
            ModelSelection::Named(s) => {
                return Err(Error::InvalidArgument(format!(
                    "models must be \"all\", a list of ids or {{ids, custom}}, not `{s}`"
                )))
            }
            ModelSelection::Ids(ids) => (ids.clone(), &[]),
            ModelSelection::Detailed { ids, custom } => (ids.clone(), custom),
        };
        let mut seen = BTreeSet::new();
        let mut specs = Vec::new();
        for id in ids {
            let spec = registry
                .iter()
                .find(|m| m.id == id)
                .ok_or_else(|| Error::InvalidArgument(format!("no standard model with id {id}")))?;
            if !seen.insert(id) {
                return Err(Error::InvalidArgument(format!("model {id} selected twice")));
            }
            specs.push(spec.clone());
        }
        for c in custom {
            if !seen.insert(c.id) {
                return Err(Error::InvalidArgument(format!("model id {} is used twice", c.id)));
            }
            let mut features = Vec::new();
            for f in &c.features {
                features.extend(expand_feature_group(f)?);
            }
            let mut spec = ModelSpec::new(c.id, &c.name, features, &c.regressors)?;
            available.check(&mut spec);
            specs.push(spec);
        }
        Ok(specs)
    }
}

fn read_word_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

fn load_syllables(path: &Path) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for (line, r) in read_delimited(path, b',', &["word", "nsyl"])? {
        let n: f64 = r[1]
            .parse()
            .ok()
            .filter(|n: &f64| n.is_finite() && *n >= 1.0)
            .ok_or_else(|| Error::parse(path, line, format!("bad syllable count `{}`", r[1])))?;
        out.insert(r[0].to_lowercase(), n);
    }
    Ok(out)
}
