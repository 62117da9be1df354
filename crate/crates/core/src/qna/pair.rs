use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::surface::{aesthetic_features, norm_features, surface_features};
use super::{ApLexicon, DistinctivenessIndex, FrequencyLexicon, NormLexicon, QnaFeature, ReferenceList, SonorityTable, WordFeatures};

/// Everything the per-word extractors may draw on. Absent resources leave
/// the dependent features masked.
#[derive(Clone, Debug, Default)]
pub struct QnaResources {
    pub frequency: Option<FrequencyLexicon>,
    pub norms: Option<NormLexicon>,
    pub sonority: SonorityTable,
    pub ap: Option<ApLexicon>,
    pub reference: Option<ReferenceList>,
    pub distinctiveness: Option<DistinctivenessIndex>,
    /// Syllable counts that take precedence over the spelling heuristic.
    pub syllables: Option<HashMap<String, f64>>,
}

impl QnaResources {
    /// Whether `feature` can be computed for some word with these resources.
    pub fn supports(&self, feature: QnaFeature) -> bool {
        use QnaFeature::*;
        match feature {
            Nlet | Nsyl | Cvq | Sc => true,
            On => self.reference.is_some(),
            LogFz => self.frequency.is_some(),
            Val | Aro | Ima | Dom | Conc => self.norms.is_some(),
            Dist => self.distinctiveness.is_some(),
            Ap => self.ap.is_some() || self.norms.is_some(),
        }
    }

    /// All thirteen features for one word. Words that are not purely
    /// alphabetic keep only their norm and distinctiveness values.
    pub fn word_features(&self, word: &str) -> WordFeatures {
        let word = word.trim().to_lowercase();
        let mut f = self.norms.as_ref().map(|n| norm_features(&word, n)).unwrap_or_default();
        if let Ok(s) = surface_features(&word, self.frequency.as_ref(), self.reference.as_ref()) {
            f.merge(&s);
        }
        if let Ok(a) = aesthetic_features(
            &word,
            &self.sonority,
            self.ap.as_ref(),
            self.frequency.as_ref(),
            self.norms.as_ref(),
        ) {
            f.merge(&a);
        }
        if let Some(n) = self.syllables.as_ref().and_then(|s| s.get(&word)) {
            f.nsyl = Some(*n);
        }
        f.dist = self.distinctiveness.as_ref().and_then(|d| d.get(&word).ok());
        f
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DifferenceMode {
    /// `|f(w1) − f(w2)|`, symmetric in the word order.
    #[default]
    Absolute,
    /// `f(w1) − f(w2)`.
    Signed,
}

impl DifferenceMode {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            DifferenceMode::Absolute => (a - b).abs(),
            DifferenceMode::Signed => a - b,
        }
    }
}

/// Named pair-level features; `None` marks a feature missing for either word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFeatureVector {
    pub w1: String,
    pub w2: String,
    pub names: Vec<String>,
    pub values: Vec<Option<f64>>,
}

impl PairFeatureVector {
    pub fn new(w1: &str, w2: &str) -> Self {
        PairFeatureVector {
            w1: w1.to_string(),
            w2: w2.to_string(),
            names: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Differences of already extracted word features.
    pub fn from_word_features(
        (w1, f1): (&str, &WordFeatures),
        (w2, f2): (&str, &WordFeatures),
        features: &[QnaFeature],
        mode: DifferenceMode,
    ) -> Self {
        let mut v = PairFeatureVector::new(w1, w2);
        for &feature in features {
            let d = f1.get(feature).zip(f2.get(feature)).map(|(a, b)| mode.apply(a, b));
            v.push(feature.name(), d);
        }
        v
    }

    /// Appends a pair-level score such as a taxonomy metric or a cosine.
    pub fn push(&mut self, name: &str, value: Option<f64>) {
        self.names.push(name.to_string());
        self.values.push(value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).and_then(|i| self.values[i])
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

pub fn pair_features(
    w1: &str,
    w2: &str,
    features: &[QnaFeature],
    resources: &QnaResources,
    mode: DifferenceMode,
) -> PairFeatureVector {
    let f1 = resources.word_features(w1);
    let f2 = resources.word_features(w2);
    PairFeatureVector::from_word_features((w1, &f1), (w2, &f2), features, mode)
}
