//! Per-word psycholinguistic features and their pairwise differences.
//!
//! Features group into three sets: surface (`nlet`, `logfZ`, `cvq`, `on`,
//! `nsyl`), affective-semantic (`val`, `aro`, `ima`, `dom`, `conc`, `dist`)
//! and aesthetic (`logfZ`, `val`, `sc`, `ap`). A feature that cannot be
//! computed from the supplied resources is reported as `None`, never imputed.

mod distinct;
mod lexicon;
mod pair;
mod surface;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distinct::{distinctiveness, DistinctivenessIndex};
pub use lexicon::{ApLexicon, FrequencyLexicon, NormLexicon, Norms, ReferenceList, SonorityTable};
pub use pair::{pair_features, DifferenceMode, PairFeatureVector, QnaResources};
pub use surface::{aesthetic_features, count_syllables, norm_features, surface_features};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QnaFeature {
    #[serde(rename = "nlet")]
    Nlet,
    #[serde(rename = "nsyl")]
    Nsyl,
    #[serde(rename = "on")]
    On,
    #[serde(rename = "logfZ")]
    LogFz,
    #[serde(rename = "cvq")]
    Cvq,
    #[serde(rename = "val")]
    Val,
    #[serde(rename = "aro")]
    Aro,
    #[serde(rename = "ima")]
    Ima,
    #[serde(rename = "dom")]
    Dom,
    #[serde(rename = "conc")]
    Conc,
    #[serde(rename = "dist")]
    Dist,
    #[serde(rename = "sc")]
    Sc,
    #[serde(rename = "ap")]
    Ap,
}

impl QnaFeature {
    pub const ALL: [QnaFeature; 13] = [
        QnaFeature::Nlet,
        QnaFeature::Nsyl,
        QnaFeature::On,
        QnaFeature::LogFz,
        QnaFeature::Cvq,
        QnaFeature::Val,
        QnaFeature::Aro,
        QnaFeature::Ima,
        QnaFeature::Dom,
        QnaFeature::Conc,
        QnaFeature::Dist,
        QnaFeature::Sc,
        QnaFeature::Ap,
    ];

    pub const SURFACE: [QnaFeature; 5] = [
        QnaFeature::Nlet,
        QnaFeature::LogFz,
        QnaFeature::Cvq,
        QnaFeature::On,
        QnaFeature::Nsyl,
    ];

    pub const AFFECTIVE_SEMANTIC: [QnaFeature; 6] = [
        QnaFeature::Val,
        QnaFeature::Aro,
        QnaFeature::Ima,
        QnaFeature::Dom,
        QnaFeature::Conc,
        QnaFeature::Dist,
    ];

    pub const AESTHETIC: [QnaFeature; 4] = [QnaFeature::LogFz, QnaFeature::Val, QnaFeature::Sc, QnaFeature::Ap];

    pub fn name(self) -> &'static str {
        match self {
            QnaFeature::Nlet => "nlet",
            QnaFeature::Nsyl => "nsyl",
            QnaFeature::On => "on",
            QnaFeature::LogFz => "logfZ",
            QnaFeature::Cvq => "cvq",
            QnaFeature::Val => "val",
            QnaFeature::Aro => "aro",
            QnaFeature::Ima => "ima",
            QnaFeature::Dom => "dom",
            QnaFeature::Conc => "conc",
            QnaFeature::Dist => "dist",
            QnaFeature::Sc => "sc",
            QnaFeature::Ap => "ap",
        }
    }
}

impl fmt::Display for QnaFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QnaFeature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QnaFeature::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown feature `{s}`")))
    }
}

/// All thirteen per-word features; `None` marks a feature that could not be
/// computed from the available resources.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WordFeatures {
    pub nlet: Option<f64>,
    pub nsyl: Option<f64>,
    pub on: Option<f64>,
    pub logfz: Option<f64>,
    pub cvq: Option<f64>,
    pub val: Option<f64>,
    pub aro: Option<f64>,
    pub ima: Option<f64>,
    pub dom: Option<f64>,
    pub conc: Option<f64>,
    pub dist: Option<f64>,
    pub sc: Option<f64>,
    pub ap: Option<f64>,
}

impl WordFeatures {
    pub fn get(&self, feature: QnaFeature) -> Option<f64> {
        match feature {
            QnaFeature::Nlet => self.nlet,
            QnaFeature::Nsyl => self.nsyl,
            QnaFeature::On => self.on,
            QnaFeature::LogFz => self.logfz,
            QnaFeature::Cvq => self.cvq,
            QnaFeature::Val => self.val,
            QnaFeature::Aro => self.aro,
            QnaFeature::Ima => self.ima,
            QnaFeature::Dom => self.dom,
            QnaFeature::Conc => self.conc,
            QnaFeature::Dist => self.dist,
            QnaFeature::Sc => self.sc,
            QnaFeature::Ap => self.ap,
        }
    }

    pub fn is_available(&self, feature: QnaFeature) -> bool {
        self.get(feature).is_some()
    }

    /// Fills fields that are `None` here from `other`.
    pub fn merge(&mut self, other: &WordFeatures) {
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = other.$f; } )* };
        }
        fill!(nlet, nsyl, on, logfz, cvq, val, aro, ima, dom, conc, dist, sc, ap);
    }
}
