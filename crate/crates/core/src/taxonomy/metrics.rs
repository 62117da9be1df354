use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IcTable, Pos, Taxonomy};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Path,
    Lch,
    Wup,
    Res,
    Jcn,
    Lin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Similarity,
    Distance,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Path,
        Metric::Lch,
        Metric::Wup,
        Metric::Res,
        Metric::Jcn,
        Metric::Lin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Path => "wn-path",
            Metric::Lch => "wn-lch",
            Metric::Wup => "wn-wup",
            Metric::Res => "wn-res",
            Metric::Jcn => "wn-jcn",
            Metric::Lin => "wn-lin",
        }
    }

    /// Jiang-Conrath is a distance; everything else grows with similarity.
    pub fn polarity(self) -> Polarity {
        match self {
            Metric::Jcn => Polarity::Distance,
            _ => Polarity::Similarity,
        }
    }

    pub fn needs_ic(self) -> bool {
        matches!(self, Metric::Res | Metric::Jcn | Metric::Lin)
    }

    fn needs_path(self) -> bool {
        matches!(self, Metric::Path | Metric::Lch)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("wn-").unwrap_or(&key);
        Metric::ALL
            .into_iter()
            .find(|m| &m.name()[3..] == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: Metric,
    pub value: f64,
    pub polarity: Polarity,
}

impl MetricScore {
    fn new(metric: Metric, value: f64) -> Self {
        MetricScore {
            metric,
            value,
            polarity: metric.polarity(),
        }
    }

    /// True when `self` expresses more similarity than `other`.
    fn better_than(&self, other: &MetricScore) -> bool {
        match self.polarity {
            Polarity::Similarity => self.value > other.value,
            Polarity::Distance => self.value < other.value,
        }
    }
}

pub fn synset_similarity(
    metric: Metric,
    t: &Taxonomy,
    s1: &str,
    s2: &str,
    ic: Option<&IcTable>,
) -> Result<MetricScore> {
    let (i, j) = t.same_pos(s1, s2)?;
    let ic = check_ic(metric, ic)?;
    let d = metric.needs_path().then(|| t.path_between(i, j));
    Ok(MetricScore::new(metric, score(metric, t, i, j, d, ic)))
}

/// Best score over all same-POS synset pairs of two words: the maximum for
/// similarity metrics, the minimum for `jcn`.
pub fn word_similarity(
    metric: Metric,
    t: &Taxonomy,
    w1: &str,
    w2: &str,
    pos: Pos,
    ic: Option<&IcTable>,
) -> Result<MetricScore> {
    Ok(word_similarities(&[metric], t, w1, w2, pos, ic)?[0])
}

/// [`word_similarity`] for several metrics at once, sharing path searches.
pub fn word_similarities(
    metrics: &[Metric],
    t: &Taxonomy,
    w1: &str,
    w2: &str,
    pos: Pos,
    ic: Option<&IcTable>,
) -> Result<Vec<MetricScore>> {
    for &m in metrics {
        check_ic(m, ic)?;
    }
    let a = t.senses(w1, pos);
    if a.is_empty() {
        return Err(Error::OutOfVocabulary(w1.to_string()));
    }
    let b = t.senses(w2, pos);
    if b.is_empty() {
        return Err(Error::OutOfVocabulary(w2.to_string()));
    }

    let need_path = metrics.iter().any(|m| m.needs_path());
    let mut best: Vec<Option<MetricScore>> = vec![None; metrics.len()];
    for &i in a {
        let dists = need_path.then(|| t.distances_to(i, b));
        for (bj, &j) in b.iter().enumerate() {
            let d = dists.as_ref().map(|d| d[bj]);
            for (slot, &m) in best.iter_mut().zip(metrics) {
                let s = MetricScore::new(m, score(m, t, i, j, d, ic));
                if slot.as_ref().is_none_or(|cur| s.better_than(cur)) {
                    *slot = Some(s);
                }
            }
        }
    }
    Ok(best.into_iter().map(|s| s.expect("non-empty sense lists")).collect())
}

fn check_ic(metric: Metric, ic: Option<&IcTable>) -> Result<Option<&IcTable>> {
    if metric.needs_ic() && ic.is_none() {
        return Err(Error::MissingIc(metric.name()));
    }
    Ok(ic)
}

fn score(metric: Metric, t: &Taxonomy, i: usize, j: usize, d: Option<u32>, ic: Option<&IcTable>) -> f64 {
    let ic_of = |k: usize| ic.expect("checked by caller").value(k);
    match metric {
        Metric::Path => 1.0 / (f64::from(d.expect("path length")) + 1.0),
        Metric::Lch => {
            let max_depth = f64::from(t.max_depth(t.pos_of(i)));
            -((f64::from(d.expect("path length")) + 1.0) / (2.0 * max_depth)).ln()
        }
        Metric::Wup => {
            let l = t.lcs(i, j);
            2.0 * f64::from(t.depth_of(l)) / f64::from(t.depth_of(i) + t.depth_of(j))
        }
        Metric::Res => ic_of(t.lcs(i, j)),
        Metric::Jcn => {
            let l = t.lcs(i, j);
            // IC(L) <= min(IC(i), IC(j)), but rounding can leave -0.0 or -1e-16.
            (ic_of(i) + ic_of(j) - 2.0 * ic_of(l)).max(0.0)
        }
        Metric::Lin => {
            let denom = ic_of(i) + ic_of(j);
            if denom == 0.0 {
                0.0
            } else {
                2.0 * ic_of(t.lcs(i, j)) / denom
            }
        }
    }
}
