//! Extremely randomized trees for regression.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DesignMatrix;
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ErtParams {
    pub n_trees: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub max_depth: Option<usize>,
    /// Features tried per node; `None` tries all of them.
    pub max_features: Option<usize>,
    /// Random cut-points drawn per feature and node.
    pub split_candidates: usize,
}

impl Default for ErtParams {
    fn default() -> Self {
        ErtParams {
            n_trees: 50,
            min_samples_split: 3,
            min_samples_leaf: 1,
            max_depth: None,
            max_features: None,
            split_candidates: 1,
        }
    }
}

impl ErtParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.n_trees == 0 || self.min_samples_leaf == 0 || self.split_candidates == 0 {
            return Err(Error::InvalidArgument(
                "ert: n_trees, min_samples_leaf and split_candidates must be positive".into(),
            ));
        }
        if self.min_samples_split < 2 || self.max_features == Some(0) {
            return Err(Error::InvalidArgument(
                "ert: min_samples_split must be at least 2 and max_features positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes in construction order; node 0 is the root. Rows with
/// `x[feature] <= threshold` go left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Forest {
    pub trees: Vec<Tree>,
    /// Per-tree normalized impurity decrease, averaged over trees.
    pub importance: Vec<f64>,
}

pub(crate) fn fit_forest(x: &DesignMatrix, params: &ErtParams, seed: u64) -> Result<Forest> {
    params.validate()?;
    if x.n() == 0 {
        return Err(Error::InsufficientRows { needed: 1, available: 0 });
    }
    let grown: Vec<(Tree, Vec<f64>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| grow(x, params, &mut rng::rng(rng::derive(seed, t as u64))))
        .collect();
    let p = x.p();
    let mut importance = vec![0.0; p];
    for (_, imp) in &grown {
        let total: f64 = imp.iter().sum();
        if total > 0.0 {
            for (a, b) in importance.iter_mut().zip(imp) {
                *a += b / total;
            }
        }
    }
    let total: f64 = importance.iter().sum();
    if total > 0.0 {
        importance.iter_mut().for_each(|v| *v /= total);
    }
    Ok(Forest {
        trees: grown.into_iter().map(|(t, _)| t).collect(),
        importance,
    })
}

struct Pending {
    node: usize,
    rows: Vec<usize>,
    depth: usize,
}

fn grow(x: &DesignMatrix, params: &ErtParams, rng: &mut Rng) -> (Tree, Vec<f64>) {
    let y = x.target();
    let mut importance = vec![0.0; x.p()];
    let mut features: Vec<usize> = (0..x.p()).collect();
    let mut nodes = vec![Node::Leaf { value: 0.0 }];
    let mut stack = vec![Pending {
        node: 0,
        rows: (0..x.n()).collect(),
        depth: 0,
    }];
    while let Some(Pending { node, rows, depth }) = stack.pop() {
        let (sum, sum_sq) = rows.iter().fold((0.0, 0.0), |(s, q), &i| (s + y[i], q + y[i] * y[i]));
        let mean = sum / rows.len() as f64;
        let pure = rows.iter().all(|&i| y[i] == y[rows[0]]);
        let can_split = rows.len() >= params.min_samples_split
            && rows.len() >= 2 * params.min_samples_leaf
            && params.max_depth.is_none_or(|d| depth < d)
            && !pure;
        let split = if can_split {
            best_split(x, &rows, &mut features, params, rng)
        } else {
            None
        };
        let Some((feature, threshold)) = split else {
            nodes[node] = Node::Leaf { value: mean };
            continue;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| x.get(i, feature) <= threshold);
        let sse = |r: &[usize]| {
            let (s, q) = r.iter().fold((0.0, 0.0), |(s, q), &i| (s + y[i], q + y[i] * y[i]));
            (q - s * s / r.len() as f64).max(0.0)
        };
        let parent = (sum_sq - sum * sum / rows.len() as f64).max(0.0);
        importance[feature] += (parent - sse(&left_rows) - sse(&right_rows)).max(0.0);

        let left = nodes.len();
        nodes.push(Node::Leaf { value: 0.0 });
        nodes.push(Node::Leaf { value: 0.0 });
        nodes[node] = Node::Split {
            feature,
            threshold,
            left,
            right: left + 1,
        };
        stack.push(Pending {
            node: left + 1,
            rows: right_rows,
            depth: depth + 1,
        });
        stack.push(Pending {
            node: left,
            rows: left_rows,
            depth: depth + 1,
        });
    }
    (Tree { nodes }, importance)
}

/// Draws cut-points uniformly within each candidate feature's range at this
/// node and keeps the one with the largest variance reduction (first wins
/// ties).
fn best_split(
    x: &DesignMatrix,
    rows: &[usize],
    features: &mut [usize],
    params: &ErtParams,
    rng: &mut Rng,
) -> Option<(usize, f64)> {
    let y = x.target();
    let n = rows.len() as f64;
    let total: f64 = rows.iter().map(|&i| y[i]).sum();
    let k = params.max_features.map_or(features.len(), |m| m.min(features.len()));
    if k < features.len() {
        features.shuffle(rng);
    }
    let mut best: Option<(f64, usize, f64)> = None;
    for &f in &features[..k] {
        let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = x.get(i, f);
            (lo.min(v), hi.max(v))
        });
        if !(hi > lo) {
            continue;
        }
        for _ in 0..params.split_candidates {
            let cut = rng.gen_range(lo..hi);
            let (mut nl, mut sl) = (0usize, 0.0);
            for &i in rows {
                if x.get(i, f) <= cut {
                    nl += 1;
                    sl += y[i];
                }
            }
            let nr = rows.len() - nl;
            if nl < params.min_samples_leaf || nr < params.min_samples_leaf {
                continue;
            }
            let sr = total - sl;
            // SSE reduction up to a constant: between-group sum of squares.
            let score = sl * sl / nl as f64 + sr * sr / nr as f64 - total * total / n;
            if best.is_none_or(|(b, _, _)| score > b) {
                best = Some((score, f, cut));
            }
        }
    }
    best.map(|(_, f, cut)| (f, cut))
}
