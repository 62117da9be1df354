//! Skip-gram (and CBOW) with negative sampling, trained by plain SGD.
//!
//! Training is single-threaded and fully determined by the corpus and
//! [`SgnsConfig`], so two runs with the same seed agree bit for bit.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{dot, EmbeddingSpace, Provenance};
use crate::error::{Error, Result};
use crate::rng::{rng, Rng as WorkRng};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SgnsMode {
    #[default]
    Skipgram,
    Cbow,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativeDistribution {
    /// Unigram counts raised to 3/4.
    #[default]
    Unigram075,
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgnsConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Floor of the linear decay, as a fraction of `learning_rate`.
    pub min_learning_rate_ratio: f64,
    pub min_count: usize,
    pub mode: SgnsMode,
    pub negative_distribution: NegativeDistribution,
    /// Frequent-word subsampling threshold; off when `None`.
    pub subsample: Option<f64>,
    pub seed: u64,
}

impl SgnsConfig {
    /// Defaults for everything except the seed, which has none.
    pub fn new(seed: u64) -> Self {
        SgnsConfig {
            dim: 100,
            window: 5,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_learning_rate_ratio: 1e-4,
            min_count: 5,
            mode: SgnsMode::Skipgram,
            negative_distribution: NegativeDistribution::Unigram075,
            subsample: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.window == 0 || self.negatives == 0 || self.epochs == 0 {
            return Err(Error::InvalidArgument(
                "dim, window, negatives and epochs must be positive".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("learning rate must be positive".into()));
        }
        Ok(())
    }
}

/// Words kept after `min_count`, ordered by descending count then spelling.
#[derive(Clone, Debug, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn build(corpus: &[Vec<String>], min_count: usize) -> Self {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for w in corpus.iter().flatten() {
            *counts.entry(w).or_insert(0) += 1;
        }
        let mut kept: Vec<(&str, u64)> = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count.max(1) as u64)
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let words: Vec<String> = kept.iter().map(|(w, _)| w.to_string()).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Vocabulary {
            words,
            counts: kept.into_iter().map(|(_, c)| c).collect(),
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    fn encode(&self, doc: &[String]) -> Vec<usize> {
        doc.iter().filter_map(|w| self.id(w)).collect()
    }
}

/// (target, context) id pairs. Out-of-vocabulary tokens are removed before
/// windowing, so windows close up over them.
pub fn generate_training_pairs<'a>(
    corpus: &'a [Vec<String>],
    vocab: &'a Vocabulary,
    window: usize,
) -> impl Iterator<Item = (usize, usize)> + 'a {
    corpus.iter().flat_map(move |doc| {
        let ids = vocab.encode(doc);
        let n = ids.len();
        (0..n).flat_map(move |t| {
            let lo = t.saturating_sub(window);
            let hi = (t + window).min(n.saturating_sub(1));
            let ids = ids.clone();
            (lo..=hi).filter(move |&c| c != t).map(move |c| (ids[t], ids[c]))
        })
    })
}

/// Loss and gradients of one positive pair with its negatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PairLoss {
    pub loss: f64,
    pub grad_target: Vec<f64>,
    pub grad_context: Vec<f64>,
    pub grad_negatives: Vec<Vec<f64>>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-ln σ(u·v) - Σ ln σ(-u·n_i)` for target input vector `u`, context output
/// vector `v` and negative output vectors `n_i`.
pub fn pair_loss(target: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairLoss {
    let dim = target.len();
    let mut grad_target = vec![0.0; dim];

    let pos = sigmoid(dot(target, context));
    let mut loss = -pos.ln();
    let g = pos - 1.0;
    let grad_context = target.iter().map(|t| g * t).collect();
    for (gt, c) in grad_target.iter_mut().zip(context) {
        *gt += g * c;
    }

    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = sigmoid(dot(target, n));
        loss -= (1.0 - s).ln();
        grad_negatives.push(target.iter().map(|t| s * t).collect());
        for (gt, x) in grad_target.iter_mut().zip(n.iter()) {
            *gt += s * x;
        }
    }
    PairLoss {
        loss,
        grad_target,
        grad_context,
        grad_negatives,
    }
}

struct NegativeSampler {
    cumulative: Vec<f64>,
}

impl NegativeSampler {
    fn new(vocab: &Vocabulary, dist: NegativeDistribution) -> Self {
        let mut acc = 0.0;
        let cumulative = (0..vocab.len())
            .map(|i| {
                acc += match dist {
                    NegativeDistribution::Unigram075 => (vocab.count(i) as f64).powf(0.75),
                    NegativeDistribution::Uniform => 1.0,
                };
                acc
            })
            .collect();
        NegativeSampler { cumulative }
    }

    fn sample(&self, rng: &mut WorkRng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let x = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= x).min(self.cumulative.len() - 1)
    }
}

pub fn train_sgns(corpus: &[Vec<String>], config: &SgnsConfig) -> Result<EmbeddingSpace> {
    train_sgns_with_history(corpus, config).map(|(space, _)| space)
}

/// Trains and also returns the mean per-pair loss of every epoch.
pub fn train_sgns_with_history(corpus: &[Vec<String>], config: &SgnsConfig) -> Result<(EmbeddingSpace, Vec<f64>)> {
    config.validate()?;
    let vocab = Vocabulary::build(corpus, config.min_count);
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let dim = config.dim;
    let v = vocab.len();
    let mut rng = rng(config.seed);

    let bound = 0.5 / dim as f64;
    let mut input: Vec<f64> = (0..v * dim).map(|_| rng.gen_range(-bound..bound)).collect();
    let mut output = vec![0.0; v * dim];
    let sampler = NegativeSampler::new(&vocab, config.negative_distribution);

    let encoded: Vec<Vec<usize>> = corpus.iter().map(|d| vocab.encode(d)).collect();
    let total_tokens: usize = encoded.iter().map(Vec::len).sum();
    let total_work = (total_tokens * config.epochs).max(1) as f64;
    let total_count: u64 = vocab.counts.iter().sum();

    let mut processed = 0usize;
    let mut history = Vec::with_capacity(config.epochs);
    let mut grad_in = vec![0.0; dim];
    let mut hidden = vec![0.0; dim];
    let mut negs = Vec::with_capacity(config.negatives);

    for epoch in 0..config.epochs {
        let mut loss_sum = 0.0;
        let mut pairs = 0usize;
        for doc in &encoded {
            let kept: Vec<usize> = match config.subsample {
                None => doc.clone(),
                Some(t) => doc
                    .iter()
                    .copied()
                    .filter(|&w| {
                        let f = vocab.count(w) as f64 / total_count as f64;
                        let keep = ((f / t).sqrt() + 1.0) * t / f;
                        keep >= 1.0 || rng.gen::<f64>() < keep
                    })
                    .collect(),
            };
            let n = kept.len();
            for t in 0..n {
                let progress = processed as f64 / total_work;
                let lr = config.learning_rate * (1.0 - progress).max(config.min_learning_rate_ratio);
                processed += 1;
                let lo = t.saturating_sub(config.window);
                let hi = (t + config.window).min(n - 1);
                match config.mode {
                    SgnsMode::Skipgram => {
                        for c in lo..=hi {
                            if c == t {
                                continue;
                            }
                            draw_negatives(&sampler, &mut rng, kept[c], config.negatives, &mut negs);
                            let u = &input[kept[t] * dim..(kept[t] + 1) * dim];
                            loss_sum += sgd_step(u, kept[c], &negs, &mut output, dim, lr, &mut grad_in);
                            pairs += 1;
                            for (x, g) in input[kept[t] * dim..(kept[t] + 1) * dim].iter_mut().zip(&grad_in) {
                                *x -= lr * g;
                            }
                        }
                    }
                    SgnsMode::Cbow => {
                        let context: Vec<usize> = (lo..=hi).filter(|&c| c != t).map(|c| kept[c]).collect();
                        if context.is_empty() {
                            continue;
                        }
                        hidden.iter_mut().for_each(|h| *h = 0.0);
                        for &c in &context {
                            for (h, x) in hidden.iter_mut().zip(&input[c * dim..(c + 1) * dim]) {
                                *h += x;
                            }
                        }
                        let scale = 1.0 / context.len() as f64;
                        hidden.iter_mut().for_each(|h| *h *= scale);
                        draw_negatives(&sampler, &mut rng, kept[t], config.negatives, &mut negs);
                        loss_sum += sgd_step(&hidden, kept[t], &negs, &mut output, dim, lr, &mut grad_in);
                        pairs += 1;
                        for &c in &context {
                            for (x, g) in input[c * dim..(c + 1) * dim].iter_mut().zip(&grad_in) {
                                *x -= lr * g;
                            }
                        }
                    }
                }
            }
        }
        let mean = if pairs > 0 { loss_sum / pairs as f64 } else { 0.0 };
        if !mean.is_finite() {
            return Err(Error::Divergence(format!("non-finite loss in epoch {}", epoch + 1)));
        }
        log::debug!("sgns epoch {} mean loss {mean:.6}", epoch + 1);
        history.push(mean);
    }

    let mut space = EmbeddingSpace::new(dim, Provenance::Sgns);
    for id in 0..v {
        space.insert(vocab.word(id), &input[id * dim..(id + 1) * dim])?;
    }
    Ok((space, history))
}

fn draw_negatives(sampler: &NegativeSampler, rng: &mut WorkRng, positive: usize, k: usize, out: &mut Vec<usize>) {
    out.clear();
    for _ in 0..k {
        let n = sampler.sample(rng);
        if n != positive {
            out.push(n);
        }
    }
}

/// Updates output vectors in place and leaves the gradient for the input
/// side in `grad_in`. Returns the pair loss.
fn sgd_step(
    u: &[f64],
    positive: usize,
    negatives: &[usize],
    output: &mut [f64],
    dim: usize,
    lr: f64,
    grad_in: &mut [f64],
) -> f64 {
    grad_in.iter_mut().for_each(|g| *g = 0.0);
    let mut loss = 0.0;
    let targets = std::iter::once((positive, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (w, label) in targets {
        let v = &mut output[w * dim..(w + 1) * dim];
        let s = sigmoid(dot(u, v));
        loss -= if label == 1.0 { s.ln() } else { (1.0 - s).ln() };
        let g = s - label;
        for ((gi, vi), ui) in grad_in.iter_mut().zip(v.iter_mut()).zip(u) {
            *gi += g * *vi;
            *vi -= lr * g * ui;
        }
    }
    loss
}
