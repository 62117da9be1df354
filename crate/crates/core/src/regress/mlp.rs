//! Fully connected tanh network with a linear output, trained by minibatch
//! SGD with momentum on half the mean squared error.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::DesignMatrix;
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpParams {
    /// One or two hidden layer widths.
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub validation_fraction: f64,
    /// Epochs without an improvement of `tolerance` before the rate halves.
    pub patience: usize,
    pub tolerance: f64,
    /// Training stops once the halved rate falls below this.
    pub min_learning_rate: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: vec![10, 10],
            learning_rate: 0.001,
            momentum: 0.9,
            batch_size: 16,
            max_epochs: 500,
            validation_fraction: 0.1,
            patience: 10,
            tolerance: 1e-4,
            min_learning_rate: 1e-6,
        }
    }
}

impl MlpParams {
    pub(crate) fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("mlp: {m}")));
        if self.hidden.is_empty() || self.hidden.len() > 2 || self.hidden.contains(&0) {
            return bad("one or two non-empty hidden layers required");
        }
        if !(self.learning_rate > 0.0) || !(0.0..1.0).contains(&self.momentum) {
            return bad("learning rate must be positive and momentum in [0, 1)");
        }
        if self.batch_size == 0 || self.max_epochs == 0 {
            return bad("batch size and epoch cap must be positive");
        }
        if !(0.0..0.5).contains(&self.validation_fraction) {
            return bad("validation fraction must be in [0, 0.5)");
        }
        Ok(())
    }
}

/// Layer sizes and a flat parameter vector holding, per layer, the
/// `out × in` weights row by row followed by the `out` biases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Network {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

impl Network {
    /// Glorot-uniform weights and biases.
    pub fn random(sizes: &[usize], rng: &mut Rng) -> Self {
        let mut params = Vec::new();
        for w in sizes.windows(2) {
            let limit = (6.0 / (w[0] + w[1]) as f64).sqrt();
            params.extend((0..w[1] * (w[0] + 1)).map(|_| rng.gen_range(-limit..limit)));
        }
        Network {
            sizes: sizes.to_vec(),
            params,
        }
    }

    pub fn from_parameters(sizes: &[usize], params: Vec<f64>) -> Result<Self> {
        let expected: usize = sizes.windows(2).map(|w| w[1] * (w[0] + 1)).sum();
        if sizes.len() < 2 || sizes[sizes.len() - 1] != 1 || params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: params.len(),
            });
        }
        Ok(Network {
            sizes: sizes.to_vec(),
            params,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn parameters(&self) -> &[f64] {
        &self.params
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        self.params.copy_from_slice(params);
    }

    fn layers(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let mut offset = 0;
        self.sizes.windows(2).map(move |w| {
            let start = offset;
            offset += w[1] * (w[0] + 1);
            (start, w[0], w[1])
        })
    }

    /// Activations of every layer, input first.
    fn forward_all(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        let last = self.sizes.len() - 2;
        for (l, (off, n_in, n_out)) in self.layers().enumerate() {
            let input = &acts[l];
            let (w, b) = self.params[off..off + n_out * (n_in + 1)].split_at(n_out * n_in);
            let out: Vec<f64> = (0..n_out)
                .map(|o| {
                    let z = b[o] + w[o * n_in..(o + 1) * n_in].iter().zip(input).map(|(a, b)| a * b).sum::<f64>();
                    if l == last {
                        z
                    } else {
                        z.tanh()
                    }
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.forward_all(x).last().expect("output layer")[0]
    }

    /// `½ · mean (ŷ − y)²` over the rows and its gradient with respect to
    /// [`Network::parameters`].
    pub fn loss_and_gradient<R: AsRef<[f64]>>(&self, rows: &[R], y: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.params.len()];
        let mut loss = 0.0;
        for (x, &t) in rows.iter().zip(y) {
            loss += self.accumulate(x.as_ref(), t, &mut grad);
        }
        let n = rows.len().max(1) as f64;
        grad.iter_mut().for_each(|g| *g /= n);
        (loss / n, grad)
    }

    /// Adds one sample's gradient to `grad` and returns its loss.
    fn accumulate(&self, x: &[f64], t: f64, grad: &mut [f64]) -> f64 {
        let acts = self.forward_all(x);
        let layers: Vec<_> = self.layers().collect();
        let err = acts[acts.len() - 1][0] - t;
        let mut delta = vec![err];
        for l in (0..layers.len()).rev() {
            let (off, n_in, n_out) = layers[l];
            let input = &acts[l];
            let (gw, gb) = grad[off..off + n_out * (n_in + 1)].split_at_mut(n_out * n_in);
            for o in 0..n_out {
                gb[o] += delta[o];
                for (g, a) in gw[o * n_in..(o + 1) * n_in].iter_mut().zip(input) {
                    *g += delta[o] * a;
                }
            }
            if l > 0 {
                let w = &self.params[off..off + n_out * n_in];
                delta = (0..n_in)
                    .map(|i| {
                        let back: f64 = (0..n_out).map(|o| w[o * n_in + i] * delta[o]).sum();
                        back * (1.0 - input[i] * input[i])
                    })
                    .collect();
            }
        }
        0.5 * err * err
    }
}

/// Outcome of a training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpTrace {
    pub epochs: usize,
    pub best_epoch: usize,
    pub converged: bool,
    pub final_learning_rate: f64,
    pub best_loss: f64,
}

/// Trains on `x` with the held-out share given by `validation_fraction`.
/// The rate halves after `patience` epochs without improvement; training
/// stops when it drops below `min_learning_rate` or at `max_epochs`, and
/// the best weights seen are restored.
pub fn train_mlp(x: &DesignMatrix, params: &MlpParams, seed: u64) -> Result<(Network, MlpTrace)> {
    params.validate()?;
    let n = x.n();
    if n == 0 {
        return Err(Error::InsufficientRows { needed: 1, available: 0 });
    }
    let mut rng = rng::rng(seed);
    let mut sizes = vec![x.p()];
    sizes.extend(&params.hidden);
    sizes.push(1);
    let mut net = Network::random(&sizes, &mut rng);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let n_val = (params.validation_fraction * n as f64).ceil() as usize;
    let (val, mut train) = if n_val >= 2 && n - n_val >= 2 {
        (order[..n_val].to_vec(), order[n_val..].to_vec())
    } else {
        (Vec::new(), order)
    };
    let monitor = if val.is_empty() { train.clone() } else { val.clone() };
    let monitor_rows: Vec<&[f64]> = monitor.iter().map(|&i| x.row(i)).collect();
    let monitor_y: Vec<f64> = monitor.iter().map(|&i| x.target()[i]).collect();
    let loss_of = |net: &Network| -> f64 {
        monitor_rows
            .iter()
            .zip(&monitor_y)
            .map(|(r, t)| 0.5 * (net.predict(r) - t).powi(2))
            .sum::<f64>()
            / monitor_y.len() as f64
    };

    let mut velocity = vec![0.0; net.params.len()];
    let mut grad = vec![0.0; net.params.len()];
    let mut lr = params.learning_rate;
    let mut best = (loss_of(&net), net.params.clone(), 0);
    let mut stale = 0;
    let mut epochs = 0;
    let mut converged = false;
    while epochs < params.max_epochs {
        epochs += 1;
        train.shuffle(&mut rng);
        for batch in train.chunks(params.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &i in batch {
                net.accumulate(x.row(i), x.target()[i], &mut grad);
            }
            let scale = lr / batch.len() as f64;
            for ((w, v), g) in net.params.iter_mut().zip(&mut velocity).zip(&grad) {
                *v = params.momentum * *v - scale * g;
                *w += *v;
            }
        }
        let loss = loss_of(&net);
        if !loss.is_finite() {
            return Err(Error::Divergence(format!("mlp loss is {loss} at epoch {epochs}")));
        }
        if loss < best.0 - params.tolerance {
            best = (loss, net.params.clone(), epochs);
            stale = 0;
        } else if loss < best.0 {
            best = (loss, net.params.clone(), epochs);
            stale += 1;
        } else {
            stale += 1;
        }
        if stale >= params.patience {
            stale = 0;
            lr /= 2.0;
            if lr < params.min_learning_rate {
                converged = true;
                break;
            }
        }
    }
    net.params = best.1;
    Ok((
        net,
        MlpTrace {
            epochs,
            best_epoch: best.2,
            converged,
            final_learning_rate: lr,
            best_loss: best.0,
        },
    ))
}
