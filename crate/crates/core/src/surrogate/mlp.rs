//! Multilayer perceptron with full-batch gradient descent.
//!
//! The output layer is linear; hidden layers share one activation. The
//! training loss is the summed squared error `E = sum 0.5 * (t - o)^2`
//! over all rows and output units, and weights follow plain steepest
//! descent on that loss.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::{TrainConfig, TrainHistory};

/// Hidden-layer activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Sigmoid,
    Tanh,
    /// Hard step: 0 for non-positive input, 1 otherwise. Its derivative
    /// is zero almost everywhere, so gradient descent cannot adjust
    /// weights feeding into it; kept for completeness.
    Threshold,
    Relu,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + libm::exp(-x)),
            Activation::Tanh => libm::tanh(x),
            Activation::Threshold => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Activation::Relu => x.max(0.0),
        }
    }

    /// Derivative expressed through the activation value `y = apply(x)`
    /// where possible.
    pub fn derivative(self, x: f64, y: f64) -> f64 {
        match self {
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Tanh => 1.0 - y * y,
            Activation::Threshold => 0.0,
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::Threshold => "threshold",
            Activation::Relu => "relu",
        }
    }
}

impl core::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            "threshold" => Ok(Activation::Threshold),
            "relu" => Ok(Activation::Relu),
            other => Err(Error::config(alloc::format!(
                "unknown activation '{other}' (expected sigmoid, tanh, threshold, or relu)"
            ))),
        }
    }
}

/// Fully connected feed-forward network.
///
/// `weights[l][j][i]` connects unit `i` of layer `l` to unit `j` of layer
/// `l + 1`; `biases[l][j]` belongs to that same target unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpNetwork {
    pub layer_sizes: Vec<usize>,
    pub weights: Vec<Vec<Vec<f64>>>,
    pub biases: Vec<Vec<f64>>,
    pub hidden_activation: Activation,
}

impl MlpNetwork {
    /// Random initialization with each weight and bias drawn uniformly
    /// from +-1/sqrt(fan_in) of its target layer.
    pub fn init(layer_sizes: &[usize], hidden_activation: Activation, rng: &mut RngStream) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::config("network needs at least input and output layers"));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::config("layer sizes must be positive"));
        }
        let mut weights = Vec::with_capacity(layer_sizes.len() - 1);
        let mut biases = Vec::with_capacity(layer_sizes.len() - 1);
        for w in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = 1.0 / libm::sqrt(fan_in as f64);
            let layer: Vec<Vec<f64>> = (0..fan_out)
                .map(|_| (0..fan_in).map(|_| rng.uniform_in(-bound, bound)).collect())
                .collect();
            weights.push(layer);
            biases.push((0..fan_out).map(|_| rng.uniform_in(-bound, bound)).collect());
        }
        Ok(MlpNetwork {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
            hidden_activation,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    fn n_layers(&self) -> usize {
        self.weights.len()
    }

    /// Forward pass. Hidden layers apply the configured activation; the
    /// output layer stays linear.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_inputs());
        let mut current = x.to_vec();
        for l in 0..self.n_layers() {
            current = self.layer_forward(l, &current).1;
        }
        current
    }

    /// One layer's pre-activations and activations.
    fn layer_forward(&self, l: usize, input: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let last = l == self.n_layers() - 1;
        let mut pre = Vec::with_capacity(self.biases[l].len());
        let mut act = Vec::with_capacity(self.biases[l].len());
        for (row, b) in self.weights[l].iter().zip(&self.biases[l]) {
            let z: f64 = row.iter().zip(input).map(|(w, v)| w * v).sum::<f64>() + b;
            pre.push(z);
            act.push(if last { z } else { self.hidden_activation.apply(z) });
        }
        (pre, act)
    }

    /// Summed squared error `sum 0.5 (t - o)^2` over all rows.
    pub fn loss(&self, xs: &[Vec<f64>], ts: &[Vec<f64>]) -> f64 {
        xs.iter()
            .zip(ts)
            .map(|(x, t)| {
                let o = self.forward(x);
                o.iter().zip(t).map(|(oi, ti)| 0.5 * (ti - oi) * (ti - oi)).sum::<f64>()
            })
            .sum()
    }

    /// Full-batch loss gradient in the same shape as (weights, biases).
    #[allow(clippy::type_complexity)]
    pub fn gradient(
        &self,
        xs: &[Vec<f64>],
        ts: &[Vec<f64>],
    ) -> (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) {
        let mut gw: Vec<Vec<Vec<f64>>> = self
            .weights
            .iter()
            .map(|l| l.iter().map(|r| alloc::vec![0.0; r.len()]).collect())
            .collect();
        let mut gb: Vec<Vec<f64>> = self.biases.iter().map(|l| alloc::vec![0.0; l.len()]).collect();

        for (x, t) in xs.iter().zip(ts) {
            // Forward, keeping every layer's pre-activation and output.
            let mut acts: Vec<Vec<f64>> = alloc::vec![x.clone()];
            let mut pres: Vec<Vec<f64>> = Vec::with_capacity(self.n_layers());
            for l in 0..self.n_layers() {
                let (pre, act) = self.layer_forward(l, &acts[l]);
                pres.push(pre);
                acts.push(act);
            }

            // Backward. The linear output layer makes delta_out = o - t.
            let out = &acts[self.n_layers()];
            let mut delta: Vec<f64> = out.iter().zip(t).map(|(o, ti)| o - ti).collect();
            for l in (0..self.n_layers()).rev() {
                for (j, dj) in delta.iter().enumerate() {
                    gb[l][j] += dj;
                    for (i, ai) in acts[l].iter().enumerate() {
                        gw[l][j][i] += dj * ai;
                    }
                }
                if l == 0 {
                    break;
                }
                let mut prev = alloc::vec![0.0; self.layer_sizes[l]];
                for (i, p) in prev.iter_mut().enumerate() {
                    let upstream: f64 = delta.iter().enumerate().map(|(j, dj)| dj * self.weights[l][j][i]).sum();
                    *p = upstream
                        * self
                            .hidden_activation
                            .derivative(pres[l - 1][i], acts[l][i]);
                }
                delta = prev;
            }
        }
        (gw, gb)
    }

    /// Full-batch gradient descent on the summed squared error.
    pub fn train_gd(&mut self, xs: &[Vec<f64>], ts: &[Vec<f64>], cfg: &TrainConfig) -> Result<TrainHistory> {
        cfg.validate()?;
        if xs.is_empty() || xs.len() != ts.len() {
            return Err(Error::training("training rows and targets must match and be non-empty"));
        }
        if xs[0].len() != self.n_inputs() || ts[0].len() != self.n_outputs() {
            return Err(Error::training("row widths do not match the network shape"));
        }
        let mut history = TrainHistory::default();
        if let Some(w) = cfg.habit_warning() {
            history.warnings.push(w);
        }
        for epoch in 0..cfg.epochs {
            let (gw, gb) = self.gradient(xs, ts);
            for l in 0..self.n_layers() {
                for j in 0..self.weights[l].len() {
                    self.biases[l][j] -= cfg.learning_rate * gb[l][j];
                    for i in 0..self.weights[l][j].len() {
                        self.weights[l][j][i] -= cfg.learning_rate * gw[l][j][i];
                    }
                }
            }
            let loss = self.loss(xs, ts);
            if !loss.is_finite() {
                return Err(Error::training(alloc::format!(
                    "loss diverged at epoch {epoch}; lower the learning rate or rescale the data"
                )));
            }
            history.losses.push(loss);
            if cfg.should_stop(&history.losses) {
                break;
            }
        }
        Ok(history)
    }
}
