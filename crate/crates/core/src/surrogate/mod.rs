//! Surrogate regression models and their shared plumbing.
//!
//! Two model families are provided: a multilayer perceptron trained by
//! full-batch gradient descent ([`mlp`]) and a Sugeno-type adaptive
//! neuro-fuzzy system trained by the hybrid least-squares/gradient rule
//! ([`anfis`]). Both train on min-max normalized data; the fitted
//! [`Surrogate`] wrapper carries the scalers so predictions and the
//! chi-squared comparison metric ([`metrics`]) live in original units.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub mod anfis;
mod linalg;
pub mod metrics;
pub mod mlp;
pub mod select;

pub use anfis::{AnfisSystem, MembershipFn, MfShape};
pub use metrics::{chi_squared, mse};
pub use mlp::{Activation, MlpNetwork};
pub use select::{model_select_mlp, MlpSelection, SelectionCell};

/// Version tag written into every serialized model document.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Named tabular dataset: rows of inputs paired with rows of outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub inputs: Vec<Vec<f64>>,
    pub outputs: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(
        input_names: Vec<String>,
        output_names: Vec<String>,
        inputs: Vec<Vec<f64>>,
        outputs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if input_names.is_empty() || output_names.is_empty() {
            return Err(Error::data("dataset needs at least one input and one output column"));
        }
        if inputs.len() != outputs.len() {
            return Err(Error::data("input and output row counts differ"));
        }
        if inputs.iter().any(|r| r.len() != input_names.len())
            || outputs.iter().any(|r| r.len() != output_names.len())
        {
            return Err(Error::data("ragged rows: every row must match its column names"));
        }
        if inputs
            .iter()
            .flatten()
            .chain(outputs.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::data("dataset values must be finite"));
        }
        Ok(Dataset {
            input_names,
            output_names,
            inputs,
            outputs,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_names.len()
    }

    /// Projection onto a single output column.
    pub fn select_output(&self, index: usize) -> Result<Dataset> {
        if index >= self.n_outputs() {
            return Err(Error::data(alloc::format!(
                "output index {index} out of range (have {})",
                self.n_outputs()
            )));
        }
        Ok(Dataset {
            input_names: self.input_names.clone(),
            output_names: alloc::vec![self.output_names[index].clone()],
            inputs: self.inputs.clone(),
            outputs: self.outputs.iter().map(|r| alloc::vec![r[index]]).collect(),
        })
    }

    /// Rows at the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            input_names: self.input_names.clone(),
            output_names: self.output_names.clone(),
            inputs: indices.iter().map(|&i| self.inputs[i].clone()).collect(),
            outputs: indices.iter().map(|&i| self.outputs[i].clone()).collect(),
        }
    }

    /// Seeded Fisher-Yates permutation of the row indices.
    pub fn shuffled_indices(&self, rng: &mut RngStream) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n_rows()).collect();
        for i in (1..idx.len()).rev() {
            let j = rng.index(i + 1);
            idx.swap(i, j);
        }
        idx
    }

    /// One column of the outputs.
    pub fn output_column(&self, index: usize) -> Vec<f64> {
        self.outputs.iter().map(|r| r[index]).collect()
    }
}

/// Splits `n` row indices into (train, test) with a seeded shuffle. The
/// test side gets `round(test_fraction * n)` rows, at least one on each
/// side, so `n` must be at least 2.
pub fn split_indices(
    n: usize,
    test_fraction: f64,
    rng: &mut RngStream,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(Error::data("need at least two rows to split"));
    }
    if !(0.0..1.0).contains(&test_fraction) || test_fraction <= 0.0 {
        return Err(Error::config("test_fraction must lie in (0, 1)"));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.index(i + 1);
        idx.swap(i, j);
    }
    let t = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let test = idx[..t].to_vec();
    let train = idx[t..].to_vec();
    Ok((train, test))
}

/// Per-column min-max scaler mapping the fitted range onto [0, 1].
/// Degenerate (constant) columns transform to 0 and invert back to their
/// constant value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub widths: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or_else(|| Error::data("cannot fit scaler on no rows"))?;
        let cols = first.len();
        let mut mins = alloc::vec![f64::INFINITY; cols];
        let mut maxs = alloc::vec![f64::NEG_INFINITY; cols];
        for row in rows {
            for (c, v) in row.iter().enumerate() {
                mins[c] = mins[c].min(*v);
                maxs[c] = maxs[c].max(*v);
            }
        }
        let widths = mins.iter().zip(&maxs).map(|(lo, hi)| hi - lo).collect();
        Ok(MinMaxScaler { mins, widths })
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(c, v)| {
                if self.widths[c] > 0.0 {
                    (v - self.mins[c]) / self.widths[c]
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn inverse(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(c, v)| self.mins[c] + v * self.widths[c])
            .collect()
    }

    pub fn transform_all(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform(r)).collect()
    }
}

/// Shared training knobs for gradient-based fitting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// Step size of the descent updates. Values outside the customary
    /// [0.1, 0.9] band are accepted with a warning in the history.
    pub learning_rate: f64,
    pub epochs: usize,
    /// Stop early when the loss improves by less than this over
    /// `early_stop_window` epochs. Zero window disables early stopping.
    pub early_stop_epsilon: f64,
    pub early_stop_window: usize,
    /// Stop as soon as the epoch loss reaches this value.
    pub loss_target: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            epochs: 2000,
            early_stop_epsilon: 1e-10,
            early_stop_window: 50,
            loss_target: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        // Zero is allowed: a zero step is the identity on the weights.
        if self.learning_rate < 0.0 || !self.learning_rate.is_finite() {
            return Err(Error::config("learning_rate must be non-negative and finite"));
        }
        if self.early_stop_epsilon < 0.0 {
            return Err(Error::config("early_stop_epsilon must be non-negative"));
        }
        if self.loss_target.is_some_and(|t| !t.is_finite()) {
            return Err(Error::config("loss_target must be finite"));
        }
        Ok(())
    }

    pub(crate) fn habit_warning(&self) -> Option<String> {
        if !(0.1..=0.9).contains(&self.learning_rate) {
            Some(alloc::format!(
                "learning_rate {} is outside the customary [0.1, 0.9] band",
                self.learning_rate
            ))
        } else {
            None
        }
    }

    /// True when the last `window` epochs improved the loss by less than
    /// the configured epsilon, or the loss target has been reached.
    pub(crate) fn should_stop(&self, losses: &[f64]) -> bool {
        let now = match losses.last() {
            Some(&v) => v,
            None => return false,
        };
        if self.loss_target.is_some_and(|t| now <= t) {
            return true;
        }
        if self.early_stop_window == 0 || losses.len() <= self.early_stop_window {
            return false;
        }
        let then = losses[losses.len() - 1 - self.early_stop_window];
        then - now < self.early_stop_epsilon
    }
}

/// Loss trajectory and notes from one training run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    /// Full-dataset loss after each epoch.
    pub losses: Vec<f64>,
    pub warnings: Vec<String>,
    /// Epochs whose least-squares pass was singular and fell back to a
    /// gradient-only update (hybrid training only).
    pub fallback_epochs: Vec<usize>,
}

/// A trained model of either family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainedModel {
    Mlp(MlpNetwork),
    /// One single-output system per output column.
    Anfis(Vec<AnfisSystem>),
}

/// A trained model together with the scalers that map between original
/// units and the normalized training space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surrogate {
    pub model: TrainedModel,
    pub x_scaler: MinMaxScaler,
    pub y_scaler: MinMaxScaler,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
}

impl Surrogate {
    /// Predicts all outputs, in original units, for one input row given in
    /// original units.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_names.len() {
            return Err(Error::data(alloc::format!(
                "expected {} inputs, got {}",
                self.input_names.len(),
                x.len()
            )));
        }
        let xs = self.x_scaler.transform(x);
        let ys = match &self.model {
            TrainedModel::Mlp(net) => net.forward(&xs),
            TrainedModel::Anfis(systems) => {
                let mut out = Vec::with_capacity(systems.len());
                for sys in systems {
                    out.push(sys.forward(&xs)?);
                }
                out
            }
        };
        Ok(self.y_scaler.inverse(&ys))
    }

    pub fn predict_all(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

/// Versioned serialization envelope for trained surrogates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: u32,
    pub surrogate: Surrogate,
}

impl ModelDocument {
    pub fn new(surrogate: Surrogate) -> Self {
        ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            surrogate,
        }
    }

    pub fn check_version(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::data(alloc::format!(
                "unsupported model format version {} (expected {MODEL_FORMAT_VERSION})",
                self.format_version
            )));
        }
        Ok(())
    }
}

/// Trains an MLP surrogate (multi-output capable) on the dataset.
pub fn fit_mlp(
    dataset: &Dataset,
    hidden_layers: &[usize],
    activation: Activation,
    train: &TrainConfig,
    seed: u64,
) -> Result<(Surrogate, TrainHistory)> {
    if dataset.n_rows() == 0 {
        return Err(Error::training("cannot train on an empty dataset"));
    }
    let x_scaler = MinMaxScaler::fit(&dataset.inputs)?;
    let y_scaler = MinMaxScaler::fit(&dataset.outputs)?;
    let xs = x_scaler.transform_all(&dataset.inputs);
    let ys = y_scaler.transform_all(&dataset.outputs);

    let mut sizes = alloc::vec![dataset.n_inputs()];
    sizes.extend_from_slice(hidden_layers);
    sizes.push(dataset.n_outputs());
    let mut rng = RngStream::new(seed);
    let mut net = MlpNetwork::init(&sizes, activation, &mut rng)?;
    let history = net.train_gd(&xs, &ys, train)?;
    Ok((
        Surrogate {
            model: TrainedModel::Mlp(net),
            x_scaler,
            y_scaler,
            input_names: dataset.input_names.clone(),
            output_names: dataset.output_names.clone(),
        },
        history,
    ))
}

/// Trains one ANFIS system per output column on the dataset. Hybrid
/// training is deterministic (grid premise init, least-squares
/// consequents), so no seed is involved.
pub fn fit_anfis(
    dataset: &Dataset,
    labels_per_input: usize,
    shape: MfShape,
    train: &TrainConfig,
) -> Result<(Surrogate, TrainHistory)> {
    if dataset.n_rows() == 0 {
        return Err(Error::training("cannot train on an empty dataset"));
    }
    let x_scaler = MinMaxScaler::fit(&dataset.inputs)?;
    let y_scaler = MinMaxScaler::fit(&dataset.outputs)?;
    let xs = x_scaler.transform_all(&dataset.inputs);
    let ys = y_scaler.transform_all(&dataset.outputs);

    // Membership grids live in the normalized input space.
    let ranges: Vec<(f64, f64)> = (0..dataset.n_inputs()).map(|_| (0.0, 1.0)).collect();
    let mut systems = Vec::with_capacity(dataset.n_outputs());
    let mut merged = TrainHistory::default();
    for out in 0..dataset.n_outputs() {
        let mut sys = AnfisSystem::grid(&ranges, labels_per_input, shape)?;
        let targets: Vec<f64> = ys.iter().map(|r| r[out]).collect();
        let history = sys.train_hybrid(&xs, &targets, train)?;
        if out == 0 {
            merged.losses = history.losses;
        }
        merged.warnings.extend(history.warnings);
        merged.fallback_epochs.extend(history.fallback_epochs);
        systems.push(sys);
    }
    merged.warnings.dedup();
    Ok((
        Surrogate {
            model: TrainedModel::Anfis(systems),
            x_scaler,
            y_scaler,
            input_names: dataset.input_names.clone(),
            output_names: dataset.output_names.clone(),
        },
        merged,
    ))
}
