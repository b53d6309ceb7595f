//! Architecture selection for MLP surrogates: trains a small grid of
//! (hidden layout, activation) candidates on a shared train/test split
//! and ranks them by held-out chi-squared in original units.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, RngStream};

use super::{chi_squared, fit_mlp, split_indices, Activation, Dataset, TrainConfig};

/// One evaluated candidate in the selection grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionCell {
    pub hidden_layers: Vec<usize>,
    pub activation: Activation,
    /// Held-out chi-squared, in original units. Absent when the candidate
    /// failed to train or the statistic was undefined on the test rows.
    pub chi_squared: Option<f64>,
    pub note: Option<String>,
}

/// Full selection table plus the winning candidate's index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpSelection {
    pub cells: Vec<SelectionCell>,
    pub best: usize,
}

impl MlpSelection {
    pub fn best_cell(&self) -> &SelectionCell {
        &self.cells[self.best]
    }
}

/// Evaluates every (hidden layout, activation) pair on one shared split
/// of a single-output dataset. Lower chi-squared wins; the first finite
/// minimum is reported as best.
pub fn model_select_mlp(
    dataset: &Dataset,
    hidden_grid: &[Vec<usize>],
    activations: &[Activation],
    train: &TrainConfig,
    test_fraction: f64,
    seed: u64,
) -> Result<MlpSelection> {
    if dataset.n_outputs() != 1 {
        return Err(Error::config(
            "architecture selection scores one output at a time; project the dataset first",
        ));
    }
    if hidden_grid.is_empty() || activations.is_empty() {
        return Err(Error::config("selection grid must not be empty"));
    }
    let mut rng = RngStream::new(derive_seed(seed, &[0x5e1ec7]));
    let (train_idx, test_idx) = split_indices(dataset.n_rows(), test_fraction, &mut rng)?;
    let train_set = dataset.subset(&train_idx);
    let test_set = dataset.subset(&test_idx);
    let observed = test_set.output_column(0);

    let mut cells = Vec::with_capacity(hidden_grid.len() * activations.len());
    for hidden in hidden_grid {
        for &activation in activations {
            let cell_seed = derive_seed(seed, &[1 + cells.len() as u64]);
            let cell = match fit_mlp(&train_set, hidden, activation, train, cell_seed) {
                Ok((surrogate, _)) => {
                    let predicted: Result<Vec<f64>> = test_set
                        .inputs
                        .iter()
                        .map(|x| surrogate.predict(x).map(|y| y[0]))
                        .collect();
                    match predicted.and_then(|p| chi_squared(&observed, &p)) {
                        Ok(stat) if stat.is_finite() => SelectionCell {
                            hidden_layers: hidden.clone(),
                            activation,
                            chi_squared: Some(stat),
                            note: None,
                        },
                        Ok(_) => SelectionCell {
                            hidden_layers: hidden.clone(),
                            activation,
                            chi_squared: None,
                            note: Some("fit statistic was non-finite".into()),
                        },
                        Err(e) => SelectionCell {
                            hidden_layers: hidden.clone(),
                            activation,
                            chi_squared: None,
                            note: Some(alloc::format!("{e}")),
                        },
                    }
                }
                Err(e) => SelectionCell {
                    hidden_layers: hidden.clone(),
                    activation,
                    chi_squared: None,
                    note: Some(alloc::format!("{e}")),
                },
            };
            cells.push(cell);
        }
    }

    let best = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.chi_squared.map(|v| (i, v)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite by construction"))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::training("no candidate architecture produced a usable fit"))?;

    Ok(MlpSelection { cells, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_dataset(n: usize) -> Dataset {
        let inputs: Vec<Vec<f64>> = (0..n).map(|i| alloc::vec![i as f64]).collect();
        let outputs: Vec<Vec<f64>> = inputs.iter().map(|x| alloc::vec![3.0 * x[0] + 5.0]).collect();
        Dataset::new(alloc::vec!["x".into()], alloc::vec!["y".into()], inputs, outputs).unwrap()
    }

    #[test]
    fn selection_covers_the_whole_grid() {
        let data = line_dataset(30);
        let grid = alloc::vec![alloc::vec![], alloc::vec![4]];
        let acts = [Activation::Sigmoid, Activation::Tanh];
        // Loss is summed over rows, so the stable step shrinks with the
        // training-set size; 0.02 keeps every grid cell in the stable regime.
        let cfg = TrainConfig {
            learning_rate: 0.02,
            epochs: 1500,
            ..TrainConfig::default()
        };
        let sel = model_select_mlp(&data, &grid, &acts, &cfg, 0.25, 9).unwrap();
        assert_eq!(sel.cells.len(), 4);
        let best = sel.best_cell();
        assert!(best.chi_squared.unwrap() < 1.0, "line should be easy to fit");
    }

    #[test]
    fn selection_is_deterministic_in_the_seed() {
        let data = line_dataset(24);
        let grid = alloc::vec![alloc::vec![3]];
        let acts = [Activation::Tanh];
        let cfg = TrainConfig {
            learning_rate: 0.02,
            epochs: 200,
            ..TrainConfig::default()
        };
        let a = model_select_mlp(&data, &grid, &acts, &cfg, 0.25, 7).unwrap();
        let b = model_select_mlp(&data, &grid, &acts, &cfg, 0.25, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multi_output_datasets_are_rejected() {
        let data = Dataset::new(
            alloc::vec!["x".into()],
            alloc::vec!["y".into(), "z".into()],
            alloc::vec![alloc::vec![1.0], alloc::vec![2.0]],
            alloc::vec![alloc::vec![1.0, 2.0], alloc::vec![2.0, 3.0]],
        )
        .unwrap();
        assert!(model_select_mlp(
            &data,
            &[alloc::vec![2]],
            &[Activation::Sigmoid],
            &TrainConfig::default(),
            0.25,
            1
        )
        .is_err());
    }

    #[test]
    fn empty_grid_is_rejected() {
        let data = line_dataset(10);
        assert!(
            model_select_mlp(&data, &[], &[Activation::Sigmoid], &TrainConfig::default(), 0.25, 1)
                .is_err()
        );
    }
}
