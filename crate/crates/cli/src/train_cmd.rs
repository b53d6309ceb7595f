//! Surrogate training and the MLP-vs-ANFIS comparison table.
//!
//! For every output column an MLP architecture grid (hidden width times
//! activation) is scored on a held-out split; the winning cell is refit on
//! the full data. One ANFIS system per output is hybrid-trained on the
//! full data. Both are reported with their training chi-squared next to an
//! intercept-only baseline, which any model worth keeping must beat.

use std::path::{Path, PathBuf};

use formopt_core::rng::derive_seed;
use formopt_core::surrogate::{
    chi_squared, fit_anfis, fit_mlp, model_select_mlp, Activation, Dataset, MfShape,
    ModelDocument, Surrogate, TrainConfig,
};
use serde::{Deserialize, Serialize};

use crate::data::ingest_dataset;
use crate::error::{CliError, Result};
use crate::reports::{fmt_f64, write_text};

fn default_hidden_grid() -> Vec<usize> {
    vec![2, 3, 4, 5]
}

fn default_activations() -> Vec<Activation> {
    vec![Activation::Sigmoid, Activation::Tanh]
}

fn default_test_fraction() -> f64 {
    0.2
}

fn default_labels() -> usize {
    2
}

fn default_shape() -> MfShape {
    MfShape::Bell
}

/// Seed tag separating the final full-data refit from the grid cells.
const REFIT_TAG: u64 = 0xF17;

fn default_train() -> TrainConfig {
    // The loss is summed over rows, so the stable gradient step shrinks
    // with the dataset; 0.01 is safe for the tens-of-rows datasets this
    // command targets.
    TrainConfig {
        learning_rate: 0.01,
        ..TrainConfig::default()
    }
}

/// Training-command configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainCfg {
    pub dataset: String,
    pub input_columns: Vec<String>,
    pub output_columns: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Hidden-layer widths tried for the MLP (one hidden layer each).
    #[serde(default = "default_hidden_grid")]
    pub hidden_grid: Vec<usize>,
    #[serde(default = "default_activations")]
    pub activations: Vec<Activation>,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_train")]
    pub mlp_train: TrainConfig,
    #[serde(default = "default_labels")]
    pub anfis_labels: usize,
    #[serde(default = "default_shape")]
    pub anfis_shape: MfShape,
    #[serde(default = "default_train")]
    pub anfis_train: TrainConfig,
}

/// One MLP grid cell, scored on the held-out split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub output: String,
    pub hidden: usize,
    pub activation: String,
    pub chi_squared: Option<f64>,
    pub note: Option<String>,
}

/// One line of the model-vs-baseline table (training-data chi-squared).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub output: String,
    pub model: String,
    pub detail: String,
    pub chi_squared: f64,
}

/// Everything the train command produces.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub grid: Vec<GridRow>,
    pub comparison: Vec<ComparisonRow>,
    /// Winning single-output MLP per output column, refit on all rows.
    pub mlp_models: Vec<(String, Surrogate)>,
    /// One multi-output ANFIS surrogate.
    pub anfis_model: Surrogate,
    pub warnings: Vec<String>,
}

/// Chi-squared of predicting every row of `column` with its mean.
pub fn intercept_baseline_chi(column: &[f64]) -> Result<f64> {
    let mean = column.iter().sum::<f64>() / column.len() as f64;
    let predicted = vec![mean; column.len()];
    Ok(chi_squared(column, &predicted)?)
}

fn training_chi(model: &Surrogate, data: &Dataset, output: usize) -> Result<f64> {
    let mut predicted = Vec::with_capacity(data.n_rows());
    for x in &data.inputs {
        predicted.push(model.predict(x)?[output]);
    }
    Ok(chi_squared(&data.output_column(output), &predicted)?)
}

/// Runs the full protocol on an already-loaded dataset.
pub fn train_models(cfg: &TrainCfg, dataset: &Dataset) -> Result<TrainOutcome> {
    if cfg.hidden_grid.is_empty() || cfg.activations.is_empty() {
        return Err(CliError::config("hidden_grid and activations must be non-empty"));
    }
    let grid: Vec<Vec<usize>> = cfg.hidden_grid.iter().map(|&h| vec![h]).collect();
    let mut grid_rows = Vec::new();
    let mut comparison = Vec::new();
    let mut mlp_models = Vec::new();

    let (anfis_model, _) = fit_anfis(dataset, cfg.anfis_labels, cfg.anfis_shape, &cfg.anfis_train)?;
    let anfis_detail = format!("{} labels/input, {}", cfg.anfis_labels, cfg.anfis_shape.name());

    for out in 0..dataset.n_outputs() {
        let name = dataset.output_names[out].clone();
        let single = dataset.select_output(out)?;
        let selection = model_select_mlp(
            &single,
            &grid,
            &cfg.activations,
            &cfg.mlp_train,
            cfg.test_fraction,
            derive_seed(cfg.seed, &[out as u64]),
        )?;
        for cell in &selection.cells {
            grid_rows.push(GridRow {
                output: name.clone(),
                hidden: cell.hidden_layers.first().copied().unwrap_or(0),
                activation: cell.activation.name().to_string(),
                chi_squared: cell.chi_squared,
                note: cell.note.clone(),
            });
        }
        let best = selection.best_cell();
        let (mlp, _) = fit_mlp(
            &single,
            &best.hidden_layers,
            best.activation,
            &cfg.mlp_train,
            derive_seed(cfg.seed, &[out as u64, REFIT_TAG]),
        )?;
        comparison.push(ComparisonRow {
            output: name.clone(),
            model: "mlp".into(),
            detail: format!("hidden={} {}", best.hidden_layers[0], best.activation.name()),
            chi_squared: training_chi(&mlp, &single, 0)?,
        });
        comparison.push(ComparisonRow {
            output: name.clone(),
            model: "anfis".into(),
            detail: anfis_detail.clone(),
            chi_squared: training_chi(&anfis_model, dataset, out)?,
        });
        comparison.push(ComparisonRow {
            output: name.clone(),
            model: "baseline".into(),
            detail: "intercept-only".into(),
            chi_squared: intercept_baseline_chi(&dataset.output_column(out))?,
        });
        mlp_models.push((name, mlp));
    }

    Ok(TrainOutcome {
        grid: grid_rows,
        comparison,
        mlp_models,
        anfis_model,
        warnings: Vec::new(),
    })
}

/// Loads the dataset named in the config and runs the protocol.
pub fn run_train(cfg: &TrainCfg) -> Result<TrainOutcome> {
    let (dataset, warnings) = ingest_dataset(
        Path::new(&cfg.dataset),
        &cfg.input_columns,
        &cfg.output_columns,
    )?;
    let mut outcome = train_models(cfg, &dataset)?;
    outcome.warnings = warnings;
    Ok(outcome)
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut text = String::from("output,hidden,activation,chi_squared,note\n");
    for r in rows {
        let chi = r.chi_squared.map(fmt_f64).unwrap_or_default();
        let note = r.note.as_deref().unwrap_or("");
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            r.output, r.hidden, r.activation, chi, note
        ));
    }
    text
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut text = String::from("output,model,detail,chi_squared\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{}\n",
            r.output,
            r.model,
            r.detail,
            fmt_f64(r.chi_squared)
        ));
    }
    text
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || ".-_".contains(c) { c } else { '_' })
        .collect()
}

/// Writes the tables and trained models under `dir`.
pub fn write_train_outputs(dir: &Path, outcome: &TrainOutcome) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let grid_path = dir.join("mlp_grid.csv");
    write_text(&grid_path, &grid_csv(&outcome.grid))?;
    written.push(grid_path);

    let chi_path = dir.join("chi_squared.csv");
    write_text(&chi_path, &comparison_csv(&outcome.comparison))?;
    written.push(chi_path);

    for (name, model) in &outcome.mlp_models {
        let path = dir.join(format!("mlp_{}.json", sanitize(name)));
        let doc = ModelDocument::new(model.clone());
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| CliError::runtime(format!("cannot serialize model: {e}")))?;
        write_text(&path, &text)?;
        written.push(path);
    }
    let anfis_path = dir.join("anfis.json");
    let doc = ModelDocument::new(outcome.anfis_model.clone());
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::runtime(format!("cannot serialize model: {e}")))?;
    write_text(&anfis_path, &text)?;
    written.push(anfis_path);

    Ok(written)
}
