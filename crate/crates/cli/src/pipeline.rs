//! Model-then-optimize: train a surrogate on measured data, then search
//! its input space with a metaheuristic.

use std::cell::RefCell;
use std::path::Path;

use formopt_core::metaheuristics::TrialReport;
use formopt_core::surrogate::chi_squared;
use formopt_core::{Direction, SearchSpace};
use serde::{Deserialize, Serialize};

use crate::config::{AlgorithmKind, PipelineConfig};
use crate::data::ingest_dataset;
use crate::error::{CliError, Result};

/// Outcome of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub algorithm: String,
    pub input_names: Vec<String>,
    /// Best input vector found by the optimizer, in original units.
    pub best_input: Vec<f64>,
    pub output_names: Vec<String>,
    /// Surrogate predictions at the best input.
    pub predicted_outputs: Vec<f64>,
    /// Training-data fit of the surrogate, per output.
    pub chi_squared: Vec<f64>,
    /// Scalarized objective value reached.
    pub best_objective: f64,
    pub trial: TrialReport,
    pub warnings: Vec<String>,
}

/// Trains the configured surrogate and optimizes over it.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    let kind = AlgorithmKind::parse(&cfg.algorithm)?;
    if cfg.inputs.is_empty() || cfg.outputs.is_empty() {
        return Err(CliError::config("pipeline needs at least one input and one output"));
    }
    for out in &cfg.outputs {
        out.direction.validate()?;
        if !(out.weight > 0.0 && out.weight.is_finite()) {
            return Err(CliError::config(format!(
                "output '{}' needs a positive finite weight",
                out.name
            )));
        }
    }
    let input_names: Vec<String> = cfg.inputs.iter().map(|c| c.name.clone()).collect();
    let output_names: Vec<String> = cfg.outputs.iter().map(|o| o.name.clone()).collect();
    let lower: Vec<f64> = cfg.inputs.iter().map(|c| c.lower).collect();
    let upper: Vec<f64> = cfg.inputs.iter().map(|c| c.upper).collect();
    let space = SearchSpace::new(lower, upper)?;

    let (dataset, warnings) =
        ingest_dataset(Path::new(&cfg.dataset), &input_names, &output_names)?;
    let surrogate = cfg.surrogate.fit(&dataset, cfg.surrogate_seed)?;

    let mut chi = Vec::with_capacity(dataset.n_outputs());
    for out in 0..dataset.n_outputs() {
        let mut predicted = Vec::with_capacity(dataset.n_rows());
        for x in &dataset.inputs {
            predicted.push(surrogate.predict(x)?[out]);
        }
        chi.push(chi_squared(&dataset.output_column(out), &predicted)?);
    }

    // The optimizer minimizes the weighted sum of per-output scores; each
    // direction is folded into "smaller is better" before weighting.
    let prediction_error: RefCell<Option<formopt_core::Error>> = RefCell::new(None);
    let objective = |x: &[f64]| -> f64 {
        assert!(
            space.contains(x),
            "optimizer proposed a point outside the declared input bounds"
        );
        match surrogate.predict(x) {
            Ok(y) => cfg
                .outputs
                .iter()
                .zip(&y)
                .map(|(o, v)| o.weight * o.direction.score(*v))
                .sum(),
            Err(e) => {
                prediction_error.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outcome = cfg.params().run(
        kind,
        &space,
        objective,
        Direction::Minimize,
        cfg.budget,
        cfg.seed,
    );
    if let Some(e) = prediction_error.into_inner() {
        return Err(e.into());
    }
    let trial = outcome.map_err(CliError::from)?;

    let best_input = trial.best.position.clone();
    let predicted_outputs = surrogate.predict(&best_input)?;
    let best_objective = trial.best.value;
    Ok(PipelineReport {
        algorithm: kind.name().to_string(),
        input_names,
        best_input,
        output_names,
        predicted_outputs,
        chi_squared: chi,
        best_objective,
        trial,
        warnings,
    })
}
