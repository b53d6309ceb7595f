//! Experiment configuration: one JSON document per subcommand, with CLI
//! flags overriding individual fields.

use std::path::Path;

use formopt_core::benchmarks::{self, Benchmark};
use formopt_core::metaheuristics::{
    cs_run, fa_run, ga_run, sos_run, CsConfig, FaConfig, GaConfig, SosConfig, TrialReport,
};
use formopt_core::samplesize::AssessmentPlan;
use formopt_core::{Direction, SearchSpace};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// The four compared metaheuristics, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Ga,
    Cs,
    Sos,
    Fa,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::Ga,
        AlgorithmKind::Cs,
        AlgorithmKind::Sos,
        AlgorithmKind::Fa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Ga => "ga",
            AlgorithmKind::Cs => "cs",
            AlgorithmKind::Sos => "sos",
            AlgorithmKind::Fa => "fa",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ga" => Ok(AlgorithmKind::Ga),
            "cs" => Ok(AlgorithmKind::Cs),
            "sos" => Ok(AlgorithmKind::Sos),
            "fa" => Ok(AlgorithmKind::Fa),
            other => Err(CliError::config(format!(
                "unknown algorithm '{other}'; valid names: ga, cs, sos, fa"
            ))),
        }
    }
}

/// Per-algorithm parameter blocks, shared by every subcommand that runs a
/// metaheuristic. Each block defaults to the comparison settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgoParams {
    pub ga: GaConfig,
    pub cs: CsConfig,
    pub sos: SosConfig,
    pub fa: FaConfig,
}

impl AlgoParams {
    pub fn population(&self, kind: AlgorithmKind) -> usize {
        match kind {
            AlgorithmKind::Ga => self.ga.population,
            AlgorithmKind::Cs => self.cs.population,
            AlgorithmKind::Sos => self.sos.population,
            AlgorithmKind::Fa => self.fa.population,
        }
    }

    /// Runs one seeded trial of the chosen algorithm.
    pub fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        kind: AlgorithmKind,
        space: &SearchSpace,
        objective: F,
        direction: Direction,
        budget: u64,
        seed: u64,
    ) -> formopt_core::error::Result<TrialReport> {
        match kind {
            AlgorithmKind::Ga => ga_run(space, objective, direction, budget, &self.ga, seed),
            AlgorithmKind::Cs => cs_run(space, objective, direction, budget, &self.cs, seed),
            AlgorithmKind::Sos => sos_run(space, objective, direction, budget, &self.sos, seed),
            AlgorithmKind::Fa => fa_run(space, objective, direction, budget, &self.fa, seed),
        }
    }
}

fn default_algorithms() -> Vec<String> {
    AlgorithmKind::ALL.iter().map(|a| a.name().to_string()).collect()
}

fn default_benchmarks() -> Vec<String> {
    benchmarks::canonical_order().iter().map(|s| s.to_string()).collect()
}

fn default_trials() -> usize {
    10
}

fn default_budget() -> u64 {
    50_000
}

fn default_epsilon() -> f64 {
    1e-6
}

/// Full description of one comparison or timing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Algorithm names to include, in column order.
    pub algorithms: Vec<String>,
    /// Benchmark names to include, in row order.
    pub benchmarks: Vec<String>,
    /// Seeded runs per (algorithm, benchmark) cell.
    pub trials: usize,
    /// Objective-evaluation budget per trial. The timing experiment reads
    /// this as its observation window.
    pub budget: u64,
    /// Base seed; every trial derives its own stream from it.
    pub base_seed: u64,
    /// Relative tolerance used by convergence detection.
    pub convergence_epsilon: f64,
    /// Worker threads for the comparison; 0 means one per logical CPU.
    pub workers: usize,
    pub ga: GaConfig,
    pub cs: CsConfig,
    pub sos: SosConfig,
    pub fa: FaConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algorithms: default_algorithms(),
            benchmarks: default_benchmarks(),
            trials: default_trials(),
            budget: default_budget(),
            base_seed: 1,
            convergence_epsilon: default_epsilon(),
            workers: 0,
            ga: GaConfig::default(),
            cs: CsConfig::default(),
            sos: SosConfig::default(),
            fa: FaConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn params(&self) -> AlgoParams {
        AlgoParams {
            ga: self.ga.clone(),
            cs: self.cs.clone(),
            sos: self.sos.clone(),
            fa: self.fa.clone(),
        }
    }

    /// Validates the config and resolves names into registry entries.
    pub fn resolve(&self) -> Result<(Vec<AlgorithmKind>, Vec<Benchmark>)> {
        if self.trials == 0 {
            return Err(CliError::config("trials must be at least 1"));
        }
        if !(self.convergence_epsilon > 0.0 && self.convergence_epsilon.is_finite()) {
            return Err(CliError::config("convergence_epsilon must be positive and finite"));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::config("algorithms list is empty"));
        }
        if self.benchmarks.is_empty() {
            return Err(CliError::config("benchmarks list is empty"));
        }
        let algorithms: Vec<AlgorithmKind> = self
            .algorithms
            .iter()
            .map(|n| AlgorithmKind::parse(n))
            .collect::<Result<_>>()?;
        let benchmarks: Vec<Benchmark> = self
            .benchmarks
            .iter()
            .map(|n| benchmarks::lookup(n).map_err(CliError::from))
            .collect::<Result<_>>()?;
        let params = self.params();
        for &kind in &algorithms {
            let pop = params.population(kind) as u64;
            if self.budget < pop {
                return Err(CliError::config(format!(
                    "budget {} is below the {} population {}; every algorithm needs at least one full initialization",
                    self.budget,
                    kind.name(),
                    pop
                )));
            }
        }
        Ok((algorithms, benchmarks))
    }
}

/// One optimized output column: direction, and its weight in the scalarized
/// objective when several outputs are optimized jointly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputObjective {
    pub name: String,
    pub direction: Direction,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

/// An input column together with the bounds that define its search range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputColumn {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

/// Model-then-optimize pipeline description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// CSV dataset path.
    pub dataset: String,
    pub inputs: Vec<InputColumn>,
    pub outputs: Vec<OutputObjective>,
    /// Surrogate family and hyperparameters (same schema as assessment
    /// trainers).
    pub surrogate: formopt_core::samplesize::TrainerSpec,
    #[serde(default)]
    pub surrogate_seed: u64,
    /// Metaheuristic to run over the surrogate: ga, cs, sos, or fa.
    pub algorithm: String,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub ga: GaConfig,
    #[serde(default)]
    pub cs: CsConfig,
    #[serde(default)]
    pub sos: SosConfig,
    #[serde(default)]
    pub fa: FaConfig,
}

impl PipelineConfig {
    pub fn params(&self) -> AlgoParams {
        AlgoParams {
            ga: self.ga.clone(),
            cs: self.cs.clone(),
            sos: self.sos.clone(),
            fa: self.fa.clone(),
        }
    }
}

/// Sample-size assessment run: a dataset plus a protocol plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessConfig {
    pub dataset: String,
    pub input_columns: Vec<String>,
    pub output_columns: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    pub plan: AssessmentPlan,
}

/// Loads a JSON config file into any deserializable config type. Both a
/// missing file and a malformed document are configuration errors.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}
