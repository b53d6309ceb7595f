//! Optimization directions and objective descriptors.
//!
//! Every search algorithm in this crate minimizes internally. Maximization
//! and target-value problems are folded into minimization here, at the
//! objective layer: maximize f becomes minimize -f, and "reach t" becomes
//! minimize |f - t|.

use alloc::string::String;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What counts as an improvement of the raw objective value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
    /// Drive the objective as close as possible to the given value.
    Target(f64),
}

impl Direction {
    /// Folds a raw objective value into the internal minimization score.
    pub fn score(&self, raw: f64) -> f64 {
        match self {
            Direction::Minimize => raw,
            Direction::Maximize => -raw,
            Direction::Target(t) => (raw - t).abs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Direction::Target(t) = self {
            if !t.is_finite() {
                return Err(Error::config("target value must be finite"));
            }
        }
        Ok(())
    }
}

/// Returns true when `a` is a strict improvement over `b` under the given
/// direction. Ties are not improvements, so incumbents are retained.
pub fn better(a: f64, b: f64, direction: Direction) -> Result<bool> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::evaluation("cannot compare NaN objective values"));
    }
    Ok(direction.score(a) < direction.score(b))
}

/// What is being optimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// A registered benchmark function, by registry name.
    Benchmark(String),
    /// A trained surrogate model, by model reference (e.g. file path).
    Surrogate(String),
}

/// Declarative description of an optimization problem: what to evaluate,
/// which way improvement points, and how many evaluations are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub direction: Direction,
    pub max_evaluations: u64,
}

impl ObjectiveSpec {
    pub fn validate(&self) -> Result<()> {
        self.direction.validate()?;
        if self.max_evaluations == 0 {
            return Err(Error::config("max_evaluations must be positive"));
        }
        Ok(())
    }
}
