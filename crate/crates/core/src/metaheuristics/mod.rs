//! Population metaheuristics over box-bounded continuous spaces.
//!
//! Four algorithms share the same contract: they minimize the scored
//! objective (see [`Direction`]), spend a budget counted in objective
//! evaluations, handle bounds by clamping, and are bit-reproducible from a
//! seed. Each run returns a [`TrialReport`] whose trace records the
//! best-so-far value at every improvement.

use alloc::vec::Vec;
use core::time::Duration;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Direction;
use crate::rng::RngStream;
use crate::space::{Candidate, SearchSpace};

pub mod cs;
pub mod fa;
pub mod ga;
pub mod sos;

pub use cs::{cs_run, levy_step, CsConfig};
pub use fa::{fa_run, FaConfig};
pub use ga::{ga_crossover, ga_mutate, ga_run, ga_select, GaConfig, Selection};
pub use sos::{sos_commensalism, sos_mutualism, sos_parasitism, sos_run, SosConfig};

/// One point of a best-so-far trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Objective evaluations spent when this best value was reached.
    pub evaluations: u64,
    pub best_value: f64,
}

/// Outcome of a single optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    /// Seed of the random stream that produced this trial.
    pub seed: u64,
    /// Fittest candidate ever evaluated (value in scored, minimized units).
    pub best: Candidate,
    pub evaluations_used: u64,
    /// Best value per improvement, ending with the final best.
    pub trace: Vec<TracePoint>,
    /// Wall-clock time, filled in by callers that measure it. Never
    /// serialized: emitted reports must be identical across re-runs.
    #[serde(skip, default)]
    pub elapsed: Duration,
}

/// Budgeted, direction-folding objective evaluator. All algorithms funnel
/// every evaluation through this type, which enforces the budget, rejects
/// NaN objective values, and maintains the best-ever candidate and trace.
pub struct Evaluator<F: FnMut(&[f64]) -> f64> {
    f: F,
    direction: Direction,
    budget: u64,
    used: u64,
    best: Option<Candidate>,
    trace: Vec<TracePoint>,
}

impl<F: FnMut(&[f64]) -> f64> Evaluator<F> {
    pub fn new(f: F, direction: Direction, budget: u64) -> Result<Self> {
        direction.validate()?;
        if budget == 0 {
            return Err(Error::config("evaluation budget must be positive"));
        }
        Ok(Evaluator {
            f,
            direction,
            budget,
            used: 0,
            best: None,
            trace: Vec::new(),
        })
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    /// Scores one position. Errors if the budget is already spent or the
    /// objective returns NaN.
    pub fn eval(&mut self, x: &[f64]) -> Result<f64> {
        if self.used >= self.budget {
            return Err(Error::evaluation("evaluation budget exceeded"));
        }
        let raw = (self.f)(x);
        let score = self.direction.score(raw);
        if score.is_nan() {
            return Err(Error::evaluation("objective returned NaN"));
        }
        self.used += 1;
        let improved = match &self.best {
            None => true,
            Some(b) => score < b.value,
        };
        if improved {
            self.best = Some(Candidate {
                position: x.to_vec(),
                value: score,
            });
            self.trace.push(TracePoint {
                evaluations: self.used,
                best_value: score,
            });
        }
        Ok(score)
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.best.as_ref()
    }

    /// Finalizes the run. The trace is closed with a point at the last
    /// evaluation so its final entry always equals the best value.
    pub fn into_report(mut self, seed: u64) -> Result<TrialReport> {
        let best = self
            .best
            .ok_or_else(|| Error::evaluation("run finished without any evaluation"))?;
        match self.trace.last() {
            Some(last) if last.evaluations == self.used => {}
            _ => self.trace.push(TracePoint {
                evaluations: self.used,
                best_value: best.value,
            }),
        }
        Ok(TrialReport {
            seed,
            best,
            evaluations_used: self.used,
            trace: self.trace,
            elapsed: Duration::ZERO,
        })
    }
}

/// Draws and scores an initial uniform population.
fn init_population<F: FnMut(&[f64]) -> f64>(
    space: &SearchSpace,
    n: usize,
    ev: &mut Evaluator<F>,
    rng: &mut RngStream,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut pop = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    for _ in 0..n {
        let x = space.random_position(rng);
        let s = ev.eval(&x)?;
        pop.push(x);
        scores.push(s);
    }
    Ok((pop, scores))
}

/// Index of the smallest score (first occurrence on ties).
fn argmin(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s < scores[best] {
            best = i;
        }
    }
    best
}

/// Random mask over `dims` entries, each set with probability `p`, with one
/// forced entry so the mask is never empty.
fn random_mask(rng: &mut RngStream, dims: usize, p: f64) -> Vec<bool> {
    let mut mask: Vec<bool> = (0..dims).map(|_| rng.chance(p)).collect();
    if !mask.iter().any(|&m| m) {
        let d = rng.index(dims);
        mask[d] = true;
    }
    mask
}
