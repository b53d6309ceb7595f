//! Relative convergence-speed experiment.
//!
//! Each algorithm runs against each benchmark inside a short evaluation
//! window; the per-trial convergence point (in evaluations) is averaged
//! and normalized by the fastest algorithm in the same benchmark row.
//! Trials whose best value is still moving near the end of the window have
//! not converged; cells where most trials fail to converge are flagged
//! instead of ranked. Wall-clock means are reported alongside for context
//! but never enter the ranking, which keeps the table hardware-independent.

use std::time::Instant;

use formopt_core::rng::derive_seed;
use formopt_core::stats::mean_std;
use formopt_core::Direction;
use serde::{Deserialize, Serialize};

use crate::comparison::convergence_evaluations;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// A trial converges only if its convergence point lands in the first 65%
/// of the window, leaving a clear plateau over the final third; a later
/// point means the search was still improving when the window closed,
/// which is the tabular stand-in for a curve that never visibly flattens.
pub const CONVERGED_FRACTION: f64 = 0.65;

/// Default observation window, in evaluations. Deliberately much shorter
/// than a full comparison budget: the point is to catch differences in
/// early convergence, not final accuracy.
pub const DEFAULT_WINDOW: u64 = 4_000;

/// One (algorithm, benchmark) timing measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingCell {
    pub algorithm: String,
    /// Mean convergence point in evaluations; non-converged trials are
    /// counted at the window length, so this is a censored mean.
    pub mean_conv_evals: f64,
    /// Trials that converged within the window.
    pub converged: usize,
    pub trials: usize,
    /// Censored mean divided by the row-fastest censored mean. `None`
    /// flags a cell where most trials never converged (printed as ">").
    pub normalized: Option<f64>,
    pub mean_wall_seconds: f64,
}

/// One benchmark row of the timing table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub benchmark: String,
    pub cells: Vec<TimingCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub window: u64,
    pub rows: Vec<TimingRow>,
}

/// Default timing experiment: the five two-dimensional benchmarks under a
/// short window. Everything else follows the comparison defaults.
pub fn timing_defaults() -> ExperimentConfig {
    ExperimentConfig {
        benchmarks: formopt_core::benchmarks::canonical_order()
            .iter()
            .filter(|n| **n != "sphere")
            .map(|s| s.to_string())
            .collect(),
        budget: DEFAULT_WINDOW,
        ..ExperimentConfig::default()
    }
}

/// Runs the timing grid. Trials run on a single worker, in a fixed order,
/// so wall-clock numbers are not skewed by contention.
pub fn run_timing(cfg: &ExperimentConfig) -> Result<TimingTable> {
    let (algorithms, benchmarks) = cfg.resolve()?;
    let params = cfg.params();
    let window = cfg.budget;
    let cutoff = (window as f64 * CONVERGED_FRACTION).floor() as u64;

    let mut rows = Vec::with_capacity(benchmarks.len());
    for (b_idx, bench) in benchmarks.iter().enumerate() {
        let mut cells = Vec::with_capacity(algorithms.len());
        for (a_idx, &kind) in algorithms.iter().enumerate() {
            let mut conv = Vec::with_capacity(cfg.trials);
            let mut wall = Vec::with_capacity(cfg.trials);
            let mut converged = 0usize;
            for t in 0..cfg.trials {
                let seed = derive_seed(cfg.base_seed, &[a_idx as u64, b_idx as u64, t as u64]);
                let started = Instant::now();
                let report = params
                    .run(
                        kind,
                        &bench.space,
                        bench.function(),
                        Direction::Minimize,
                        window,
                        seed,
                    )
                    .map_err(CliError::from)?;
                wall.push(started.elapsed().as_secs_f64());
                let point = convergence_evaluations(&report.trace, cfg.convergence_epsilon);
                if point <= cutoff {
                    converged += 1;
                    conv.push(point as f64);
                } else {
                    conv.push(window as f64);
                }
            }
            let (mean_conv_evals, _) = mean_std(&conv);
            let (mean_wall_seconds, _) = mean_std(&wall);
            cells.push(TimingCell {
                algorithm: kind.name().to_string(),
                mean_conv_evals,
                converged,
                trials: cfg.trials,
                normalized: None,
                mean_wall_seconds,
            });
        }
        // Normalize by the fastest cell that actually converged in a
        // majority of its trials; cells below that bar stay flagged.
        let fastest = cells
            .iter()
            .filter(|c| 2 * c.converged >= c.trials)
            .map(|c| c.mean_conv_evals)
            .fold(f64::INFINITY, f64::min);
        if fastest.is_finite() && fastest > 0.0 {
            for cell in &mut cells {
                if 2 * cell.converged >= cell.trials {
                    cell.normalized = Some(cell.mean_conv_evals / fastest);
                }
            }
        }
        rows.push(TimingRow {
            benchmark: bench.name.to_string(),
            cells,
        });
    }
    Ok(TimingTable { window, rows })
}
