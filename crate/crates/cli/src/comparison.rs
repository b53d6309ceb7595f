//! The benchmark comparison experiment: every configured algorithm against
//! every configured benchmark, seeded per trial, summarized per cell.

use std::time::Instant;

use formopt_core::benchmarks::Benchmark;
use formopt_core::metaheuristics::{TracePoint, TrialReport};
use formopt_core::rng::derive_seed;
use formopt_core::stats::mean_std;
use formopt_core::Direction;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AlgorithmKind, ExperimentConfig};
use crate::error::{CliError, Result};

/// Per-cell statistics over the seeded trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: String,
    pub benchmark: String,
    pub mean_f: f64,
    pub std_f: f64,
    /// Per-coordinate mean of the best positions, sign-folded into the
    /// benchmark's canonical orthant so symmetric optima do not cancel.
    pub mean_position: Vec<f64>,
    pub std_position: Vec<f64>,
    /// Mean evaluations to the convergence point.
    pub mean_t_conv: f64,
    pub trials: usize,
}

/// One comparison cell: its summary plus the raw trial reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub summary: CellSummary,
    pub reports: Vec<TrialReport>,
}

/// Earliest index after which every value stays within
/// `epsilon * (|final| + 1)` of the final value. An empty series has no
/// final value to settle on; the first index (0) is returned for it.
pub fn detect_convergence(values: &[f64], epsilon: f64) -> usize {
    let Some(last) = values.last() else {
        return 0;
    };
    let tol = epsilon * (last.abs() + 1.0);
    for i in (0..values.len()).rev() {
        if (values[i] - last).abs() > tol {
            return i + 1;
        }
    }
    0
}

/// Convergence point of a best-so-far trace, in evaluations.
pub fn convergence_evaluations(trace: &[TracePoint], epsilon: f64) -> u64 {
    if trace.is_empty() {
        return 0;
    }
    let values: Vec<f64> = trace.iter().map(|p| p.best_value).collect();
    trace[detect_convergence(&values, epsilon)].evaluations
}

fn summarize(
    algorithm: &str,
    bench: &Benchmark,
    reports: &[TrialReport],
    epsilon: f64,
) -> CellSummary {
    let values: Vec<f64> = reports.iter().map(|r| r.best.value).collect();
    let (mean_f, std_f) = mean_std(&values);
    let folded: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| bench.fold.apply(&r.best.position))
        .collect();
    let dims = bench.dims();
    let mut mean_position = Vec::with_capacity(dims);
    let mut std_position = Vec::with_capacity(dims);
    for d in 0..dims {
        let coord: Vec<f64> = folded.iter().map(|p| p[d]).collect();
        let (m, s) = mean_std(&coord);
        mean_position.push(m);
        std_position.push(s);
    }
    let conv: Vec<f64> = reports
        .iter()
        .map(|r| convergence_evaluations(&r.trace, epsilon) as f64)
        .collect();
    let (mean_t_conv, _) = mean_std(&conv);
    CellSummary {
        algorithm: algorithm.to_string(),
        benchmark: bench.name.to_string(),
        mean_f,
        std_f,
        mean_position,
        std_position,
        mean_t_conv,
        trials: reports.len(),
    }
}

/// Runs the full comparison grid. Trials run in parallel; the result order
/// is benchmark-major within each algorithm, independent of scheduling.
pub fn run_comparison(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let (algorithms, benchmarks) = cfg.resolve()?;
    let params = cfg.params();

    let mut jobs = Vec::with_capacity(algorithms.len() * benchmarks.len() * cfg.trials);
    for (a_idx, &kind) in algorithms.iter().enumerate() {
        for (b_idx, bench) in benchmarks.iter().enumerate() {
            for t in 0..cfg.trials {
                jobs.push((a_idx, b_idx, t, kind, bench));
            }
        }
    }

    let run_one = |&(a_idx, b_idx, t, kind, bench): &(
        usize,
        usize,
        usize,
        AlgorithmKind,
        &Benchmark,
    )|
     -> Result<TrialReport> {
        let seed = derive_seed(cfg.base_seed, &[a_idx as u64, b_idx as u64, t as u64]);
        let f = bench.function();
        let started = Instant::now();
        let mut report = params
            .run(kind, &bench.space, f, Direction::Minimize, cfg.budget, seed)
            .map_err(CliError::from)?;
        report.elapsed = started.elapsed();
        Ok(report)
    };

    let reports: Vec<TrialReport> = if cfg.workers == 1 {
        jobs.iter().map(run_one).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| CliError::runtime(format!("cannot start worker pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(run_one).collect::<Result<_>>())?
    };

    let mut cells = Vec::with_capacity(algorithms.len() * benchmarks.len());
    let mut it = reports.into_iter();
    for &kind in &algorithms {
        for bench in &benchmarks {
            let cell_reports: Vec<TrialReport> = it.by_ref().take(cfg.trials).collect();
            let summary = summarize(kind.name(), bench, &cell_reports, cfg.convergence_epsilon);
            cells.push(CellResult {
                summary,
                reports: cell_reports,
            });
        }
    }
    Ok(cells)
}
