//! Report emission. Every byte written here is a pure function of the
//! results: floats go through a shortest-roundtrip formatter and field
//! order is fixed, so identical runs produce identical files.

use std::path::{Path, PathBuf};

use formopt_core::metaheuristics::TrialReport;

use crate::comparison::{CellResult, CellSummary};
use crate::error::{CliError, Result};
use crate::timing::TimingTable;

/// Shortest decimal representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_string()
}

/// Summary table, one line per (algorithm, benchmark) cell.
pub fn summary_csv(cells: &[CellSummary]) -> String {
    let mut text = String::from("algorithm,benchmark,mean_f,std_f,mean_t_conv,trials\n");
    for c in cells {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.algorithm,
            c.benchmark,
            fmt_f64(c.mean_f),
            fmt_f64(c.std_f),
            fmt_f64(c.mean_t_conv),
            c.trials
        ));
    }
    text
}

/// Best-so-far series of every trial in a cell, for external plotting.
pub fn convergence_csv(reports: &[TrialReport]) -> String {
    let mut text = String::from("trial,evaluations,best_value\n");
    for (t, report) in reports.iter().enumerate() {
        for point in &report.trace {
            text.push_str(&format!(
                "{},{},{}\n",
                t,
                point.evaluations,
                fmt_f64(point.best_value)
            ));
        }
    }
    text
}

/// Timing table with the row-relative ranking; unconverged cells print ">".
pub fn timing_csv(table: &TimingTable) -> String {
    let mut text = String::from(
        "benchmark,algorithm,mean_conv_evals,normalized,converged,trials,mean_wall_seconds\n",
    );
    for row in &table.rows {
        for c in &row.cells {
            let normalized = c.normalized.map(fmt_f64).unwrap_or_else(|| ">".to_string());
            text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.benchmark,
                c.algorithm,
                fmt_f64(c.mean_conv_evals),
                normalized,
                c.converged,
                c.trials,
                fmt_f64(c.mean_wall_seconds)
            ));
        }
    }
    text
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes the full comparison output set: summary CSV, raw trials JSON,
/// and one convergence-series CSV per cell.
pub fn emit_bench_reports(dir: &Path, cells: &[CellResult]) -> Result<Vec<PathBuf>> {
    if cells.is_empty() {
        return Err(CliError::config("no results to emit"));
    }
    let series_dir = dir.join("convergence");
    std::fs::create_dir_all(&series_dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", series_dir.display())))?;
    let mut written = Vec::new();

    let summaries: Vec<CellSummary> = cells.iter().map(|c| c.summary.clone()).collect();
    let summary_path = dir.join("summary.csv");
    write_text(&summary_path, &summary_csv(&summaries))?;
    written.push(summary_path);

    let trials_path = dir.join("trials.json");
    let json = serde_json::to_string_pretty(cells)
        .map_err(|e| CliError::runtime(format!("cannot serialize trials: {e}")))?;
    write_text(&trials_path, &json)?;
    written.push(trials_path);

    for cell in cells {
        let name = format!("{}-{}.csv", cell.summary.algorithm, cell.summary.benchmark);
        let path = series_dir.join(name);
        write_text(&path, &convergence_csv(&cell.reports))?;
        written.push(path);
    }
    Ok(written)
}
