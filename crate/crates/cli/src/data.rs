//! Dataset plumbing: CSV ingestion and seeded synthetic generation.

use std::path::Path;

use formopt_core::rng::RngStream;
use formopt_core::surrogate::{Activation, Dataset, MlpNetwork};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Reads a CSV dataset, keeping the declared input and output columns.
///
/// Rows with missing or non-numeric cells in any declared column are
/// skipped; the returned warnings list them by 1-based data-row number.
/// A declared column absent from the header is a schema (data) error, and
/// so is a file with no usable rows.
pub fn ingest_dataset(
    path: &Path,
    input_columns: &[String],
    output_columns: &[String],
) -> Result<(Dataset, Vec<String>)> {
    if input_columns.is_empty() || output_columns.is_empty() {
        return Err(CliError::config("input and output column lists must be non-empty"));
    }
    for name in input_columns {
        if output_columns.contains(name) {
            return Err(CliError::config(format!(
                "column '{name}' is declared as both input and output"
            )));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::data(format!("cannot open dataset {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::data(format!("cannot read header of {}: {e}", path.display())))?
        .clone();
    let find = |name: &String| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            let have = headers.iter().collect::<Vec<_>>().join(", ");
            CliError::data(format!(
                "column '{name}' missing from {}; header has: {have}",
                path.display()
            ))
        })
    };
    let input_idx: Vec<usize> = input_columns.iter().map(find).collect::<Result<_>>()?;
    let output_idx: Vec<usize> = output_columns.iter().map(find).collect::<Result<_>>()?;

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut bad_rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let Ok(record) = record else {
            bad_rows.push(row);
            continue;
        };
        let parse_cells = |idx: &[usize]| -> Option<Vec<f64>> {
            idx.iter()
                .map(|&j| record.get(j).and_then(|c| c.parse::<f64>().ok()).filter(|v| v.is_finite()))
                .collect()
        };
        match (parse_cells(&input_idx), parse_cells(&output_idx)) {
            (Some(x), Some(y)) => {
                inputs.push(x);
                outputs.push(y);
            }
            _ => bad_rows.push(row),
        }
    }

    let mut warnings = Vec::new();
    if !bad_rows.is_empty() {
        let listed = bad_rows.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
        warnings.push(format!(
            "skipped {} malformed row(s) in {}: {listed}",
            bad_rows.len(),
            path.display()
        ));
    }
    if inputs.is_empty() {
        return Err(CliError::data(format!("no usable data rows in {}", path.display())));
    }
    let dataset = Dataset::new(
        input_columns.to_vec(),
        output_columns.to_vec(),
        inputs,
        outputs,
    )?;
    Ok((dataset, warnings))
}

/// Shape of the network that generates synthetic datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TeacherSpec {
    pub inputs: usize,
    pub outputs: usize,
    pub hidden: Vec<usize>,
    pub activation: Activation,
    /// Post-init weight scale. The default initialization is too close to
    /// linear to be an interesting regression target; a gain of a few
    /// pushes the hidden units into their curved range.
    pub gain: f64,
    /// Added to the output biases so targets sit away from zero, which
    /// keeps chi-squared denominators well conditioned.
    pub offset: f64,
}

impl Default for TeacherSpec {
    fn default() -> Self {
        TeacherSpec {
            inputs: 3,
            outputs: 4,
            hidden: vec![5],
            activation: Activation::Tanh,
            gain: 4.0,
            offset: 2.0,
        }
    }
}

/// Builds the seeded teacher network described by the spec.
pub fn build_teacher(spec: &TeacherSpec, seed: u64) -> Result<MlpNetwork> {
    if !(spec.gain.is_finite() && spec.offset.is_finite()) {
        return Err(CliError::config("teacher gain and offset must be finite"));
    }
    let mut sizes = vec![spec.inputs];
    sizes.extend_from_slice(&spec.hidden);
    sizes.push(spec.outputs);
    let mut rng = RngStream::new(seed);
    let mut net = MlpNetwork::init(&sizes, spec.activation, &mut rng)?;
    for layer in &mut net.weights {
        for unit in layer {
            for w in unit {
                *w *= spec.gain;
            }
        }
    }
    for layer in &mut net.biases {
        for b in layer {
            *b *= spec.gain;
        }
    }
    if let Some(out) = net.biases.last_mut() {
        for b in out {
            *b += spec.offset;
        }
    }
    Ok(net)
}

/// Samples a seeded dataset from a teacher network: inputs uniform over the
/// given bounds, outputs the teacher's forward pass plus gaussian noise.
pub fn synth_dataset(
    teacher: &MlpNetwork,
    bounds: &[(f64, f64)],
    rows: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<Dataset> {
    if rows == 0 {
        return Err(CliError::config("rows must be at least 1"));
    }
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(CliError::config("noise_sd must be non-negative and finite"));
    }
    let n_in = teacher.layer_sizes[0];
    let n_out = *teacher.layer_sizes.last().expect("at least two layers");
    if bounds.len() != n_in {
        return Err(CliError::config(format!(
            "teacher takes {n_in} inputs but {} bounds were given",
            bounds.len()
        )));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::config(format!("invalid input bounds [{lo}, {hi}]")));
        }
    }
    let mut rng = RngStream::new(seed);
    let mut inputs = Vec::with_capacity(rows);
    let mut outputs = Vec::with_capacity(rows);
    for _ in 0..rows {
        let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.uniform_in(lo, hi)).collect();
        let mut y = teacher.forward(&x);
        for v in &mut y {
            *v += noise_sd * rng.normal();
        }
        inputs.push(x);
        outputs.push(y);
    }
    let input_names = (1..=n_in).map(|i| format!("x{i}")).collect();
    let output_names = (1..=n_out).map(|i| format!("y{i}")).collect();
    Ok(Dataset::new(input_names, output_names, inputs, outputs)?)
}

/// Writes a dataset as a CSV file with a header row.
pub fn write_dataset_csv(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut text = String::new();
    let header: Vec<&str> = dataset
        .input_names
        .iter()
        .chain(&dataset.output_names)
        .map(|s| s.as_str())
        .collect();
    text.push_str(&header.join(","));
    text.push('\n');
    let mut buf = ryu::Buffer::new();
    for (x, y) in dataset.inputs.iter().zip(&dataset.outputs) {
        let cells: Vec<String> = x.iter().chain(y).map(|v| buf.format(*v).to_string()).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}
