//! Sample-size adequacy protocols.
//!
//! Four ways of asking "how many training rows does the surrogate
//! actually need": sub-sampling of a fixed training portion, repeated
//! random cross-validation, a nested no-repetition scheme, and a critical
//! sampling size (CSS) heuristic that grows a cluster-stratified subset
//! until its performance is within a threshold of the full-data baseline.
//!
//! All protocols carve their evaluation rows apart from training rows and
//! hard-assert that the two never intersect.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::mean_std;
use crate::surrogate::{
    chi_squared, fit_anfis, fit_mlp, mse, split_indices, Activation, Dataset, MfShape,
    MinMaxScaler, Surrogate, TrainConfig,
};

/// Model-performance measure used by the assessment rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    ChiSquared,
    Mse,
}

impl Metric {
    pub fn compute(self, expected: &[f64], predicted: &[f64]) -> Result<f64> {
        match self {
            Metric::ChiSquared => chi_squared(expected, predicted),
            Metric::Mse => mse(expected, predicted),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::ChiSquared => "chi_squared",
            Metric::Mse => "mse",
        }
    }
}

/// How to train the surrogate under assessment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TrainerSpec {
    Mlp {
        #[serde(default)]
        hidden_layers: Vec<usize>,
        activation: Activation,
        #[serde(default)]
        train: TrainConfig,
    },
    Anfis {
        labels_per_input: usize,
        shape: MfShape,
        #[serde(default)]
        train: TrainConfig,
    },
}

impl TrainerSpec {
    pub fn fit(&self, data: &Dataset, seed: u64) -> Result<Surrogate> {
        match self {
            TrainerSpec::Mlp {
                hidden_layers,
                activation,
                train,
            } => fit_mlp(data, hidden_layers, *activation, train, seed).map(|(s, _)| s),
            TrainerSpec::Anfis {
                labels_per_input,
                shape,
                train,
            } => fit_anfis(data, *labels_per_input, *shape, train).map(|(s, _)| s),
        }
    }
}

fn default_test_fraction() -> f64 {
    0.2
}

/// Protocol choice plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Protocol {
    /// Carve a test set once, then partition the remaining training
    /// portion into as many disjoint subsets of each size as fit.
    Subsampling {
        sizes: Vec<usize>,
        #[serde(default = "default_test_fraction")]
        test_fraction: f64,
    },
    /// For each size, `repeats` independent random train/test splits of
    /// the whole dataset (train `size`, test the rest).
    RepeatedCv { sizes: Vec<usize>, repeats: usize },
    /// Carve a test set once, then evaluate nested training prefixes of
    /// one permutation: each size is measured exactly once.
    NoRepetition {
        sizes: Vec<usize>,
        #[serde(default = "default_test_fraction")]
        test_fraction: f64,
    },
    /// Critical sampling size: cluster the training portion, draw
    /// `initial_per_cluster + extra_per_cluster` rows per cluster, and
    /// double the per-cluster count until the metric is within
    /// `threshold` (relative) of the full-portion baseline.
    Css {
        clusters: usize,
        initial_per_cluster: usize,
        extra_per_cluster: usize,
        threshold: f64,
        #[serde(default = "default_test_fraction")]
        test_fraction: f64,
    },
}

impl Protocol {
    pub fn method_name(&self) -> &'static str {
        match self {
            Protocol::Subsampling { .. } => "subsampling",
            Protocol::RepeatedCv { .. } => "repeated_cv",
            Protocol::NoRepetition { .. } => "no_repetition",
            Protocol::Css { .. } => "css",
        }
    }
}

/// Full description of one assessment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentPlan {
    pub protocol: Protocol,
    pub trainer: TrainerSpec,
    #[serde(default)]
    pub metric: Metric,
}

/// Rows carved off for evaluation under a given fraction; mirrors the
/// arithmetic of [`split_indices`].
fn carved_test_size(n: usize, test_fraction: f64) -> usize {
    ((test_fraction * n as f64).round() as usize).clamp(1, n - 1)
}

fn check_fraction(f: f64) -> Result<()> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::config("test_fraction must lie in (0, 1)"));
    }
    Ok(())
}

fn check_sizes(sizes: &[usize], cap: usize, what: &str) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::config("sizes must not be empty"));
    }
    if sizes[0] == 0 {
        return Err(Error::config("sizes must be positive"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("sizes must be strictly increasing"));
    }
    if *sizes.last().unwrap() > cap {
        return Err(Error::config(alloc::format!(
            "largest size {} exceeds the {what} ({cap} rows)",
            sizes.last().unwrap()
        )));
    }
    Ok(())
}

impl AssessmentPlan {
    pub fn validate(&self, n_rows: usize) -> Result<()> {
        if n_rows < 2 {
            return Err(Error::config("assessment needs at least two rows"));
        }
        match &self.protocol {
            Protocol::Subsampling {
                sizes,
                test_fraction,
            }
            | Protocol::NoRepetition {
                sizes,
                test_fraction,
            } => {
                check_fraction(*test_fraction)?;
                let pool = n_rows - carved_test_size(n_rows, *test_fraction);
                check_sizes(sizes, pool, "training portion")?;
            }
            Protocol::RepeatedCv { sizes, repeats } => {
                if *repeats == 0 {
                    return Err(Error::config("repeats must be at least 1"));
                }
                // Each split still needs a nonempty test remainder.
                check_sizes(sizes, n_rows - 1, "dataset minus one test row")?;
            }
            Protocol::Css {
                clusters,
                initial_per_cluster,
                extra_per_cluster: _,
                threshold,
                test_fraction,
            } => {
                check_fraction(*test_fraction)?;
                if *clusters == 0 {
                    return Err(Error::config("clusters must be at least 1"));
                }
                if *initial_per_cluster == 0 {
                    return Err(Error::config("initial_per_cluster must be at least 1"));
                }
                if !(*threshold > 0.0 && *threshold < 1.0) {
                    return Err(Error::config("threshold must lie in (0, 1)"));
                }
                let pool = n_rows - carved_test_size(n_rows, *test_fraction);
                if *clusters > pool {
                    return Err(Error::config(alloc::format!(
                        "{clusters} clusters exceed the {pool}-row training portion"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// CSS verdict attached to each iteration row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CssVerdict {
    Adequate,
    Inadequate,
}

/// One summarized measurement row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentRow {
    pub train_size: usize,
    pub mean_metric: f64,
    pub std_metric: f64,
    pub repeats: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<CssVerdict>,
}

/// CSS-specific outcome summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CssOutcome {
    /// Metric of the model trained on the entire training portion.
    pub baseline_metric: f64,
    /// First adequate training size, when one was found.
    pub adequate_size: Option<usize>,
    /// True when the schedule ran out of rows before a verdict.
    pub exhausted: bool,
}

/// Result of one assessment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub method: String,
    pub metric: Metric,
    pub rows: Vec<AssessmentRow>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub css: Option<CssOutcome>,
}

impl AssessmentReport {
    fn new(method: &str, metric: Metric) -> Self {
        AssessmentReport {
            method: String::from(method),
            metric,
            rows: Vec::new(),
            notes: Vec::new(),
            css: None,
        }
    }
}

/// Training rows must never appear in the evaluation set; a leak would
/// silently inflate every accuracy number, so this stays on in release.
pub fn assert_no_leakage(train: &[usize], test: &[usize]) {
    let mut sorted = test.to_vec();
    sorted.sort_unstable();
    for i in train {
        assert!(
            sorted.binary_search(i).is_err(),
            "training rows leaked into the evaluation set"
        );
    }
}

/// Metric of a trained surrogate over every output cell of a test set.
fn score(model: &Surrogate, test: &Dataset, metric: Metric) -> Result<f64> {
    let mut expected = Vec::new();
    let mut predicted = Vec::new();
    for (x, y) in test.inputs.iter().zip(&test.outputs) {
        let p = model.predict(x)?;
        expected.extend_from_slice(y);
        predicted.extend_from_slice(&p);
    }
    metric.compute(&expected, &predicted)
}

/// Dispatches to the protocol named in the plan.
pub fn assess(dataset: &Dataset, plan: &AssessmentPlan, rng: &mut RngStream) -> Result<AssessmentReport> {
    match &plan.protocol {
        Protocol::Subsampling { .. } => subsampling_assess(dataset, plan, rng),
        Protocol::RepeatedCv { .. } => repeated_cv_assess(dataset, plan, rng),
        Protocol::NoRepetition { .. } => no_repetition_assess(dataset, plan, rng),
        Protocol::Css { .. } => css_assess(dataset, plan, rng),
    }
}

/// Sub-sampling: one fixed test set; for each size the training portion
/// is re-shuffled and cut into disjoint subsets of that size, each
/// trained and scored against the same test rows.
pub fn subsampling_assess(
    dataset: &Dataset,
    plan: &AssessmentPlan,
    rng: &mut RngStream,
) -> Result<AssessmentReport> {
    let Protocol::Subsampling {
        sizes,
        test_fraction,
    } = &plan.protocol
    else {
        return Err(Error::config("plan method is not subsampling"));
    };
    plan.validate(dataset.n_rows())?;
    let (pool, test_idx) = split_indices(dataset.n_rows(), *test_fraction, rng)?;
    let test_set = dataset.subset(&test_idx);
    let mut report = AssessmentReport::new("subsampling", plan.metric);
    for &size in sizes {
        let mut perm = pool.clone();
        rng.shuffle(&mut perm);
        let remainder = perm.len() % size;
        if remainder > 0 {
            report.notes.push(alloc::format!(
                "size {size}: {remainder} training rows left unused"
            ));
        }
        let mut scores = Vec::with_capacity(perm.len() / size);
        for chunk in perm.chunks_exact(size) {
            assert_no_leakage(chunk, &test_idx);
            let model = plan.trainer.fit(&dataset.subset(chunk), rng.next_seed())?;
            scores.push(score(&model, &test_set, plan.metric)?);
        }
        let (mean, std) = mean_std(&scores);
        report.rows.push(AssessmentRow {
            train_size: size,
            mean_metric: mean,
            std_metric: std,
            repeats: scores.len(),
            verdict: None,
        });
    }
    Ok(report)
}

/// Repeated cross-validation: for each size, `repeats` fresh random
/// splits train on `size` rows and test on all the others.
pub fn repeated_cv_assess(
    dataset: &Dataset,
    plan: &AssessmentPlan,
    rng: &mut RngStream,
) -> Result<AssessmentReport> {
    let Protocol::RepeatedCv { sizes, repeats } = &plan.protocol else {
        return Err(Error::config("plan method is not repeated_cv"));
    };
    plan.validate(dataset.n_rows())?;
    let n = dataset.n_rows();
    let mut report = AssessmentReport::new("repeated_cv", plan.metric);
    for &size in sizes {
        let mut scores = Vec::with_capacity(*repeats);
        for _ in 0..*repeats {
            let mut idx: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut idx);
            let (train_idx, test_idx) = idx.split_at(size);
            assert_no_leakage(train_idx, test_idx);
            let model = plan.trainer.fit(&dataset.subset(train_idx), rng.next_seed())?;
            scores.push(score(&model, &dataset.subset(test_idx), plan.metric)?);
        }
        let (mean, std) = mean_std(&scores);
        report.rows.push(AssessmentRow {
            train_size: size,
            mean_metric: mean,
            std_metric: std,
            repeats: *repeats,
            verdict: None,
        });
    }
    Ok(report)
}

/// No-repetition scheme: one test carve, one permutation of the training
/// portion, and nested prefixes of it as the training sets, so every size
/// is measured exactly once.
pub fn no_repetition_assess(
    dataset: &Dataset,
    plan: &AssessmentPlan,
    rng: &mut RngStream,
) -> Result<AssessmentReport> {
    let Protocol::NoRepetition {
        sizes,
        test_fraction,
    } = &plan.protocol
    else {
        return Err(Error::config("plan method is not no_repetition"));
    };
    plan.validate(dataset.n_rows())?;
    let (pool, test_idx) = split_indices(dataset.n_rows(), *test_fraction, rng)?;
    let test_set = dataset.subset(&test_idx);
    let mut report = AssessmentReport::new("no_repetition", plan.metric);
    for &size in sizes {
        // Prefixes of one permutation: each training set contains every
        // smaller one by construction.
        let train_idx = &pool[..size];
        assert_no_leakage(train_idx, &test_idx);
        let model = plan.trainer.fit(&dataset.subset(train_idx), rng.next_seed())?;
        let value = score(&model, &test_set, plan.metric)?;
        report.rows.push(AssessmentRow {
            train_size: size,
            mean_metric: value,
            std_metric: 0.0,
            repeats: 1,
            verdict: None,
        });
    }
    Ok(report)
}

/// CSS heuristic: cluster the training portion, then grow a stratified
/// subset (per-cluster draws doubling each round) until its metric is
/// within the threshold of the full-portion baseline, or the rows run
/// out.
pub fn css_assess(
    dataset: &Dataset,
    plan: &AssessmentPlan,
    rng: &mut RngStream,
) -> Result<AssessmentReport> {
    let Protocol::Css {
        clusters,
        initial_per_cluster,
        extra_per_cluster,
        threshold,
        test_fraction,
    } = &plan.protocol
    else {
        return Err(Error::config("plan method is not css"));
    };
    plan.validate(dataset.n_rows())?;
    let (k, d, t) = (*clusters, *extra_per_cluster, *threshold);

    let (pool, test_idx) = split_indices(dataset.n_rows(), *test_fraction, rng)?;
    let test_set = dataset.subset(&test_idx);
    let mut report = AssessmentReport::new("css", plan.metric);

    // Full-portion baseline the subsets are measured against.
    assert_no_leakage(&pool, &test_idx);
    let baseline = plan.trainer.fit(&dataset.subset(&pool), rng.next_seed())?;
    let baseline_metric = score(&baseline, &test_set, plan.metric)?;

    // Stratification structure: k-means over the normalized pool inputs.
    let pool_inputs: Vec<Vec<f64>> = pool.iter().map(|&i| dataset.inputs[i].clone()).collect();
    let scaler = MinMaxScaler::fit(&pool_inputs)?;
    let assignment = kmeans(&scaler.transform_all(&pool_inputs), k, 10, rng)?;
    let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    for (pos, &c) in assignment.iter().enumerate() {
        members[c].push(pool[pos]);
    }

    let mut m = *initial_per_cluster;
    let mut adequate_size = None;
    let mut exhausted = false;
    loop {
        let per_cluster = match m.checked_add(d) {
            Some(p) if p.checked_mul(k).is_some_and(|total| total <= pool.len()) => p,
            _ => {
                exhausted = true;
                break;
            }
        };
        let mut train_idx = Vec::new();
        let mut capped = false;
        for rows in &mut members {
            rng.shuffle(rows);
            let take = per_cluster.min(rows.len());
            capped |= take < per_cluster;
            train_idx.extend_from_slice(&rows[..take]);
        }
        if capped {
            report.notes.push(alloc::format!(
                "per-cluster draw {per_cluster} capped by a smaller cluster"
            ));
        }
        assert_no_leakage(&train_idx, &test_idx);
        let model = plan.trainer.fit(&dataset.subset(&train_idx), rng.next_seed())?;
        let subset_metric = score(&model, &test_set, plan.metric)?;
        let gap = (subset_metric - baseline_metric) / baseline_metric.max(1e-12);
        let adequate = gap <= t;
        report.rows.push(AssessmentRow {
            train_size: train_idx.len(),
            mean_metric: subset_metric,
            std_metric: 0.0,
            repeats: 1,
            verdict: Some(if adequate {
                CssVerdict::Adequate
            } else {
                CssVerdict::Inadequate
            }),
        });
        if adequate {
            adequate_size = Some(train_idx.len());
            break;
        }
        match m.checked_mul(2) {
            Some(next) => m = next,
            None => {
                exhausted = true;
                break;
            }
        }
    }
    report.css = Some(CssOutcome {
        baseline_metric,
        adequate_size,
        exhausted,
    });
    Ok(report)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's k-means with Forgy init, several seeded restarts, and
/// empty-cluster reseeding to the worst-fit point. Returns the assignment
/// of the restart with the lowest within-cluster sum of squares.
fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, rng: &mut RngStream) -> Result<Vec<usize>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::config(alloc::format!(
            "cluster count {k} must be between 1 and the {n} available points"
        )));
    }
    let dim = points[0].len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut idx: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut idx);
        let mut centers: Vec<Vec<f64>> = idx[..k].iter().map(|&i| points[i].clone()).collect();
        let mut assign = alloc::vec![0usize; n];
        for _ in 0..100 {
            let mut changed = false;
            for (p, a) in points.iter().zip(assign.iter_mut()) {
                let mut nearest = 0;
                let mut nearest_d = f64::INFINITY;
                for (c, center) in centers.iter().enumerate() {
                    let d = dist2(p, center);
                    if d < nearest_d {
                        nearest_d = d;
                        nearest = c;
                    }
                }
                if nearest != *a {
                    *a = nearest;
                    changed = true;
                }
            }
            let mut sums = alloc::vec![alloc::vec![0.0f64; dim]; k];
            let mut counts = alloc::vec![0usize; k];
            for (p, &a) in points.iter().zip(&assign) {
                counts[a] += 1;
                for (s, v) in sums[a].iter_mut().zip(p) {
                    *s += v;
                }
            }
            for c in 0..k {
                if counts[c] == 0 {
                    // Reseed a starved cluster at the point farthest from
                    // its current center.
                    let far = points
                        .iter()
                        .enumerate()
                        .max_by(|(i, p), (j, q)| {
                            let di = dist2(p, &centers[assign[*i]]);
                            let dj = dist2(q, &centers[assign[*j]]);
                            di.partial_cmp(&dj).expect("distances are finite")
                        })
                        .map(|(i, _)| i)
                        .expect("points is nonempty");
                    centers[c] = points[far].clone();
                    changed = true;
                } else {
                    for (ctr, s) in centers[c].iter_mut().zip(&sums[c]) {
                        *ctr = s / counts[c] as f64;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let sse: f64 = points
            .iter()
            .zip(&assign)
            .map(|(p, &a)| dist2(p, &centers[a]))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| sse < *b) {
            best = Some((sse, assign));
        }
    }
    Ok(best.expect("at least one restart ran").1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// y = 2x + 5 on n evenly spaced points; outputs stay well away from
    /// zero so the chi-squared metric is defined everywhere.
    fn line_dataset(n: usize) -> Dataset {
        let inputs: Vec<Vec<f64>> = (0..n).map(|i| alloc::vec![i as f64]).collect();
        let outputs: Vec<Vec<f64>> = inputs.iter().map(|x| alloc::vec![2.0 * x[0] + 5.0]).collect();
        Dataset::new(alloc::vec!["x".into()], alloc::vec!["y".into()], inputs, outputs).unwrap()
    }

    fn linear_trainer() -> TrainerSpec {
        TrainerSpec::Mlp {
            hidden_layers: alloc::vec![],
            activation: Activation::Sigmoid,
            train: TrainConfig {
                learning_rate: 0.1,
                epochs: 400,
                ..TrainConfig::default()
            },
        }
    }

    #[test]
    fn subsampling_partitions_the_training_portion() {
        // 30 rows at 20% test fraction leave a 24-row portion; size 12
        // gives two disjoint subsets, each scored on the same 6 rows.
        let data = line_dataset(30);
        let plan = AssessmentPlan {
            protocol: Protocol::Subsampling {
                sizes: alloc::vec![12],
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = subsampling_assess(&data, &plan, &mut RngStream::new(3)).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].train_size, 12);
        assert_eq!(report.rows[0].repeats, 2);
        assert!(report.notes.is_empty(), "12 divides 24 exactly");
    }

    #[test]
    fn subsampling_notes_unused_remainder() {
        let data = line_dataset(30);
        let plan = AssessmentPlan {
            protocol: Protocol::Subsampling {
                sizes: alloc::vec![9],
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = subsampling_assess(&data, &plan, &mut RngStream::new(3)).unwrap();
        assert_eq!(report.rows[0].repeats, 2);
        assert_eq!(report.notes.len(), 1);
        assert!(report.notes[0].contains("6 training rows"), "24 mod 9 = 6: {}", report.notes[0]);
    }

    #[test]
    fn subsampling_single_subset_has_zero_std() {
        let data = line_dataset(30);
        let plan = AssessmentPlan {
            protocol: Protocol::Subsampling {
                sizes: alloc::vec![24],
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = subsampling_assess(&data, &plan, &mut RngStream::new(3)).unwrap();
        assert_eq!(report.rows[0].repeats, 1);
        assert_eq!(report.rows[0].std_metric, 0.0);
    }

    #[test]
    fn repeated_cv_reports_one_row_per_size() {
        let data = line_dataset(20);
        let plan = AssessmentPlan {
            protocol: Protocol::RepeatedCv {
                sizes: alloc::vec![5, 10],
                repeats: 3,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = repeated_cv_assess(&data, &plan, &mut RngStream::new(11)).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows.iter().all(|r| r.repeats == 3));
        assert!(report.rows.iter().all(|r| r.mean_metric.is_finite()));
    }

    #[test]
    fn repeated_cv_single_repeat_has_zero_std() {
        let data = line_dataset(12);
        let plan = AssessmentPlan {
            protocol: Protocol::RepeatedCv {
                sizes: alloc::vec![6],
                repeats: 1,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = repeated_cv_assess(&data, &plan, &mut RngStream::new(4)).unwrap();
        assert_eq!(report.rows[0].std_metric, 0.0);
    }

    #[test]
    fn repeated_cv_is_deterministic() {
        let data = line_dataset(16);
        let plan = AssessmentPlan {
            protocol: Protocol::RepeatedCv {
                sizes: alloc::vec![4, 8],
                repeats: 2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let a = repeated_cv_assess(&data, &plan, &mut RngStream::new(99)).unwrap();
        let b = repeated_cv_assess(&data, &plan, &mut RngStream::new(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn repeated_cv_rejects_sizes_consuming_every_row() {
        let data = line_dataset(10);
        let plan = AssessmentPlan {
            protocol: Protocol::RepeatedCv {
                sizes: alloc::vec![10],
                repeats: 2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        assert!(repeated_cv_assess(&data, &plan, &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn no_repetition_measures_each_size_once() {
        let data = line_dataset(25);
        let plan = AssessmentPlan {
            protocol: Protocol::NoRepetition {
                sizes: alloc::vec![5, 10, 20],
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = no_repetition_assess(&data, &plan, &mut RngStream::new(8)).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.repeats == 1 && r.std_metric == 0.0));
        let sizes: Vec<usize> = report.rows.iter().map(|r| r.train_size).collect();
        assert_eq!(sizes, alloc::vec![5, 10, 20]);
    }

    #[test]
    fn plan_validation_rejects_bad_shapes() {
        let trainer = linear_trainer();
        let bad_order = AssessmentPlan {
            protocol: Protocol::RepeatedCv {
                sizes: alloc::vec![10, 10],
                repeats: 2,
            },
            trainer: trainer.clone(),
            metric: Metric::Mse,
        };
        assert!(bad_order.validate(30).is_err());
        let bad_threshold = AssessmentPlan {
            protocol: Protocol::Css {
                clusters: 2,
                initial_per_cluster: 1,
                extra_per_cluster: 1,
                threshold: 1.0,
                test_fraction: 0.2,
            },
            trainer: trainer.clone(),
            metric: Metric::Mse,
        };
        assert!(bad_threshold.validate(30).is_err());
        let bad_fraction = AssessmentPlan {
            protocol: Protocol::Subsampling {
                sizes: alloc::vec![4],
                test_fraction: 0.0,
            },
            trainer,
            metric: Metric::Mse,
        };
        assert!(bad_fraction.validate(30).is_err());
    }

    /// Three well-separated input blobs with a linear response; easy for
    /// both the clusterer and the surrogate.
    fn clustered_dataset() -> Dataset {
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for (cx, cy) in [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)] {
            for i in 0..12 {
                let dx = (i % 4) as f64 * 0.2;
                let dy = (i / 4) as f64 * 0.2;
                inputs.push(alloc::vec![cx + dx, cy + dy]);
                outputs.push(alloc::vec![cx + cy + dx + dy + 5.0]);
            }
        }
        Dataset::new(
            alloc::vec!["x".into(), "y".into()],
            alloc::vec!["z".into()],
            inputs,
            outputs,
        )
        .unwrap()
    }

    #[test]
    fn kmeans_recovers_separated_blobs() {
        let data = clustered_dataset();
        let scaler = MinMaxScaler::fit(&data.inputs).unwrap();
        let assign = kmeans(&scaler.transform_all(&data.inputs), 3, 10, &mut RngStream::new(2)).unwrap();
        // Whole blobs must share a label, and different blobs must not.
        for blob in 0..3 {
            let first = assign[blob * 12];
            assert!(assign[blob * 12..(blob + 1) * 12].iter().all(|&a| a == first));
        }
        assert_ne!(assign[0], assign[12]);
        assert_ne!(assign[12], assign[24]);
        assert_ne!(assign[0], assign[24]);
    }

    #[test]
    fn kmeans_rejects_more_clusters_than_points() {
        let points = alloc::vec![alloc::vec![0.0], alloc::vec![1.0]];
        assert!(kmeans(&points, 3, 2, &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn css_reaches_a_verdict_on_easy_clustered_data() {
        let data = clustered_dataset();
        let plan = AssessmentPlan {
            protocol: Protocol::Css {
                clusters: 3,
                initial_per_cluster: 2,
                extra_per_cluster: 1,
                threshold: 0.5,
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = css_assess(&data, &plan, &mut RngStream::new(17)).unwrap();
        let outcome = report.css.unwrap();
        assert!(!outcome.exhausted, "36 rows should be plenty");
        let size = outcome.adequate_size.expect("a linear fit converges fast");
        assert_eq!(
            report.rows.last().unwrap().verdict,
            Some(CssVerdict::Adequate)
        );
        assert_eq!(report.rows.last().unwrap().train_size, size);
        // Every earlier round must have been judged inadequate.
        for row in &report.rows[..report.rows.len() - 1] {
            assert_eq!(row.verdict, Some(CssVerdict::Inadequate));
        }
    }

    #[test]
    fn css_flags_exhaustion_when_the_schedule_exceeds_the_pool() {
        // 12 rows leave a 9-row portion after the carve; the first round
        // already wants (3+1)*3 = 12 rows, so CSS exhausts immediately.
        let data = line_dataset(12);
        let plan = AssessmentPlan {
            protocol: Protocol::Css {
                clusters: 3,
                initial_per_cluster: 3,
                extra_per_cluster: 1,
                threshold: 0.02,
                test_fraction: 0.25,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = css_assess(&data, &plan, &mut RngStream::new(5)).unwrap();
        let outcome = report.css.unwrap();
        assert!(outcome.exhausted);
        assert_eq!(outcome.adequate_size, None);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn css_example_arithmetic() {
        // Three clusters at five plus two rows each give a 21-row
        // training subset when no cluster runs short.
        let data = clustered_dataset();
        let plan = AssessmentPlan {
            protocol: Protocol::Css {
                clusters: 3,
                initial_per_cluster: 5,
                extra_per_cluster: 2,
                threshold: 0.9,
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = css_assess(&data, &plan, &mut RngStream::new(23)).unwrap();
        assert_eq!(report.rows[0].train_size, 21);
    }

    #[test]
    fn dispatcher_routes_by_method() {
        let data = line_dataset(20);
        let plan = AssessmentPlan {
            protocol: Protocol::NoRepetition {
                sizes: alloc::vec![8],
                test_fraction: 0.2,
            },
            trainer: linear_trainer(),
            metric: Metric::Mse,
        };
        let report = assess(&data, &plan, &mut RngStream::new(6)).unwrap();
        assert_eq!(report.method, "no_repetition");
    }

    #[test]
    fn plans_roundtrip_through_json() {
        let plan = AssessmentPlan {
            protocol: Protocol::Css {
                clusters: 3,
                initial_per_cluster: 2,
                extra_per_cluster: 1,
                threshold: 0.02,
                test_fraction: 0.2,
            },
            trainer: TrainerSpec::Anfis {
                labels_per_input: 2,
                shape: MfShape::Bell,
                train: TrainConfig::default(),
            },
            metric: Metric::ChiSquared,
        };
        let text = serde_json::to_string(&plan).unwrap();
        let back: AssessmentPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(plan, back);
    }
}
