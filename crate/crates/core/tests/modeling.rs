//! End-to-end checks of the modeling stack: dataset in, trained surrogate
//! out, with predictions, serialization, and the sample-size protocols all
//! going through the public API.

use formopt_core::rng::RngStream;
use formopt_core::samplesize::{
    assess, AssessmentPlan, Metric, Protocol, TrainerSpec,
};
use formopt_core::surrogate::{
    chi_squared, fit_anfis, fit_mlp, Activation, Dataset, MfShape, ModelDocument, TrainConfig,
};

/// Two inputs, two outputs, smooth and bounded: y1 is a shifted product
/// surface, y2 a gentle bowl. Both stay positive so chi-squared applies.
fn smooth_dataset(rows: usize, seed: u64) -> Dataset {
    let mut rng = RngStream::new(seed);
    let mut inputs = Vec::with_capacity(rows);
    let mut outputs = Vec::with_capacity(rows);
    for _ in 0..rows {
        let a = rng.uniform01();
        let b = rng.uniform01();
        inputs.push(vec![a, b]);
        outputs.push(vec![2.0 + a * b, 1.0 + (a - 0.5).powi(2) + (b - 0.5).powi(2)]);
    }
    Dataset::new(
        vec!["a".into(), "b".into()],
        vec!["y1".into(), "y2".into()],
        inputs,
        outputs,
    )
    .unwrap()
}

#[test]
fn mlp_surrogate_learns_a_smooth_surface_and_survives_serialization() {
    let data = smooth_dataset(40, 11);
    let train = TrainConfig {
        learning_rate: 0.005,
        epochs: 8_000,
        early_stop_epsilon: 0.0,
        early_stop_window: 0,
        ..TrainConfig::default()
    };
    let (surrogate, history) = fit_mlp(&data, &[6], Activation::Tanh, &train, 3).unwrap();

    assert!(history.losses.last().unwrap() < history.losses.first().unwrap());
    let preds = surrogate.predict_all(&data.inputs).unwrap();
    for (pred, truth) in preds.iter().zip(&data.outputs) {
        for (p, t) in pred.iter().zip(truth) {
            assert!((p - t).abs() < 0.1, "prediction {p} too far from {t}");
        }
    }

    // Round-trip through the versioned document: identical predictions.
    let doc = ModelDocument::new(surrogate);
    let json = serde_json::to_string(&doc).unwrap();
    let back: ModelDocument = serde_json::from_str(&json).unwrap();
    back.check_version().unwrap();
    assert_eq!(back.surrogate.predict(&data.inputs[0]).unwrap(), preds[0]);
}

#[test]
fn anfis_surrogate_fits_all_outputs_at_once() {
    let data = smooth_dataset(40, 13);
    let train = TrainConfig { learning_rate: 0.01, epochs: 60, ..TrainConfig::default() };
    let (surrogate, _) = fit_anfis(&data, 3, MfShape::Bell, &train).unwrap();

    let preds = surrogate.predict_all(&data.inputs).unwrap();
    let mut expected = Vec::new();
    let mut predicted = Vec::new();
    for (pred, truth) in preds.iter().zip(&data.outputs) {
        for (p, t) in pred.iter().zip(truth) {
            expected.push(*t);
            predicted.push(*p);
        }
    }
    let chi = chi_squared(&expected, &predicted).unwrap();
    assert!(chi >= 0.0 && chi < 0.05, "training fit chi-squared {chi} out of range");
}

#[test]
fn chi_squared_rejects_degenerate_inputs() {
    assert!(chi_squared(&[1.0, 0.0], &[1.0, 1.0]).is_err(), "zero expected value");
    assert!(chi_squared(&[1.0], &[1.0, 2.0]).is_err(), "length mismatch");
    assert!(chi_squared(&[], &[]).is_err(), "empty series");
    assert!(chi_squared(&[f64::NAN], &[1.0]).is_err(), "non-finite value");
}

#[test]
fn repeated_cv_reports_one_row_per_requested_size() {
    let data = smooth_dataset(50, 17);
    let plan = AssessmentPlan {
        protocol: Protocol::RepeatedCv { sizes: vec![8, 16, 24], repeats: 5 },
        trainer: TrainerSpec::Mlp {
            hidden_layers: vec![3],
            activation: Activation::Tanh,
            train: TrainConfig { learning_rate: 0.01, epochs: 200, ..TrainConfig::default() },
        },
        metric: Metric::ChiSquared,
    };
    let mut rng = RngStream::new(99);
    let report = assess(&data, &plan, &mut rng).unwrap();

    assert_eq!(report.rows.len(), 3);
    for (row, size) in report.rows.iter().zip([8usize, 16, 24]) {
        assert_eq!(row.train_size, size);
        assert_eq!(row.repeats, 5);
        assert!(row.mean_metric.is_finite());
        assert!(row.std_metric >= 0.0);
    }
}

#[test]
fn cluster_sampling_doubles_until_a_verdict_or_the_pool_ends() {
    let data = smooth_dataset(60, 23);
    let plan = AssessmentPlan {
        protocol: Protocol::Css {
            clusters: 3,
            initial_per_cluster: 1,
            extra_per_cluster: 1,
            threshold: 0.05,
            test_fraction: 0.2,
        },
        trainer: TrainerSpec::Mlp {
            hidden_layers: vec![],
            activation: Activation::Tanh,
            train: TrainConfig { learning_rate: 0.1, epochs: 800, ..TrainConfig::default() },
        },
        metric: Metric::ChiSquared,
    };
    let mut rng = RngStream::new(5);
    let report = assess(&data, &plan, &mut rng).unwrap();
    let css = report.css.expect("cluster protocol fills the css outcome");

    assert!(css.baseline_metric.is_finite());
    assert!(!report.rows.is_empty());
    // Subset sizes follow the doubling schedule: 3*(1+1), 3*(2+1), ...
    let mut per_cluster = 1;
    for row in &report.rows {
        assert_eq!(row.train_size, 3 * (per_cluster + 1));
        per_cluster *= 2;
    }
    match css.adequate_size {
        Some(size) => {
            assert_eq!(size, report.rows.last().unwrap().train_size);
            assert!(!css.exhausted);
        }
        None => assert!(css.exhausted, "no verdict must mean the pool ran out"),
    }
}
