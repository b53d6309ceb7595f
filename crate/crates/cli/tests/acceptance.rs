//! Eight-part acceptance battery. Each test prints a single
//! `criterion N: ...` verdict line (run with `--nocapture` to see them)
//! and fails if its pinned bound is violated; part 3 is a soft ranking
//! expectation and reports WARN instead of failing.
//!
//! Every tolerance below was verified against `BASE_SEED`, so the battery
//! is deterministic end to end: same seed, same verdicts, same numbers.

use std::collections::HashMap;
use std::panic;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Mutex;
use std::time::Instant;

use formopt_cli::comparison::run_comparison;
use formopt_cli::config::{ExperimentConfig, InputColumn, OutputObjective, PipelineConfig};
use formopt_cli::data::{build_teacher, synth_dataset, write_dataset_csv, TeacherSpec};
use formopt_cli::pipeline::run_pipeline;
use formopt_cli::timing::run_timing;
use formopt_cli::train_cmd::{train_models, TrainCfg};
use formopt_core::benchmarks::{self, HAPPY_CAT_ALPHA};
use formopt_core::rng::{derive_seed, RngStream};
use formopt_core::samplesize::{
    assert_no_leakage, assess, AssessmentPlan, Metric, Protocol, TrainerSpec,
};
use formopt_core::surrogate::{
    Activation, AnfisSystem, Dataset, MfShape, MlpNetwork, TrainConfig,
};
use formopt_core::Direction;

/// Seed the statistical tolerances were pinned against.
const BASE_SEED: u64 = 12;

/// The wall-clock bounds assume the whole machine, so the eight parts
/// take this lane one at a time instead of sharing cores.
static LANE: Mutex<()> = Mutex::new(());

fn lane() -> std::sync::MutexGuard<'static, ()> {
    LANE.lock().unwrap_or_else(|e| e.into_inner())
}

/// Means and deviations of `run_comparison` cells keyed by (algorithm, benchmark).
fn cell_stats(cfg: &ExperimentConfig) -> HashMap<(String, String), (f64, f64)> {
    run_comparison(cfg)
        .unwrap()
        .into_iter()
        .map(|c| {
            (
                (c.summary.algorithm.clone(), c.summary.benchmark.clone()),
                (c.summary.mean_f, c.summary.std_f),
            )
        })
        .collect()
}

#[test]
fn criterion_1_exact_minima() {
    let _lane = lane();
    let started = Instant::now();
    let mut ok = true;

    let holder = benchmarks::lookup("holder-table").unwrap();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            let f = holder.eval(&[sx * 8.05502, sy * 9.66459]);
            ok &= (f - (-19.2085)).abs() <= 1e-4;
        }
    }

    let cross = benchmarks::lookup("cross-in-tray").unwrap();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            let f = cross.eval(&[sx * 1.34940, sy * 1.34940]);
            ok &= (f - (-2.062612)).abs() <= 1e-5;
        }
    }

    let n4 = benchmarks::lookup("schaffer-n4").unwrap();
    ok &= (n4.eval(&[0.0, 1.253115]) - 0.292579).abs() <= 1e-5;

    let n1 = benchmarks::lookup("schaffer-n1").unwrap();
    ok &= n1.eval(&[0.0, 0.0]) == 0.0;

    ok &= benchmarks::happy_cat(&[-1.0, -1.0], HAPPY_CAT_ALPHA).abs() <= 1e-12;

    ok &= benchmarks::sphere(&[0.0; 6]) == 0.0;

    let ms = started.elapsed().as_millis();
    println!(
        "criterion 1: {} (known minima of all six functions, {ms} ms)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "a benchmark value drifted from its reference minimum");
    assert!(ms < 1_000, "direct evaluation should take milliseconds");
}

#[test]
fn criterion_2_statistical_accuracy() {
    let _lane = lane();
    let started = Instant::now();

    // SOS and CS locate the four 2-D minima to 1e-6 in mean and deviation.
    let precise = cell_stats(&ExperimentConfig {
        algorithms: vec!["sos".into(), "cs".into()],
        benchmarks: vec![
            "schaffer-n1".into(),
            "holder-table".into(),
            "cross-in-tray".into(),
            "schaffer-n4".into(),
        ],
        trials: 10,
        budget: 50_000,
        base_seed: BASE_SEED,
        workers: 1,
        ..ExperimentConfig::default()
    });
    let mut precise_ok = true;
    for ((algo, bench), (mean, std)) in &precise {
        let f_star = benchmarks::lookup(bench).unwrap().known_min_value;
        let err = (mean - f_star).abs();
        if err > 1e-6 || *std > 1e-6 {
            precise_ok = false;
            println!("  {algo} on {bench}: mean err {err:.3e}, std {std:.3e}");
        }
    }

    // FA and GA hold 5e-3 accuracy on the two table-shaped functions.
    let coarse = cell_stats(&ExperimentConfig {
        algorithms: vec!["fa".into(), "ga".into()],
        benchmarks: vec!["holder-table".into(), "cross-in-tray".into()],
        trials: 10,
        budget: 50_000,
        base_seed: BASE_SEED,
        workers: 1,
        ..ExperimentConfig::default()
    });
    let mut coarse_ok = true;
    for ((algo, bench), (mean, _)) in &coarse {
        let f_star = benchmarks::lookup(bench).unwrap().known_min_value;
        let err = (mean - f_star).abs();
        if err > 5e-3 {
            coarse_ok = false;
            println!("  {algo} on {bench}: mean err {err:.3e}");
        }
    }

    // Happy cat is the discriminating case: all four algorithms stay under
    // a 0.03 mean, and CS posts the lowest mean in at least 7 of 10
    // independently seeded repetitions.
    let mut cs_wins = 0;
    let mut all_under = true;
    for rep in 0..10u64 {
        let cells = cell_stats(&ExperimentConfig {
            benchmarks: vec!["happy-cat".into()],
            trials: 10,
            budget: 50_000,
            base_seed: derive_seed(BASE_SEED, &[100 + rep]),
            workers: 1,
            ..ExperimentConfig::default()
        });
        let mut best = ("".to_string(), f64::INFINITY);
        for ((algo, _), (mean, _)) in &cells {
            all_under &= *mean <= 0.03;
            if *mean < best.1 {
                best = (algo.clone(), *mean);
            }
        }
        if best.0 == "cs" {
            cs_wins += 1;
        }
    }
    let cat_ok = all_under && cs_wins >= 7;

    // On the 6-D sphere the mean final values order as SOS <= CS <= GA.
    let sphere = cell_stats(&ExperimentConfig {
        algorithms: vec!["sos".into(), "cs".into(), "ga".into()],
        benchmarks: vec!["sphere".into()],
        trials: 10,
        budget: 50_000,
        base_seed: BASE_SEED,
        workers: 1,
        ..ExperimentConfig::default()
    });
    let m = |a: &str| sphere[&(a.to_string(), "sphere".to_string())].0;
    let sphere_ok = m("sos") <= m("cs") && m("cs") <= m("ga");

    let secs = started.elapsed().as_secs_f64();
    let ok = precise_ok && coarse_ok && cat_ok && sphere_ok;
    println!(
        "criterion 2: {} (precision {}, tables {}, happy cat {} with cs best {cs_wins}/10, \
         sphere order {}, {secs:.1} s)",
        if ok { "PASS" } else { "FAIL" },
        if precise_ok { "ok" } else { "FAIL" },
        if coarse_ok { "ok" } else { "FAIL" },
        if cat_ok { "ok" } else { "FAIL" },
        if sphere_ok { "ok" } else { "FAIL" },
    );
    assert!(ok, "statistical accuracy drifted from the pinned bounds");
    assert!(secs < 300.0, "battery exceeded its five minute budget");
}

#[test]
fn criterion_3_convergence_timing() {
    let _lane = lane();
    // Sphere converges long before any interesting separation shows up,
    // so the ranking table covers the five multimodal functions.
    let cfg = ExperimentConfig {
        benchmarks: benchmarks::canonical_order()
            .iter()
            .filter(|n| **n != "sphere")
            .map(|s| s.to_string())
            .collect(),
        budget: 4_000,
        base_seed: BASE_SEED,
        convergence_epsilon: 1e-6,
        workers: 1,
        ..ExperimentConfig::default()
    };
    let table = run_timing(&cfg).unwrap();
    let mut ga_fastest = 0;
    let mut fa_flagged = 0;
    for row in &table.rows {
        let ga = row.cells.iter().find(|c| c.algorithm == "ga").unwrap();
        let fa = row.cells.iter().find(|c| c.algorithm == "fa").unwrap();
        if ga.normalized == Some(1.0) {
            ga_fastest += 1;
        }
        if fa.normalized.is_none() {
            fa_flagged += 1;
        }
    }
    // Soft expectation: report the ranking, never fail the build over it.
    let verdict = if ga_fastest >= 3 && fa_flagged >= 3 { "PASS" } else { "WARN" };
    println!(
        "criterion 3: {verdict} (ga fastest on {ga_fastest}/5, fa unconverged on {fa_flagged}/5 \
         within a {} evaluation window)",
        cfg.budget
    );
}

/// Central-difference agreement in the same sense the training code needs:
/// tiny absolute residuals are noise, anything larger must agree to 1e-4.
fn grads_close(analytic: f64, fd: f64) -> bool {
    let d = (analytic - fd).abs();
    d <= 1e-7 || d <= 1e-4 * analytic.abs().max(fd.abs())
}

#[test]
fn criterion_4_gradient_checks() {
    let _lane = lane();
    let started = Instant::now();
    let mut rng = RngStream::new(derive_seed(BASE_SEED, &[4]));
    let mut checked = 0usize;
    let mut ok = true;

    // 25 randomized network shapes, every weight and bias checked against
    // a central difference of the summed squared-error loss.
    for _ in 0..25 {
        let n_in = 1 + rng.index(3);
        let n_out = 1 + rng.index(2);
        let mut sizes = vec![n_in];
        for _ in 0..1 + rng.index(2) {
            sizes.push(1 + rng.index(4));
        }
        sizes.push(n_out);
        // Differentiable activations only: a central difference straddling
        // a relu kink measures the subgradient gap, not the derivative.
        let act = [Activation::Sigmoid, Activation::Tanh][rng.index(2)];
        let mut net = MlpNetwork::init(&sizes, act, &mut rng).unwrap();
        let rows = 2 + rng.index(3);
        let xs: Vec<Vec<f64>> =
            (0..rows).map(|_| (0..n_in).map(|_| rng.uniform_sym()).collect()).collect();
        let ts: Vec<Vec<f64>> =
            (0..rows).map(|_| (0..n_out).map(|_| rng.uniform_sym()).collect()).collect();
        let (gw, gb) = net.gradient(&xs, &ts);
        let h = 1e-6;
        for l in 0..net.weights.len() {
            for j in 0..net.weights[l].len() {
                for i in 0..net.weights[l][j].len() {
                    let orig = net.weights[l][j][i];
                    net.weights[l][j][i] = orig + h;
                    let up = net.loss(&xs, &ts);
                    net.weights[l][j][i] = orig - h;
                    let down = net.loss(&xs, &ts);
                    net.weights[l][j][i] = orig;
                    ok &= grads_close(gw[l][j][i], (up - down) / (2.0 * h));
                }
                let orig = net.biases[l][j];
                net.biases[l][j] = orig + h;
                let up = net.loss(&xs, &ts);
                net.biases[l][j] = orig - h;
                let down = net.loss(&xs, &ts);
                net.biases[l][j] = orig;
                ok &= grads_close(gb[l][j], (up - down) / (2.0 * h));
            }
        }
        checked += 1;
    }

    // 25 randomized fuzzy grids. A fresh grid zeroes its consequents,
    // which would zero the premise gradient too, so they are randomized
    // before differentiating.
    for _ in 0..25 {
        let n_in = 1 + rng.index(2);
        let labels = 2 + rng.index(2);
        let shape = [MfShape::Bell, MfShape::Gaussian][rng.index(2)];
        let mut sys = AnfisSystem::grid(&vec![(0.0, 1.0); n_in], labels, shape).unwrap();
        for rule in sys.consequents.iter_mut() {
            for p in rule.iter_mut() {
                *p = 0.5 * rng.uniform_sym();
            }
        }
        let rows = 3 + rng.index(3);
        let xs: Vec<Vec<f64>> =
            (0..rows).map(|_| (0..n_in).map(|_| rng.uniform01()).collect()).collect();
        let ts: Vec<f64> = (0..rows).map(|_| rng.uniform_sym()).collect();
        let grad = sys.premise_gradient(&xs, &ts).unwrap();
        let h = 1e-7;
        for i in 0..n_in {
            for l in 0..labels {
                for p in 0..3 {
                    let mut up = sys.clone();
                    let mut down = sys.clone();
                    match p {
                        0 => {
                            up.mfs[i][l].a += h;
                            down.mfs[i][l].a -= h;
                        }
                        1 => {
                            up.mfs[i][l].b += h;
                            down.mfs[i][l].b -= h;
                        }
                        _ => {
                            up.mfs[i][l].c += h;
                            down.mfs[i][l].c -= h;
                        }
                    }
                    let fd = (up.loss(&xs, &ts).unwrap() - down.loss(&xs, &ts).unwrap())
                        / (2.0 * h);
                    let analytic = match p {
                        0 => grad[i][l].0,
                        1 => grad[i][l].1,
                        _ => grad[i][l].2,
                    };
                    ok &= grads_close(analytic, fd);
                }
            }
        }
        checked += 1;
    }

    let secs = started.elapsed().as_secs_f64();
    println!(
        "criterion 4: {} (analytic gradients match central differences on {checked} randomized \
         configurations, {secs:.1} s)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert_eq!(checked, 50);
    assert!(ok, "an analytic gradient disagreed with its finite difference");
    assert!(secs < 60.0, "gradient checks should take seconds");
}

/// Three-input, four-output teacher network kept strictly positive by a
/// large output offset, since the chi-squared statistic needs positive
/// expected values; the noise deviation is 5% of that offset.
fn teacher_data(seed: u64, rows: usize) -> Dataset {
    let spec = TeacherSpec { offset: 8.0, ..TeacherSpec::default() };
    let teacher = build_teacher(&spec, derive_seed(seed, &[1])).unwrap();
    synth_dataset(&teacher, &[(0.0, 1.0); 3], rows, 0.4, derive_seed(seed, &[2])).unwrap()
}

#[test]
fn criterion_5_surrogate_training() {
    let _lane = lane();
    let mut passed = 0;
    for s in 0..10u64 {
        let seed = derive_seed(BASE_SEED, &[s]);
        let data = teacher_data(seed, 30);
        let min_out = data.outputs.iter().flatten().fold(f64::INFINITY, |m, v| m.min(*v));
        assert!(min_out > 0.0, "teacher outputs must stay positive for chi-squared");
        let cfg = TrainCfg {
            dataset: String::new(),
            input_columns: vec![],
            output_columns: vec![],
            seed: derive_seed(seed, &[3]),
            hidden_grid: vec![2, 3, 4, 5],
            activations: vec![Activation::Sigmoid, Activation::Tanh],
            test_fraction: 0.2,
            mlp_train: TrainConfig { learning_rate: 0.01, ..TrainConfig::default() },
            anfis_labels: 2,
            anfis_shape: MfShape::Bell,
            anfis_train: TrainConfig { learning_rate: 0.01, ..TrainConfig::default() },
        };
        let outcome = train_models(&cfg, &data).unwrap();
        // Comparison rows come in (mlp, anfis, baseline) triples per output;
        // both models must beat the intercept-only baseline on all four.
        let ok = outcome.comparison.chunks(3).all(|chunk| {
            chunk[0].chi_squared < chunk[2].chi_squared
                && chunk[1].chi_squared < chunk[2].chi_squared
        });
        if ok {
            passed += 1;
        }
    }
    println!(
        "criterion 5: {} (grid-selected network and fuzzy system beat the intercept baseline \
         on every output in {passed}/10 seeds)",
        if passed >= 9 { "PASS" } else { "FAIL" }
    );
    assert!(passed >= 9, "surrogates beat the baseline in only {passed}/10 seeds");
}

#[test]
fn criterion_6_sample_size_assessment() {
    let _lane = lane();

    // Repeated cross-validation: more training rows must not hurt.
    let data = teacher_data(derive_seed(BASE_SEED, &[40]), 60);
    let plan = AssessmentPlan {
        protocol: Protocol::RepeatedCv { sizes: vec![10, 15, 20, 25], repeats: 10 },
        trainer: TrainerSpec::Mlp {
            hidden_layers: vec![3],
            activation: Activation::Tanh,
            train: TrainConfig { learning_rate: 0.01, epochs: 300, ..TrainConfig::default() },
        },
        metric: Metric::ChiSquared,
    };
    let mut cv_ok = 0;
    for m in 0..10u64 {
        let mut rng = RngStream::new(derive_seed(BASE_SEED, &[50 + m]));
        let report = assess(&data, &plan, &mut rng).unwrap();
        if report.rows[3].mean_metric <= report.rows[0].mean_metric {
            cv_ok += 1;
        }
    }

    // Cluster-stratified sampling: the doubling schedule must settle on an
    // adequate size before it runs out of pool on clustered data.
    let clustered = {
        let mut rng = RngStream::new(derive_seed(BASE_SEED, &[60]));
        let centers = [(0.15, 0.15), (0.5, 0.85), (0.85, 0.3)];
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for &(cx, cy) in &centers {
            for _ in 0..30 {
                let x1 = (cx + 0.04 * rng.normal()).clamp(0.0, 1.0);
                let x2 = (cy + 0.04 * rng.normal()).clamp(0.0, 1.0);
                inputs.push(vec![x1, x2]);
                outputs.push(vec![4.0 + 2.0 * (x1 + x2) + 0.08 * rng.normal()]);
            }
        }
        Dataset::new(vec!["x1".into(), "x2".into()], vec!["y1".into()], inputs, outputs)
            .unwrap()
    };
    let css_plan = AssessmentPlan {
        protocol: Protocol::Css {
            clusters: 3,
            initial_per_cluster: 1,
            extra_per_cluster: 1,
            threshold: 0.02,
            test_fraction: 0.2,
        },
        // An affine model: its fit is convex, so every subset converges to
        // the same optimum and the gap measures data, not initialization.
        trainer: TrainerSpec::Mlp {
            hidden_layers: vec![],
            activation: Activation::Tanh,
            train: TrainConfig { learning_rate: 0.1, epochs: 1500, ..TrainConfig::default() },
        },
        metric: Metric::ChiSquared,
    };
    let mut css_ok = 0;
    for s in 0..10u64 {
        let mut rng = RngStream::new(derive_seed(BASE_SEED, &[70 + s]));
        let report = assess(&clustered, &css_plan, &mut rng).unwrap();
        let css = report.css.unwrap();
        if css.adequate_size.is_some() && !css.exhausted {
            css_ok += 1;
        }
    }

    // The train/test separation guard is a hard assertion that stays live
    // in release builds: disjoint index sets pass, overlap aborts.
    assert_no_leakage(&[0, 1, 2], &[3, 4, 5]);
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let leaked = panic::catch_unwind(|| assert_no_leakage(&[0, 1, 2], &[2, 3])).is_err();
    panic::set_hook(hook);

    let ok = cv_ok >= 8 && css_ok >= 8 && leaked;
    println!(
        "criterion 6: {} (repeated cv improves with size in {cv_ok}/10 runs, cluster sampling \
         reaches a verdict in {css_ok}/10, leakage guard {})",
        if ok { "PASS" } else { "FAIL" },
        if leaked { "live" } else { "DEAD" },
    );
    assert!(ok, "cv {cv_ok}/10, css {css_ok}/10, leakage guard live: {leaked}");
}

#[test]
fn criterion_7_pipeline_recovery() {
    let _lane = lane();
    let started = Instant::now();

    // A symmetric grid over the bowl z = x1^2 + x2^2, offset so no sample
    // sits exactly at the origin where chi-squared is undefined.
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            let x1 = -1.35 + 0.3 * i as f64;
            let x2 = -1.35 + 0.3 * j as f64;
            inputs.push(vec![x1, x2]);
            outputs.push(vec![x1 * x1 + x2 * x2]);
        }
    }
    let data =
        Dataset::new(vec!["x1".into(), "x2".into()], vec!["z".into()], inputs, outputs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bowl.csv");
    write_dataset_csv(&path, &data).unwrap();

    let mut ok = true;
    let mut worst: f64 = 0.0;
    for algo in ["ga", "cs", "sos", "fa"] {
        let cfg = PipelineConfig {
            dataset: path.to_str().unwrap().to_string(),
            inputs: vec![
                InputColumn { name: "x1".into(), lower: -1.5, upper: 1.5 },
                InputColumn { name: "x2".into(), lower: -1.5, upper: 1.5 },
            ],
            outputs: vec![OutputObjective {
                name: "z".into(),
                direction: Direction::Minimize,
                weight: 1.0,
            }],
            surrogate: TrainerSpec::Anfis {
                labels_per_input: 3,
                shape: MfShape::Bell,
                train: TrainConfig { learning_rate: 0.01, epochs: 100, ..TrainConfig::default() },
            },
            surrogate_seed: derive_seed(BASE_SEED, &[91]),
            algorithm: algo.into(),
            budget: 10_000,
            seed: derive_seed(BASE_SEED, &[92]),
            ga: Default::default(),
            cs: Default::default(),
            sos: Default::default(),
            fa: Default::default(),
        };
        let report = run_pipeline(&cfg).unwrap();
        let linf = report.best_input.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(linf);
        if linf > 0.05 {
            ok = false;
            println!("  {algo}: recovered minimizer off by {linf:.4}");
        }
    }

    let secs = started.elapsed().as_secs_f64();
    println!(
        "criterion 7: {} (all four algorithms recover the bowl minimum through the surrogate, \
         worst coordinate error {worst:.4}, {secs:.1} s)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "an algorithm missed the known minimizer through the surrogate");
    assert!(secs < 60.0, "pipeline runs should finish within a minute");
}

fn formopt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formopt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_8_reproducible_bench() {
    let _lane = lane();
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench",
        "--algorithms",
        "ga,cs,sos,fa",
        "--benchmarks",
        "holder-table,sphere",
        "--trials",
        "3",
        "--budget",
        "2000",
        "--seed",
        "12",
        "--workers",
        "1",
    ];
    let mut first = args.to_vec();
    first.extend(["--out-dir", "a"]);
    let mut second = args.to_vec();
    second.extend(["--out-dir", "b"]);
    let out_a = formopt(&first, dir.path());
    let out_b = formopt(&second, dir.path());
    assert!(out_a.status.success() && out_b.status.success());

    let mut ok = out_a.stdout == out_b.stdout;
    let mut files = 0;
    let mut names = vec!["summary.csv".to_string(), "trials.json".to_string()];
    for algo in ["ga", "cs", "sos", "fa"] {
        for bench in ["holder-table", "sphere"] {
            names.push(format!("convergence/{algo}-{bench}.csv"));
        }
    }
    for name in &names {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        if a != b {
            ok = false;
            println!("  {name} differs between identical runs");
        }
        files += 1;
    }
    println!(
        "criterion 8: {} (two identical bench invocations, stdout and {files} output files \
         byte for byte)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "bench output is not reproducible");
}
