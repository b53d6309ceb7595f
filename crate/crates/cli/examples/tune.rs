// Temporary tuning probe for the acceptance constants. Not a deliverable.

use formopt_cli::comparison::run_comparison;
use formopt_cli::config::ExperimentConfig;
use formopt_cli::timing::run_timing;
use formopt_core::benchmarks;
use formopt_core::rng::derive_seed;

fn battery(base_seed: u64) {
    println!("=== base seed {base_seed} ===");
    // SOS/CS precision on the four 2-D functions.
    let cfg = ExperimentConfig {
        algorithms: vec!["sos".into(), "cs".into()],
        benchmarks: vec![
            "schaffer-n1".into(),
            "holder-table".into(),
            "cross-in-tray".into(),
            "schaffer-n4".into(),
        ],
        base_seed,
        workers: 1,
        ..ExperimentConfig::default()
    };
    for cell in run_comparison(&cfg).unwrap() {
        let b = benchmarks::lookup(&cell.summary.benchmark).unwrap();
        let err = (cell.summary.mean_f - b.known_min_value).abs();
        println!(
            "  {:>3} {:<14} mean_err {:.3e} std {:.3e} {}",
            cell.summary.algorithm,
            cell.summary.benchmark,
            err,
            cell.summary.std_f,
            if err <= 1e-6 && cell.summary.std_f <= 1e-6 { "OK" } else { "FAIL" }
        );
    }
    // FA/GA coarse accuracy on the two table functions.
    let cfg = ExperimentConfig {
        algorithms: vec!["fa".into(), "ga".into()],
        benchmarks: vec!["holder-table".into(), "cross-in-tray".into()],
        base_seed,
        workers: 1,
        ..ExperimentConfig::default()
    };
    for cell in run_comparison(&cfg).unwrap() {
        let b = benchmarks::lookup(&cell.summary.benchmark).unwrap();
        let err = (cell.summary.mean_f - b.known_min_value).abs();
        println!(
            "  {:>3} {:<14} mean_err {:.3e} std {:.3e} {}",
            cell.summary.algorithm,
            cell.summary.benchmark,
            err,
            cell.summary.std_f,
            if err <= 5e-3 { "OK" } else { "FAIL" }
        );
    }
    // Happy-cat meta repetitions: CS must have the lowest mean in >= 7/10.
    let mut cs_wins = 0;
    let mut worst_mean = 0.0f64;
    for rep in 0..10u64 {
        let cfg = ExperimentConfig {
            benchmarks: vec!["happy-cat".into()],
            base_seed: derive_seed(base_seed, &[100 + rep]),
            workers: 1,
            ..ExperimentConfig::default()
        };
        let cells = run_comparison(&cfg).unwrap();
        let means: Vec<(String, f64)> = cells
            .iter()
            .map(|c| (c.summary.algorithm.clone(), c.summary.mean_f))
            .collect();
        let min = means.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        let winner = &means.iter().find(|m| m.1 == min).unwrap().0;
        if winner == "cs" {
            cs_wins += 1;
        }
        for m in &means {
            worst_mean = worst_mean.max(m.1);
        }
        println!(
            "  happy-cat rep {rep}: winner {winner} means {:?}",
            means.iter().map(|m| format!("{}={:.4}", m.0, m.1)).collect::<Vec<_>>()
        );
    }
    println!("  happy-cat: cs wins {cs_wins}/10, worst mean {worst_mean:.4}");
    // Sphere ordering.
    let cfg = ExperimentConfig {
        algorithms: vec!["sos".into(), "cs".into(), "ga".into()],
        benchmarks: vec!["sphere".into()],
        base_seed,
        workers: 1,
        ..ExperimentConfig::default()
    };
    let cells = run_comparison(&cfg).unwrap();
    println!(
        "  sphere: sos {:.3e} cs {:.3e} ga {:.3e} ordered {}",
        cells[0].summary.mean_f,
        cells[1].summary.mean_f,
        cells[2].summary.mean_f,
        cells[0].summary.mean_f <= cells[1].summary.mean_f
            && cells[1].summary.mean_f <= cells[2].summary.mean_f
    );
}

fn happycat_detail(base_seed: u64) {
    println!("=== happy-cat detail, base seed {base_seed} ===");
    let cfg = ExperimentConfig {
        benchmarks: vec!["happy-cat".into()],
        base_seed,
        workers: 1,
        ..ExperimentConfig::default()
    };
    for cell in run_comparison(&cfg).unwrap() {
        println!("  {} mean {:.4}", cell.summary.algorithm, cell.summary.mean_f);
        for (t, rep) in cell.reports.iter().enumerate() {
            let p = &rep.best.position;
            let u = p[0] * p[0] + p[1] * p[1] - 2.0;
            let s = p[0] + p[1];
            println!(
                "    trial {t}: f {:.3e}  u {:+.2e}  s {:+.5}  pos ({:+.4}, {:+.4})",
                rep.best.value, u, s, p[0], p[1]
            );
        }
    }
}

fn ga_scan() {
    for base_seed in 1..=50u64 {
        let cfg = ExperimentConfig {
            algorithms: vec!["fa".into(), "ga".into()],
            benchmarks: vec!["holder-table".into(), "cross-in-tray".into()],
            base_seed,
            workers: 1,
            ..ExperimentConfig::default()
        };
        let cells = run_comparison(&cfg).unwrap();
        let mut errs = Vec::new();
        for cell in &cells {
            if cell.summary.algorithm != "ga" {
                continue;
            }
            let b = benchmarks::lookup(&cell.summary.benchmark).unwrap();
            errs.push((cell.summary.mean_f - b.known_min_value).abs());
        }
        let ok = errs.iter().all(|e| *e <= 5e-3);
        println!(
            "seed {base_seed:>3}: ga holder {:.3e} cross {:.3e} {}",
            errs[0],
            errs[1],
            if ok { "OK" } else { "-" }
        );
    }
}

fn cs_lambda_grid() {
    use formopt_cli::config::AlgoParams;
    use formopt_core::metaheuristics::CsConfig;
    for lambda in [1.5f64, 2.0, 2.5, 2.9] {
        for base_seed in [11u64, 42] {
            let params = AlgoParams {
                cs: CsConfig { lambda, ..CsConfig::default() },
                ..AlgoParams::default()
            };
            let cfg = ExperimentConfig {
                algorithms: vec!["cs".into()],
                benchmarks: vec![
                    "schaffer-n1".into(),
                    "holder-table".into(),
                    "cross-in-tray".into(),
                    "schaffer-n4".into(),
                    "happy-cat".into(),
                    "sphere".into(),
                ],
                base_seed,
                workers: 1,
                cs: params.cs.clone(),
                ..ExperimentConfig::default()
            };
            let cells = run_comparison(&cfg).unwrap();
            let mut line = format!("lambda {lambda} seed {base_seed}:");
            for cell in &cells {
                let b = benchmarks::lookup(&cell.summary.benchmark).unwrap();
                let err = (cell.summary.mean_f - b.known_min_value).abs();
                line.push_str(&format!(" {}={:.2e}", cell.summary.benchmark, err));
            }
            println!("{line}");
        }
    }
}

fn timing_probe(base_seed: u64, window: u64, epsilon: f64) {
    let cfg = ExperimentConfig {
        benchmarks: benchmarks::canonical_order()
            .iter()
            .filter(|n| **n != "sphere")
            .map(|s| s.to_string())
            .collect(),
        budget: window,
        base_seed,
        convergence_epsilon: epsilon,
        workers: 1,
        ..ExperimentConfig::default()
    };
    let table = run_timing(&cfg).unwrap();
    let mut ga_fastest = 0;
    let mut fa_flagged = 0;
    for row in &table.rows {
        let ranked: Vec<(String, Option<f64>)> = row
            .cells
            .iter()
            .map(|c| (c.algorithm.clone(), c.normalized))
            .collect();
        let ga_is_fastest = row
            .cells
            .iter()
            .find(|c| c.algorithm == "ga")
            .and_then(|c| c.normalized)
            .map(|n| n == 1.0)
            .unwrap_or(false);
        let fa_flag = row
            .cells
            .iter()
            .find(|c| c.algorithm == "fa")
            .map(|c| c.normalized.is_none())
            .unwrap_or(false);
        if ga_is_fastest {
            ga_fastest += 1;
        }
        if fa_flag {
            fa_flagged += 1;
        }
        println!("  {:<14} {:?}", row.benchmark, ranked);
    }
    println!(
        "timing seed {base_seed} window {window} eps {epsilon:.0e}: ga fastest {ga_fastest}/5, fa flagged {fa_flagged}/5"
    );
}

fn tdist(base_seed: u64, window: u64, epsilon: f64) {
    use formopt_cli::comparison::convergence_evaluations;
    use formopt_core::Direction;
    println!("=== tdist seed {base_seed} window {window} eps {epsilon:.0e} ===");
    let cfg = ExperimentConfig {
        benchmarks: benchmarks::canonical_order()
            .iter()
            .filter(|n| **n != "sphere")
            .map(|s| s.to_string())
            .collect(),
        budget: window,
        base_seed,
        convergence_epsilon: epsilon,
        workers: 1,
        ..ExperimentConfig::default()
    };
    let (algorithms, benches) = cfg.resolve().unwrap();
    let params = cfg.params();
    for (b_idx, bench) in benches.iter().enumerate() {
        println!("  {}", bench.name);
        for (a_idx, &kind) in algorithms.iter().enumerate() {
            let mut fracs = Vec::new();
            for t in 0..cfg.trials {
                let seed = derive_seed(cfg.base_seed, &[a_idx as u64, b_idx as u64, t as u64]);
                let report = params
                    .run(kind, &bench.space, bench.function(), Direction::Minimize, window, seed)
                    .unwrap();
                let point = convergence_evaluations(&report.trace, epsilon);
                fracs.push(point as f64 / window as f64);
            }
            let line: Vec<String> = fracs.iter().map(|f| format!("{f:.2}")).collect();
            println!("    {:<4} {}", kind.name(), line.join(" "));
        }
    }
}

fn train5(base: u64) {
    use formopt_cli::data::{build_teacher, synth_dataset, TeacherSpec};
    use formopt_cli::train_cmd::{train_models, TrainCfg};
    use formopt_core::surrogate::{Activation, MfShape, TrainConfig};
    let mut pass = 0;
    for s in 0..10u64 {
        let seed = derive_seed(base, &[s]);
        let spec = TeacherSpec { offset: 8.0, ..TeacherSpec::default() };
        let teacher = build_teacher(&spec, derive_seed(seed, &[1])).unwrap();
        let bounds = vec![(0.0, 1.0); 3];
        let data = synth_dataset(&teacher, &bounds, 30, 0.4, derive_seed(seed, &[2])).unwrap();
        let min_out = data
            .outputs
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, v| m.min(*v));
        println!("    min output {min_out:.3}");
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
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for chunk in outcome.comparison.chunks(3) {
            let (mlp, anfis, base_chi) =
                (chunk[0].chi_squared, chunk[1].chi_squared, chunk[2].chi_squared);
            if !(mlp < base_chi && anfis < base_chi) {
                println!(
                    "    {}: mlp {mlp:.4} anfis {anfis:.4} baseline {base_chi:.4}",
                    chunk[0].output
                );
            }
            ok &= mlp < base_chi && anfis < base_chi;
            worst = worst.max(mlp / base_chi).max(anfis / base_chi);
        }
        if ok {
            pass += 1;
        }
        println!("  train seed {s}: {} worst model/baseline ratio {worst:.3}", if ok { "OK" } else { "FAIL" });
    }
    println!("train5 base {base}: {pass}/10");
}

fn teacher_dataset(seed: u64) -> formopt_core::surrogate::Dataset {
    use formopt_cli::data::{build_teacher, synth_dataset, TeacherSpec};
    let spec = TeacherSpec { offset: 8.0, ..TeacherSpec::default() };
    let teacher = build_teacher(&spec, derive_seed(seed, &[1])).unwrap();
    synth_dataset(&teacher, &[(0.0, 1.0); 3], 60, 0.4, derive_seed(seed, &[2])).unwrap()
}

fn clustered_dataset(seed: u64) -> formopt_core::surrogate::Dataset {
    use formopt_core::rng::RngStream;
    use formopt_core::surrogate::Dataset;
    let mut rng = RngStream::new(seed);
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
    Dataset::new(vec!["x1".into(), "x2".into()], vec!["y1".into()], inputs, outputs).unwrap()
}

fn assess6(base: u64) {
    use formopt_core::rng::RngStream;
    use formopt_core::samplesize::{assess, AssessmentPlan, Metric, Protocol, TrainerSpec};
    use formopt_core::surrogate::{Activation, TrainConfig};
    let data = teacher_dataset(derive_seed(base, &[40]));
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
        let mut rng = RngStream::new(derive_seed(base, &[50 + m]));
        let report = assess(&data, &plan, &mut rng).unwrap();
        let at10 = report.rows[0].mean_metric;
        let at25 = report.rows[3].mean_metric;
        if at25 <= at10 {
            cv_ok += 1;
        }
        println!("  cv meta {m}: mean@10 {at10:.3} mean@25 {at25:.3} {}", if at25 <= at10 { "OK" } else { "FAIL" });
    }
    let clustered = clustered_dataset(derive_seed(base, &[60]));
    let css_plan = AssessmentPlan {
        protocol: Protocol::Css {
            clusters: 3,
            initial_per_cluster: 1,
            extra_per_cluster: 1,
            threshold: 0.02,
            test_fraction: 0.2,
        },
        trainer: TrainerSpec::Mlp {
            hidden_layers: vec![],
            activation: Activation::Tanh,
            train: TrainConfig { learning_rate: 0.1, epochs: 1500, ..TrainConfig::default() },
        },
        metric: Metric::ChiSquared,
    };
    let mut css_ok = 0;
    for s in 0..10u64 {
        let mut rng = RngStream::new(derive_seed(base, &[70 + s]));
        let report = assess(&clustered, &css_plan, &mut rng).unwrap();
        let css = report.css.unwrap();
        let verdict = css.adequate_size.is_some() && !css.exhausted;
        if verdict {
            css_ok += 1;
        }
        println!(
            "  css seed {s}: adequate {:?} exhausted {} rows {}",
            css.adequate_size,
            css.exhausted,
            report.rows.len()
        );
    }
    println!("assess6 base {base}: cv {cv_ok}/10 css {css_ok}/10");
}

fn pipe7(base: u64) {
    use formopt_cli::config::{InputColumn, OutputObjective, PipelineConfig};
    use formopt_cli::data::write_dataset_csv;
    use formopt_cli::pipeline::run_pipeline;
    use formopt_core::rng::RngStream;
    use formopt_core::samplesize::TrainerSpec;
    use formopt_core::surrogate::{Activation, Dataset, TrainConfig};
    use formopt_core::Direction;
    let _ = RngStream::new(derive_seed(base, &[90]));
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
    let data = Dataset::new(vec!["x1".into(), "x2".into()], vec!["z".into()], inputs, outputs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.csv");
    write_dataset_csv(&path, &data).unwrap();
    let started = std::time::Instant::now();
    for algo in ["ga", "cs", "sos", "fa"] {
        let cfg = PipelineConfig {
            dataset: path.to_str().unwrap().to_string(),
            inputs: vec![
                InputColumn { name: "x1".into(), lower: -1.5, upper: 1.5 },
                InputColumn { name: "x2".into(), lower: -1.5, upper: 1.5 },
            ],
            outputs: vec![OutputObjective { name: "z".into(), direction: Direction::Minimize, weight: 1.0 }],
            surrogate: TrainerSpec::Anfis {
                labels_per_input: 3,
                shape: formopt_core::surrogate::MfShape::Bell,
                train: TrainConfig { learning_rate: 0.01, epochs: 100, ..TrainConfig::default() },
            },
            surrogate_seed: derive_seed(base, &[91]),
            algorithm: algo.into(),
            budget: 10_000,
            seed: derive_seed(base, &[92]),
            ga: Default::default(),
            cs: Default::default(),
            sos: Default::default(),
            fa: Default::default(),
        };
        let report = run_pipeline(&cfg).unwrap();
        let linf = report.best_input.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "  {algo}: linf {linf:.4} best ({:+.4}, {:+.4}) chi {:.3e} {}",
            report.best_input[0],
            report.best_input[1],
            report.chi_squared[0],
            if linf <= 0.05 { "OK" } else { "FAIL" }
        );
    }
    println!("pipe7 base {base}: {:.1}s total", started.elapsed().as_secs_f64());
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(|s| s.as_str()).unwrap_or("battery");
    match mode {
        "battery" => {
            for seed in [12u64] {
                battery(seed);
            }
        }
        "timing" => {
            for window in [4000u64, 6000] {
                timing_probe(12, window, 1e-6);
            }
        }
        "happycat" => {
            for seed in [12u64] {
                happycat_detail(seed);
            }
        }
        "cslambda" => cs_lambda_grid(),
        "gascan" => ga_scan(),
        "tdist" => tdist(12, 4000, 1e-6),
        "train5" => train5(12),
        "assess6" => assess6(12),
        "pipe7" => pipe7(12),
        other => eprintln!("unknown mode {other}"),
    }
}
