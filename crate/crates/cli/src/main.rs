//! `formopt`: benchmark comparisons, surrogate training, sample-size
//! assessment, and surrogate-based optimization from one binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use formopt_cli::config::{load_config, AssessConfig, ExperimentConfig, PipelineConfig};
use formopt_cli::data::{build_teacher, ingest_dataset, synth_dataset, write_dataset_csv, TeacherSpec};
use formopt_cli::error::{CliError, Result};
use formopt_cli::reports::{emit_bench_reports, summary_csv, timing_csv, write_text};
use formopt_cli::timing::{run_timing, timing_defaults};
use formopt_cli::train_cmd::{comparison_csv, run_train, write_train_outputs, TrainCfg};
use formopt_cli::{comparison, pipeline};
use formopt_core::rng::{derive_seed, RngStream};
use formopt_core::samplesize::assess;
use formopt_core::surrogate::Activation;

#[derive(Parser)]
#[command(
    name = "formopt",
    version,
    about = "Population metaheuristics, surrogate models, and the experiments that compare them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExperimentOverrides {
    /// JSON experiment config; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated algorithm names (ga,cs,sos,fa).
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Comma-separated benchmark names.
    #[arg(long, value_delimiter = ',')]
    benchmarks: Option<Vec<String>>,
    /// Seeded runs per cell.
    #[arg(long)]
    trials: Option<usize>,
    /// Objective evaluations per trial (the timing window for `timing`).
    #[arg(long)]
    budget: Option<u64>,
    /// Base seed for trial derivation.
    #[arg(long)]
    seed: Option<u64>,
    /// Convergence-detection tolerance.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Worker threads; 0 uses every logical CPU.
    #[arg(long)]
    workers: Option<usize>,
}

impl ExperimentOverrides {
    fn resolve(&self, defaults: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config::<ExperimentConfig>(path)?,
            None => defaults,
        };
        if let Some(v) = &self.algorithms {
            cfg.algorithms = v.clone();
        }
        if let Some(v) = &self.benchmarks {
            cfg.benchmarks = v.clone();
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.budget {
            cfg.budget = v;
        }
        if let Some(v) = self.seed {
            cfg.base_seed = v;
        }
        if let Some(v) = self.epsilon {
            cfg.convergence_epsilon = v;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full comparison grid and write summary, trials, and
    /// convergence-series files.
    Bench {
        #[command(flatten)]
        overrides: ExperimentOverrides,
        /// Output directory.
        #[arg(long, default_value = "bench-out")]
        out_dir: PathBuf,
    },
    /// Rank algorithms by evaluations to convergence inside a short window.
    Timing {
        #[command(flatten)]
        overrides: ExperimentOverrides,
        /// Output directory.
        #[arg(long, default_value = "timing-out")]
        out_dir: PathBuf,
    },
    /// Fit the MLP grid and an ANFIS system, write chi-squared tables and
    /// model files.
    Train {
        /// JSON train config (dataset path, columns, hyperparameters).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "train-out")]
        out_dir: PathBuf,
    },
    /// Run a sample-size adequacy protocol and print its report as JSON.
    Assess {
        /// JSON assess config (dataset path, columns, protocol plan).
        #[arg(long)]
        config: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a surrogate and optimize its inputs with a metaheuristic.
    Optimize {
        /// JSON pipeline config.
        #[arg(long)]
        config: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded synthetic dataset from a teacher network.
    Synth {
        /// Rows to generate.
        #[arg(long)]
        rows: usize,
        /// Input dimension.
        #[arg(long, default_value_t = 3)]
        inputs: usize,
        /// Output dimension.
        #[arg(long, default_value_t = 4)]
        outputs: usize,
        /// Hidden-layer widths of the teacher, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [5usize])]
        hidden: Vec<usize>,
        /// Teacher hidden activation (sigmoid, tanh, threshold, relu).
        #[arg(long, default_value = "tanh")]
        activation: String,
        /// Standard deviation of the additive gaussian output noise.
        #[arg(long, default_value_t = 0.05)]
        noise_sd: f64,
        /// Lower input bound (applied to every input).
        #[arg(long, default_value_t = 0.0)]
        lower: f64,
        /// Upper input bound (applied to every input).
        #[arg(long, default_value_t = 1.0)]
        upper: f64,
        /// Seed; teacher weights and samples both derive from it.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn write_json_report<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<String> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("cannot serialize report: {e}")))?;
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bench { overrides, out_dir } => {
            let cfg = overrides.resolve(ExperimentConfig::default())?;
            let cells = comparison::run_comparison(&cfg)?;
            let written = emit_bench_reports(&out_dir, &cells)?;
            let summaries: Vec<_> = cells.iter().map(|c| c.summary.clone()).collect();
            print!("{}", summary_csv(&summaries));
            for path in written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Timing { overrides, out_dir } => {
            let cfg = overrides.resolve(timing_defaults())?;
            let table = run_timing(&cfg)?;
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", out_dir.display())))?;
            let path = out_dir.join("timing.csv");
            let text = timing_csv(&table);
            write_text(&path, &text)?;
            print!("{text}");
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Train { config, out_dir } => {
            let cfg: TrainCfg = load_config(&config)?;
            let outcome = run_train(&cfg)?;
            print_warnings(&outcome.warnings);
            let written = write_train_outputs(&out_dir, &outcome)?;
            print!("{}", comparison_csv(&outcome.comparison));
            for path in written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Assess { config, out } => {
            let cfg: AssessConfig = load_config(&config)?;
            let (dataset, warnings) = ingest_dataset(
                Path::new(&cfg.dataset),
                &cfg.input_columns,
                &cfg.output_columns,
            )?;
            print_warnings(&warnings);
            let mut rng = RngStream::new(cfg.seed);
            let report = assess(&dataset, &cfg.plan, &mut rng)?;
            let text = write_json_report(&report, out.as_deref())?;
            println!("{text}");
            Ok(())
        }
        Command::Optimize { config, out } => {
            let cfg: PipelineConfig = load_config(&config)?;
            let report = pipeline::run_pipeline(&cfg)?;
            print_warnings(&report.warnings);
            let text = write_json_report(&report, out.as_deref())?;
            println!("{text}");
            Ok(())
        }
        Command::Synth {
            rows,
            inputs,
            outputs,
            hidden,
            activation,
            noise_sd,
            lower,
            upper,
            seed,
            out,
        } => {
            let activation: Activation = activation
                .parse()
                .map_err(|e: formopt_core::Error| CliError::from(e))?;
            let spec = TeacherSpec {
                inputs,
                outputs,
                hidden,
                activation,
                ..TeacherSpec::default()
            };
            let teacher = build_teacher(&spec, derive_seed(seed, &[1]))?;
            let bounds = vec![(lower, upper); inputs];
            let dataset = synth_dataset(&teacher, &bounds, rows, noise_sd, derive_seed(seed, &[2]))?;
            write_dataset_csv(&out, &dataset)?;
            println!("wrote {} rows to {}", dataset.n_rows(), out.display());
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
