//! `qmlp`: train hybrid quantum networks, sweep depolarizing noise, compare
//! QMLP against DeepQMLP, generate datasets and plot results.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmlp_core::data::{SyntheticFamily, SyntheticSpec};
use qmlp_core::harness::{self, ExperimentConfig};
use qmlp_core::Error;

#[derive(Debug, Parser)]
#[command(name = "qmlp", version, about = "Hybrid quantum multilayer perceptrons under depolarizing noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one model per seed; writes model JSON, history CSV and a report.
    Train {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate trained models at scale 0 and every configured noise scale.
    NoiseSweep {
        #[command(flatten)]
        common: Common,
        /// Trained model files.
        #[arg(required = true)]
        models: Vec<PathBuf>,
    },
    /// Paired QMLP vs DeepQMLP comparison across noise scales.
    Compare {
        #[command(flatten)]
        common: Common,
        /// QMLP model files, paired by position with --deep.
        #[arg(long = "qmlp", required = true, num_args = 1.., value_delimiter = ',')]
        qmlp: Vec<PathBuf>,
        /// DeepQMLP model files.
        #[arg(long = "deep", required = true, num_args = 1.., value_delimiter = ',')]
        deep: Vec<PathBuf>,
    },
    /// Write a synthetic dataset as CSV.
    GenData {
        /// R1_sq, P1_sq, R2_sq or P2_sq.
        #[arg(long)]
        family: String,
        /// Defaults to 90 for 2-class and 60 for 3-class families.
        #[arg(long)]
        samples_per_class: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render history or sweep CSVs to SVG.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Experiment config (JSON). Flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated list of training seeds.
    #[arg(long, value_delimiter = ',')]
    seed: Option<Vec<u64>>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Comma-separated noise scale factors.
    #[arg(long, value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    /// Shots per expectation value; omit for exact expectations.
    #[arg(long)]
    shots: Option<u32>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(seeds) = &self.seed {
            cfg.training.seeds = seeds.clone();
        }
        if let Some(e) = self.epochs {
            cfg.training.epochs = e;
        }
        if let Some(b) = self.batch_size {
            cfg.training.batch_size = b;
        }
        if let Some(lr) = self.learning_rate {
            cfg.training.learning_rate = lr;
        }
        if let Some(s) = &self.scales {
            cfg.noise_sweep.scales = s.clone();
        }
        if let Some(shots) = self.shots {
            cfg.noise_sweep.shots = Some(shots);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: Error) -> Failure {
    match e {
        Error::Config(_) | Error::Pairing(_) => Failure::Usage(e.to_string()),
        other => Failure::Runtime(other.to_string()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Train { common } => {
            let cfg = common.resolve().map_err(usage)?;
            let report = harness::run_train(&cfg).map_err(runtime)?;
            for r in &report.runs {
                let (loss, acc) = r.train.map_or((f64::NAN, f64::NAN), |e| (e.loss, e.accuracy));
                println!("{} loss={loss:.4} accuracy={acc:.4}", r.model_id);
            }
        }
        Command::NoiseSweep { common, models } => {
            let cfg = common.resolve().map_err(usage)?;
            let report = harness::run_noise_sweep(&models, &cfg).map_err(runtime)?;
            println!(
                "{} rows written to {}",
                report.train.len(),
                cfg.output_dir.join("sweep.csv").display()
            );
        }
        Command::Compare { common, qmlp, deep } => {
            let cfg = common.resolve().map_err(usage)?;
            let report = harness::run_compare(&qmlp, &deep, &cfg).map_err(runtime)?;
            for s in &report.scales {
                println!(
                    "scale {}: QMLP loss {:.4} acc {:.4} | DeepQMLP loss {:.4} acc {:.4} | loss reduction {:.1}%",
                    s.scale,
                    s.qmlp_loss,
                    s.qmlp_accuracy,
                    s.deep_qmlp_loss,
                    s.deep_qmlp_accuracy,
                    100.0 * s.relative_loss_reduction
                );
            }
        }
        Command::GenData {
            family,
            samples_per_class,
            seed,
            out,
        } => {
            let family: SyntheticFamily = family.parse().map_err(usage)?;
            let n = samples_per_class.unwrap_or(family.default_samples_per_class());
            harness::run_gen_data(&SyntheticSpec::new(family, n, seed), &out).map_err(runtime)?;
        }
        Command::Plot { inputs, out } => {
            harness::run_plot(&inputs, &out).map_err(runtime)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
