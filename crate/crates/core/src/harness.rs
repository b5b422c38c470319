//! Experiment orchestration: configs, training runs, noise sweeps, paired
//! QMLP/DeepQMLP comparisons and report files.
//!
//! All outputs are byte-deterministic for a fixed config: work items run in
//! parallel but results are collected in input order, JSON is written from
//! structs (fixed field order) and floats use shortest round-trip formatting.

mod plot;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{generate_synthetic, write_dataset_csv, DatasetSource, PreparedData, SyntheticSpec};
use crate::error::{Error, Result};
use crate::model::{Architecture, HybridModel};
use crate::noise::NoiseConfig;
use crate::train::{evaluate, train, Evaluation, TrainConfig, TrainingHistory};

pub use plot::{plot_csvs, render_svg, CsvKind, Series};

pub const DEFAULT_SCALES: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingSettings {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epsilon: f64,
    pub seeds: Vec<u64>,
}

impl Default for TrainingSettings {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainingSettings {
            epochs: t.epochs,
            batch_size: t.batch_size,
            learning_rate: t.learning_rate,
            epsilon: t.epsilon,
            seeds: vec![0],
        }
    }
}

impl TrainingSettings {
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            epsilon: self.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSweepSettings {
    pub p1: f64,
    pub p2: f64,
    pub scales: Vec<f64>,
    pub shots: Option<u32>,
}

impl Default for NoiseSweepSettings {
    fn default() -> Self {
        NoiseSweepSettings {
            p1: NoiseConfig::NOMINAL_P1,
            p2: NoiseConfig::NOMINAL_P2,
            scales: DEFAULT_SCALES.to_vec(),
            shots: None,
        }
    }
}

impl NoiseSweepSettings {
    /// Scale 0 followed by the configured scales, ascending, duplicates removed.
    pub fn sweep_scales(&self) -> Vec<f64> {
        let mut s = vec![0.0];
        s.extend(&self.scales);
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }

    pub fn noise_at(&self, scale: f64) -> Result<NoiseConfig> {
        NoiseConfig::new(self.p1, self.p2, scale, self.shots)
    }
}

/// One experiment: what to train, how, and how to probe it under noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub dataset: Option<DatasetSource>,
    #[serde(default)]
    pub architecture: Option<Architecture>,
    #[serde(default)]
    pub training: TrainingSettings,
    #[serde(default)]
    pub noise_sweep: NoiseSweepSettings,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: None,
            architecture: None,
            training: TrainingSettings::default(),
            noise_sweep: NoiseSweepSettings::default(),
            output_dir: default_output_dir(),
        }
    }
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSource, architecture: Architecture) -> Self {
        ExperimentConfig {
            dataset: Some(dataset),
            architecture: Some(architecture),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks everything that does not need the dataset on disk.
    pub fn validate(&self) -> Result<()> {
        self.training.train_config().validate()?;
        if self.training.seeds.is_empty() {
            return Err(Error::Config("training.seeds must not be empty".into()));
        }
        if let Some(arch) = &self.architecture {
            arch.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(DatasetSource::Synthetic(spec)) = &self.dataset {
            if spec.samples_per_class == 0 {
                return Err(Error::Config("samples_per_class must be positive".into()));
            }
        }
        for &s in &self.noise_sweep.sweep_scales() {
            self.noise_sweep
                .noise_at(s)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    fn require_training_inputs(&self) -> Result<(&DatasetSource, &Architecture)> {
        let d = self
            .dataset
            .as_ref()
            .ok_or_else(|| Error::Config("`dataset` is required".into()))?;
        let a = self
            .architecture
            .as_ref()
            .ok_or_else(|| Error::Config("`architecture` is required".into()))?;
        Ok((d, a))
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// `<dataset>_<architecture>_s<seed>`
pub fn model_id(dataset: &DatasetSource, arch: &Architecture, seed: u64) -> String {
    format!("{}_{}_s{seed}", dataset.label(), arch.tag())
}

fn id_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub model_id: String,
    pub seed: u64,
    pub model_file: PathBuf,
    pub history_file: PathBuf,
    pub trainable_count: usize,
    pub train: Option<Evaluation>,
    pub test: Option<Evaluation>,
    pub history: TrainingHistory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config: ExperimentConfig,
    pub runs: Vec<SeedRun>,
}

/// A trained model plus its history, without touching the filesystem.
pub fn train_one(
    source: &DatasetSource,
    data: &PreparedData,
    arch: &Architecture,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(HybridModel, TrainingHistory)> {
    let mut model = HybridModel::new(arch.clone(), seed)?;
    model.input_scaling = Some(data.scaling.clone());
    model.dataset = Some(source.clone());
    let history = train(&mut model, &data.train, cfg, seed)?;
    Ok((model, history))
}

/// Trains one model per seed and writes `<id>.json`, `<id>_history.csv` and
/// `train_report.json` into the output directory.
pub fn run_train(config: &ExperimentConfig) -> Result<TrainReport> {
    config.validate()?;
    let (source, arch) = config.require_training_inputs()?;
    let data = source.prepare()?;
    let cfg = config.training.train_config();
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let runs = config
        .training
        .seeds
        .par_iter()
        .map(|&seed| {
            let (model, history) = train_one(source, &data, arch, &cfg, seed)?;
            let id = model_id(source, arch, seed);
            let model_file = out.join(format!("{id}.json"));
            let history_file = out.join(format!("{id}_history.csv"));
            model.save(&model_file)?;
            history.write_csv(&history_file)?;
            let test = data
                .test
                .as_ref()
                .map(|t| evaluate(&model, t, None, seed))
                .transpose()?;
            Ok(SeedRun {
                model_id: id,
                seed,
                model_file,
                history_file,
                trainable_count: model.trainable_count(),
                train: history.last().map(|r| Evaluation {
                    loss: r.loss,
                    accuracy: r.accuracy,
                }),
                test,
                history,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let report = TrainReport {
        config: config.clone(),
        runs,
    };
    write_json(&out.join("train_report.json"), &report)?;
    Ok(report)
}

/// Models loaded from disk together with their (re-derived) data.
pub struct LoadedModels {
    pub ids: Vec<String>,
    pub models: Vec<HybridModel>,
    data: Vec<(DatasetSource, PreparedData)>,
}

impl LoadedModels {
    pub fn load(paths: &[PathBuf], fallback: Option<&DatasetSource>) -> Result<Self> {
        let mut ids = Vec::with_capacity(paths.len());
        let mut models = Vec::with_capacity(paths.len());
        for p in paths {
            let mut m = HybridModel::load(p)?;
            if m.dataset.is_none() {
                m.dataset = fallback.cloned();
            }
            if m.dataset.is_none() {
                return Err(Error::Config(format!(
                    "{} has no dataset descriptor and the config names none",
                    p.display()
                )));
            }
            ids.push(id_from_path(p));
            models.push(m);
        }
        Self::from_models(ids, models)
    }

    pub fn from_models(ids: Vec<String>, models: Vec<HybridModel>) -> Result<Self> {
        let mut data: Vec<(DatasetSource, PreparedData)> = Vec::new();
        for m in &models {
            let src = m
                .dataset
                .as_ref()
                .ok_or_else(|| Error::Config("model has no dataset descriptor".into()))?;
            if !data.iter().any(|(s, _)| s == src) {
                data.push((src.clone(), src.prepare()?));
            }
        }
        Ok(LoadedModels { ids, models, data })
    }

    pub fn data_for(&self, index: usize) -> &PreparedData {
        let src = self.models[index].dataset.as_ref().expect("checked on load");
        &self.data.iter().find(|(s, _)| s == src).expect("prepared on load").1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model_id: String,
    pub scale: f64,
    pub loss: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub train: Vec<SweepRow>,
    pub test: Vec<SweepRow>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("model_id,scale,loss,accuracy\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.model_id, r.scale, r.loss, r.accuracy);
    }
    out
}

/// Shot-sampling seed for one (model, scale) evaluation.
fn eval_seed(model: &HybridModel, scale_index: usize) -> u64 {
    model.seed.wrapping_mul(1_000_003).wrapping_add(scale_index as u64)
}

/// Evaluates every model at scale 0 and every configured scale. Rows are
/// ordered by model (input order), then scale.
pub fn sweep(models: &LoadedModels, settings: &NoiseSweepSettings) -> Result<(Vec<SweepRow>, Vec<SweepRow>)> {
    let scales = settings.sweep_scales();
    let items: Vec<(usize, usize)> = (0..models.models.len())
        .flat_map(|m| (0..scales.len()).map(move |s| (m, s)))
        .collect();
    let results = items
        .par_iter()
        .map(|&(mi, si)| {
            let model = &models.models[mi];
            let data = models.data_for(mi);
            let noise = settings.noise_at(scales[si])?;
            let seed = eval_seed(model, si);
            let tr = evaluate(model, &data.train, Some(&noise), seed)?;
            let te = data
                .test
                .as_ref()
                .map(|t| evaluate(model, t, Some(&noise), seed))
                .transpose()?;
            Ok((mi, si, tr, te))
        })
        .collect::<Result<Vec<_>>>()?;
    let row = |mi: usize, si: usize, e: &Evaluation| SweepRow {
        model_id: models.ids[mi].clone(),
        scale: scales[si],
        loss: e.loss,
        accuracy: e.accuracy,
    };
    let train_rows = results.iter().map(|(m, s, tr, _)| row(*m, *s, tr)).collect();
    let test_rows = results
        .iter()
        .filter_map(|(m, s, _, te)| te.as_ref().map(|e| row(*m, *s, e)))
        .collect();
    Ok((train_rows, test_rows))
}

/// Writes `sweep.csv` (training data), `sweep_test.csv` (held-out data, when
/// any model has a test split) and `sweep_report.json`.
pub fn run_noise_sweep(model_paths: &[PathBuf], config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    if model_paths.is_empty() {
        return Err(Error::Config("no model files given".into()));
    }
    let models = LoadedModels::load(model_paths, config.dataset.as_ref())?;
    let (train_rows, test_rows) = sweep(&models, &config.noise_sweep)?;
    let out = &config.output_dir;
    write_text(&out.join("sweep.csv"), &sweep_csv(&train_rows))?;
    if !test_rows.is_empty() {
        write_text(&out.join("sweep_test.csv"), &sweep_csv(&test_rows))?;
    }
    let report = SweepReport {
        config: config.clone(),
        train: train_rows,
        test: test_rows,
    };
    write_json(&out.join("sweep_report.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub qmlp: String,
    pub deep_qmlp: String,
    pub dataset: String,
    pub trainable_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleComparison {
    pub scale: f64,
    pub qmlp_loss: f64,
    pub qmlp_accuracy: f64,
    pub deep_qmlp_loss: f64,
    pub deep_qmlp_accuracy: f64,
    /// DeepQMLP − QMLP
    pub loss_delta: f64,
    /// DeepQMLP − QMLP
    pub accuracy_delta: f64,
    /// (QMLP − DeepQMLP) / QMLP mean loss; positive when DeepQMLP is better.
    pub relative_loss_reduction: f64,
    /// Per pair, DeepQMLP − QMLP loss.
    pub pair_loss_deltas: Vec<f64>,
    /// Per pair, DeepQMLP − QMLP accuracy.
    pub pair_accuracy_deltas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub config: ExperimentConfig,
    pub pairs: Vec<Pair>,
    pub scales: Vec<ScaleComparison>,
}

impl CompareReport {
    pub fn at_scale(&self, scale: f64) -> Option<&ScaleComparison> {
        self.scales.iter().find(|s| s.scale == scale)
    }
}

/// Pairs `qmlp[i]` with `deep[i]`; both must be the right architecture, share
/// a dataset and have the same number of trainables.
pub fn validate_pairs(qmlp: &LoadedModels, deep: &LoadedModels) -> Result<Vec<Pair>> {
    if qmlp.models.len() != deep.models.len() {
        return Err(Error::Pairing(format!(
            "{} QMLP models vs {} DeepQMLP models",
            qmlp.models.len(),
            deep.models.len()
        )));
    }
    if qmlp.models.is_empty() {
        return Err(Error::Pairing("no model pairs given".into()));
    }
    let mut pairs = Vec::new();
    for i in 0..qmlp.models.len() {
        let (q, d) = (&qmlp.models[i], &deep.models[i]);
        let (qid, did) = (&qmlp.ids[i], &deep.ids[i]);
        if q.architecture.is_deep() {
            return Err(Error::Pairing(format!("{qid} is not a QMLP model")));
        }
        if !d.architecture.is_deep() {
            return Err(Error::Pairing(format!("{did} is not a DeepQMLP model")));
        }
        if q.dataset != d.dataset {
            return Err(Error::Pairing(format!("{qid} and {did} use different datasets")));
        }
        if q.trainable_count() != d.trainable_count() {
            return Err(Error::Pairing(format!(
                "{qid} has {} trainables, {did} has {}",
                q.trainable_count(),
                d.trainable_count()
            )));
        }
        pairs.push(Pair {
            qmlp: qid.clone(),
            deep_qmlp: did.clone(),
            dataset: q.dataset.as_ref().map(DatasetSource::label).unwrap_or_default(),
            trainable_count: q.trainable_count(),
        });
    }
    Ok(pairs)
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

/// Paired comparison on the training data at scale 0 and every configured
/// scale.
pub fn compare(
    qmlp: &LoadedModels,
    deep: &LoadedModels,
    config: &ExperimentConfig,
) -> Result<CompareReport> {
    config.validate()?;
    let pairs = validate_pairs(qmlp, deep)?;
    let (q_rows, _) = sweep(qmlp, &config.noise_sweep)?;
    let (d_rows, _) = sweep(deep, &config.noise_sweep)?;
    let scales = config.noise_sweep.sweep_scales();
    let ns = scales.len();
    let comparisons = scales
        .iter()
        .enumerate()
        .map(|(si, &scale)| {
            let q: Vec<&SweepRow> = (0..pairs.len()).map(|p| &q_rows[p * ns + si]).collect();
            let d: Vec<&SweepRow> = (0..pairs.len()).map(|p| &d_rows[p * ns + si]).collect();
            let ql = mean(q.iter().map(|r| r.loss));
            let dl = mean(d.iter().map(|r| r.loss));
            let qa = mean(q.iter().map(|r| r.accuracy));
            let da = mean(d.iter().map(|r| r.accuracy));
            ScaleComparison {
                scale,
                qmlp_loss: ql,
                qmlp_accuracy: qa,
                deep_qmlp_loss: dl,
                deep_qmlp_accuracy: da,
                loss_delta: dl - ql,
                accuracy_delta: da - qa,
                relative_loss_reduction: (ql - dl) / ql,
                pair_loss_deltas: q.iter().zip(&d).map(|(a, b)| b.loss - a.loss).collect(),
                pair_accuracy_deltas: q.iter().zip(&d).map(|(a, b)| b.accuracy - a.accuracy).collect(),
            }
        })
        .collect();
    Ok(CompareReport {
        config: config.clone(),
        pairs,
        scales: comparisons,
    })
}

/// Loads both model lists, compares them and writes `compare.json`.
pub fn run_compare(
    qmlp_paths: &[PathBuf],
    deep_paths: &[PathBuf],
    config: &ExperimentConfig,
) -> Result<CompareReport> {
    config.validate()?;
    let q = LoadedModels::load(qmlp_paths, config.dataset.as_ref())?;
    let d = LoadedModels::load(deep_paths, config.dataset.as_ref())?;
    let report = compare(&q, &d, config)?;
    write_json(&config.output_dir.join("compare.json"), &report)?;
    Ok(report)
}

/// Writes the raw (unscaled) training split of a synthetic dataset.
pub fn run_gen_data(spec: &SyntheticSpec, path: impl AsRef<Path>) -> Result<()> {
    if spec.samples_per_class == 0 {
        return Err(Error::Config("samples_per_class must be positive".into()));
    }
    let data = generate_synthetic(spec)?;
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    write_dataset_csv(&data, path)
}

/// Renders history or sweep CSVs into one SVG file.
pub fn run_plot(inputs: &[PathBuf], out: impl AsRef<Path>) -> Result<()> {
    let svg = plot_csvs(inputs)?;
    write_text(out.as_ref(), &svg)
}
