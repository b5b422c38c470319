//! Mini-batch training and (optionally noisy) evaluation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::{argmax, cross_entropy_loss, HybridModel};
use crate::noise::NoiseConfig;
use crate::optim::Adagrad;
use crate::rng::seeded;

const SHUFFLE_STREAM: u64 = 0x5f1e;
const SHOT_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 50,
            batch_size: 30,
            learning_rate: 0.5,
            epsilon: 1e-10,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub loss: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub records: Vec<EpochRecord>,
}

impl TrainingHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// `epoch,loss,accuracy`, epochs numbered from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss,accuracy\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{}", r.epoch, r.loss, r.accuracy);
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

fn check_compatible(model: &HybridModel, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Dataset("dataset is empty".into()));
    }
    if data.n_features() != model.n_qubits() {
        return Err(Error::length("dataset features", model.n_qubits(), data.n_features()));
    }
    if data.n_classes != model.n_classes() {
        return Err(Error::Model(format!(
            "model has {} classes, dataset has {}",
            model.n_classes(),
            data.n_classes
        )));
    }
    Ok(())
}

/// Trains in place with Adagrad. Batches are reshuffled every epoch from
/// `seed`; the last batch may be short. Each history entry is measured on the
/// whole training set without noise after the epoch's updates.
pub fn train(
    model: &mut HybridModel,
    data: &Dataset,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<TrainingHistory> {
    cfg.validate()?;
    check_compatible(model, data)?;
    if cfg.batch_size > data.len() {
        return Err(Error::Training(format!(
            "batch_size {} exceeds dataset size {}",
            cfg.batch_size,
            data.len()
        )));
    }
    let mut rng = seeded(seed, SHUFFLE_STREAM);
    let mut opt = Adagrad::new(cfg.learning_rate, cfg.epsilon, model.trainable_count());
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = TrainingHistory::default();
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<(&[f64], usize)> = chunk
                .iter()
                .map(|&i| (data.features[i].as_slice(), data.labels[i]))
                .collect();
            let grad = model.backward(&batch)?;
            let mut params = model.params_flat();
            opt.step(&mut params, &grad)?;
            model.set_params_flat(&params)?;
        }
        let eval = evaluate(model, data, None, seed)?;
        if !eval.loss.is_finite() {
            return Err(Error::Training(format!("loss diverged at epoch {epoch}")));
        }
        history.records.push(EpochRecord {
            epoch,
            loss: eval.loss,
            accuracy: eval.accuracy,
        });
    }
    Ok(history)
}

/// Mean cross-entropy and accuracy over `data`. With noise, every hidden
/// layer is simulated as a density matrix; shot sampling (if configured)
/// draws from a per-sample stream derived from `seed`.
pub fn evaluate(
    model: &HybridModel,
    data: &Dataset,
    noise: Option<&NoiseConfig>,
    seed: u64,
) -> Result<Evaluation> {
    check_compatible(model, data)?;
    if let Some(n) = noise {
        n.validate()?;
    }
    let per_sample = (0..data.len())
        .into_par_iter()
        .map(|i| {
            let x = &data.features[i];
            let probs = match noise {
                None => model.forward(x)?,
                Some(cfg) => {
                    let mut rng = seeded(seed, SHOT_STREAM_BASE + i as u64);
                    model.forward_noisy(x, Some(cfg), Some(&mut rng))?
                }
            };
            let loss = cross_entropy_loss(&probs, data.labels[i])?;
            Ok((loss, argmax(&probs) == data.labels[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut loss = 0.0;
    let mut correct = 0usize;
    for (l, ok) in per_sample {
        loss += l;
        correct += usize::from(ok);
    }
    let n = data.len() as f64;
    Ok(Evaluation {
        loss: loss / n,
        accuracy: correct as f64 / n,
    })
}
