//! QMLP / DeepQMLP networks: quantum hidden layers feeding a bias-free softmax
//! dense layer.
//!
//! Trainables are laid out as one flat vector: every hidden layer's circuit
//! parameters in layer order, then the dense weights row by row (one row per
//! class).

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_hidden_layer, CircuitSpec, HiddenLayerSpec};
use crate::data::{DatasetSource, FeatureScaling};
use crate::error::{Error, Result};
use crate::gradients::shift_jacobians;
use crate::noise::NoiseConfig;
use crate::rng::seeded;

/// Floor applied to probabilities before taking the log.
pub const PROB_FLOOR: f64 = 1e-12;

/// Multiplier applied to hidden-layer expectations before they are re-encoded.
pub const DEFAULT_INTERLAYER_SCALING: f64 = PI;

const INIT_STREAM: u64 = 0x1417;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Architecture {
    /// One hidden layer with `layers` parametric layers.
    Qmlp {
        n_qubits: usize,
        layers: usize,
        n_classes: usize,
    },
    /// Two or more stacked hidden layers, `layers[i]` parametric layers each.
    DeepQmlp {
        n_qubits: usize,
        layers: Vec<usize>,
        n_classes: usize,
    },
}

impl Architecture {
    pub fn n_qubits(&self) -> usize {
        match self {
            Architecture::Qmlp { n_qubits, .. } | Architecture::DeepQmlp { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Architecture::Qmlp { n_classes, .. } | Architecture::DeepQmlp { n_classes, .. } => *n_classes,
        }
    }

    pub fn hidden_specs(&self) -> Vec<HiddenLayerSpec> {
        let n = self.n_qubits();
        match self {
            Architecture::Qmlp { layers, .. } => vec![HiddenLayerSpec::new(n, *layers)],
            Architecture::DeepQmlp { layers, .. } => {
                layers.iter().map(|&l| HiddenLayerSpec::new(n, l)).collect()
            }
        }
    }

    /// Parametric layers summed over all hidden layers.
    pub fn total_parametric_layers(&self) -> usize {
        self.hidden_specs().iter().map(|s| s.n_parametric_layers).sum()
    }

    pub fn quantum_param_count(&self) -> usize {
        self.hidden_specs().iter().map(HiddenLayerSpec::param_count).sum()
    }

    pub fn classical_weight_count(&self) -> usize {
        self.n_qubits() * self.n_classes()
    }

    /// Σ 2·nᵢ·Lᵢ + n·m
    pub fn trainable_count(&self) -> usize {
        self.quantum_param_count() + self.classical_weight_count()
    }

    pub fn is_deep(&self) -> bool {
        matches!(self, Architecture::DeepQmlp { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_classes() < 2 {
            return Err(Error::Model(format!("need at least 2 classes, got {}", self.n_classes())));
        }
        if let Architecture::DeepQmlp { layers, .. } = self {
            if layers.len() < 2 {
                return Err(Error::Model(format!(
                    "DeepQMLP needs at least 2 hidden layers, got {}",
                    layers.len()
                )));
            }
        }
        for spec in self.hidden_specs() {
            build_hidden_layer(&spec)?;
        }
        Ok(())
    }

    /// e.g. `qmlp-L4` or `deepqmlp-L2x2`.
    pub fn tag(&self) -> String {
        match self {
            Architecture::Qmlp { layers, .. } => format!("qmlp-L{layers}"),
            Architecture::DeepQmlp { layers, .. } => {
                let parts: Vec<String> = layers.iter().map(usize::to_string).collect();
                format!("deepqmlp-L{}", parts.join("x"))
            }
        }
    }
}

/// Bias-free dense layer; `weights[class][feature]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Vec<Vec<f64>>,
}

impl DenseLayer {
    pub fn zeros(n_classes: usize, n_features: usize) -> Self {
        DenseLayer {
            weights: vec![vec![0.0; n_features]; n_classes],
        }
    }

    pub fn n_classes(&self) -> usize {
        self.weights.len()
    }

    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn logits(&self, features: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|row| row.iter().zip(features).map(|(w, x)| w * x).sum())
            .collect()
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// −ln(max(probs[label], 1e-12)).
pub fn cross_entropy_loss(probs: &[f64], label: usize) -> Result<f64> {
    let p = probs.get(label).ok_or(Error::Label {
        label,
        n_classes: probs.len(),
    })?;
    Ok(-p.max(PROB_FLOOR).ln())
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridModel {
    pub architecture: Architecture,
    circuits: Vec<CircuitSpec>,
    pub quantum_params: Vec<f64>,
    pub dense: DenseLayer,
    pub input_scaling: Option<FeatureScaling>,
    pub interlayer_scaling: f64,
    pub seed: u64,
    pub dataset: Option<DatasetSource>,
}

/// Intermediate values of one noiseless forward pass.
struct Trace {
    /// Angles fed into each hidden layer.
    layer_inputs: Vec<Vec<f64>>,
    /// Expectations of the last hidden layer.
    features: Vec<f64>,
    probs: Vec<f64>,
}

impl HybridModel {
    /// Builds and randomly initializes a model: circuit parameters uniform in
    /// [-π, π], dense weights uniform in [-√(1/n), √(1/n)].
    pub fn new(architecture: Architecture, seed: u64) -> Result<Self> {
        let mut model = Self::zeroed(architecture)?;
        model.seed = seed;
        let mut rng = seeded(seed, INIT_STREAM);
        for p in &mut model.quantum_params {
            *p = rng.random_range(-PI..=PI);
        }
        let bound = (1.0 / model.architecture.n_qubits() as f64).sqrt();
        for w in model.dense.weights.iter_mut().flatten() {
            *w = rng.random_range(-bound..=bound);
        }
        Ok(model)
    }

    /// All parameters and weights zero.
    pub fn zeroed(architecture: Architecture) -> Result<Self> {
        architecture.validate()?;
        let circuits = architecture
            .hidden_specs()
            .iter()
            .map(build_hidden_layer)
            .collect::<Result<Vec<_>>>()?;
        let n_params = architecture.quantum_param_count();
        let dense = DenseLayer::zeros(architecture.n_classes(), architecture.n_qubits());
        Ok(HybridModel {
            architecture,
            circuits,
            quantum_params: vec![0.0; n_params],
            dense,
            input_scaling: None,
            interlayer_scaling: DEFAULT_INTERLAYER_SCALING,
            seed: 0,
            dataset: None,
        })
    }

    pub fn circuits(&self) -> &[CircuitSpec] {
        &self.circuits
    }

    pub fn n_qubits(&self) -> usize {
        self.architecture.n_qubits()
    }

    pub fn n_classes(&self) -> usize {
        self.architecture.n_classes()
    }

    pub fn quantum_param_count(&self) -> usize {
        self.quantum_params.len()
    }

    pub fn classical_weight_count(&self) -> usize {
        self.dense.weights.iter().map(Vec::len).sum()
    }

    pub fn trainable_count(&self) -> usize {
        self.quantum_param_count() + self.classical_weight_count()
    }

    fn layer_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.circuits
            .iter()
            .map(|c| {
                let r = start..start + c.n_params;
                start = r.end;
                r
            })
            .collect()
    }

    /// Trainables as one vector (circuit parameters, then dense weights).
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = self.quantum_params.clone();
        out.extend(self.dense.weights.iter().flatten());
        out
    }

    pub fn set_params_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.trainable_count() {
            return Err(Error::length("trainable vector", self.trainable_count(), flat.len()));
        }
        let (q, w) = flat.split_at(self.quantum_params.len());
        self.quantum_params.copy_from_slice(q);
        let n = self.dense.n_features();
        for (row, chunk) in self.dense.weights.iter_mut().zip(w.chunks(n)) {
            row.copy_from_slice(chunk);
        }
        Ok(())
    }

    fn check_features(&self, features: &[f64]) -> Result<()> {
        if features.len() != self.n_qubits() {
            return Err(Error::length("input features", self.n_qubits(), features.len()));
        }
        Ok(())
    }

    /// Hidden-layer output fed to the dense layer. With noise, every hidden
    /// layer runs on the density-matrix path.
    pub fn hidden_features(
        &self,
        features: &[f64],
        noise: Option<&NoiseConfig>,
        mut rng: Option<&mut dyn RngCore>,
    ) -> Result<Vec<f64>> {
        self.check_features(features)?;
        let mut angles = features.to_vec();
        let mut expectations = Vec::new();
        for (k, (circuit, range)) in self.circuits.iter().zip(self.layer_ranges()).enumerate() {
            if k > 0 {
                angles = expectations.iter().map(|e| e * self.interlayer_scaling).collect();
            }
            expectations = circuit.evaluate_with_rng(
                &angles,
                &self.quantum_params[range],
                noise,
                rng.as_mut().map(|r| &mut **r as &mut dyn RngCore),
            )?;
        }
        Ok(expectations)
    }

    /// Class probabilities for already-scaled input angles.
    pub fn forward(&self, features: &[f64]) -> Result<Vec<f64>> {
        self.forward_noisy(features, None, None)
    }

    pub fn forward_noisy(
        &self,
        features: &[f64],
        noise: Option<&NoiseConfig>,
        rng: Option<&mut dyn RngCore>,
    ) -> Result<Vec<f64>> {
        let e = self.hidden_features(features, noise, rng)?;
        Ok(softmax(&self.dense.logits(&e)))
    }

    pub fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(features)?))
    }

    fn trace(&self, features: &[f64]) -> Result<Trace> {
        self.check_features(features)?;
        let mut layer_inputs = Vec::with_capacity(self.circuits.len());
        let mut angles = features.to_vec();
        let mut expectations = Vec::new();
        for (k, (circuit, range)) in self.circuits.iter().zip(self.layer_ranges()).enumerate() {
            if k > 0 {
                angles = expectations.iter().map(|e| e * self.interlayer_scaling).collect();
            }
            expectations = circuit
                .run_pure(&angles, &self.quantum_params[range])?
                .z_expectations();
            layer_inputs.push(angles.clone());
        }
        let probs = softmax(&self.dense.logits(&expectations));
        Ok(Trace {
            layer_inputs,
            features: expectations,
            probs,
        })
    }

    /// Loss and gradient of the loss for a single sample.
    pub fn sample_gradient(&self, features: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
        if label >= self.n_classes() {
            return Err(Error::Label {
                label,
                n_classes: self.n_classes(),
            });
        }
        let trace = self.trace(features)?;
        let loss = cross_entropy_loss(&trace.probs, label)?;
        let mut grad = vec![0.0; self.trainable_count()];

        // Softmax + cross-entropy: ∂L/∂z = p − onehot(label).
        let mut delta = trace.probs.clone();
        delta[label] -= 1.0;
        let n = self.n_qubits();
        let offset = self.quantum_params.len();
        for (c, d) in delta.iter().enumerate() {
            for (j, e) in trace.features.iter().enumerate() {
                grad[offset + c * n + j] = d * e;
            }
        }
        // ∂L/∂e = Wᵀ δ
        let mut upstream: Vec<f64> = (0..n)
            .map(|j| delta.iter().zip(&self.dense.weights).map(|(d, row)| d * row[j]).sum())
            .collect();

        let ranges = self.layer_ranges();
        for k in (0..self.circuits.len()).rev() {
            let circuit = &self.circuits[k];
            let range = ranges[k].clone();
            let (jac, _) = shift_jacobians(
                circuit,
                &trace.layer_inputs[k],
                &self.quantum_params[range.clone()],
                k > 0,
            )?;
            for (i, g) in grad[range].iter_mut().enumerate() {
                *g = upstream
                    .iter()
                    .zip(&jac.d_out_d_params)
                    .map(|(u, row)| u * row[i])
                    .sum();
            }
            if k > 0 {
                upstream = (0..circuit.n_inputs)
                    .map(|j| {
                        self.interlayer_scaling
                            * upstream
                                .iter()
                                .zip(&jac.d_out_d_inputs)
                                .map(|(u, row)| u * row[j])
                                .sum::<f64>()
                    })
                    .collect();
            }
        }
        Ok((loss, grad))
    }

    /// Mean loss gradient over a batch. Samples are processed in parallel and
    /// reduced in batch order.
    pub fn backward(&self, batch: &[(&[f64], usize)]) -> Result<Vec<f64>> {
        Ok(self.loss_and_gradient(batch)?.1)
    }

    /// Mean loss and mean gradient over a batch.
    pub fn loss_and_gradient(&self, batch: &[(&[f64], usize)]) -> Result<(f64, Vec<f64>)> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let per_sample = batch
            .par_iter()
            .map(|(x, y)| self.sample_gradient(x, *y))
            .collect::<Result<Vec<_>>>()?;
        let mut grad = vec![0.0; self.trainable_count()];
        let mut loss = 0.0;
        for (l, g) in &per_sample {
            loss += l;
            for (acc, v) in grad.iter_mut().zip(g) {
                *acc += v;
            }
        }
        let scale = 1.0 / batch.len() as f64;
        grad.iter_mut().for_each(|g| *g *= scale);
        Ok((loss * scale, grad))
    }

    /// Mean noiseless loss over a batch.
    pub fn batch_loss(&self, batch: &[(&[f64], usize)]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let mut total = 0.0;
        for (x, y) in batch {
            total += cross_entropy_loss(&self.forward(x)?, *y)?;
        }
        Ok(total / batch.len() as f64)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            architecture: self.architecture.clone(),
            trainable_count: self.trainable_count(),
            quantum_params: self.quantum_params.clone(),
            dense_weights: self.dense.weights.clone(),
            input_scaling: self.input_scaling.clone(),
            interlayer_scaling: self.interlayer_scaling,
            seed: self.seed,
            dataset: self.dataset.clone(),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        let mut model = Self::zeroed(file.architecture)?;
        if file.quantum_params.len() != model.quantum_params.len() {
            return Err(Error::length(
                "quantum parameters",
                model.quantum_params.len(),
                file.quantum_params.len(),
            ));
        }
        let shape_ok = file.dense_weights.len() == model.n_classes()
            && file.dense_weights.iter().all(|r| r.len() == model.n_qubits());
        if !shape_ok {
            return Err(Error::Model(format!(
                "dense weights must be {}×{}",
                model.n_classes(),
                model.n_qubits()
            )));
        }
        model.quantum_params = file.quantum_params;
        model.dense.weights = file.dense_weights;
        model.input_scaling = file.input_scaling;
        model.interlayer_scaling = file.interlayer_scaling;
        model.seed = file.seed;
        model.dataset = file.dataset;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(&self.to_file())?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_file(serde_json::from_str(&text)?)
    }
}

pub const MODEL_FORMAT: &str = "qmlp-model/1";

/// On-disk model description. Floats are written in shortest round-trip form,
/// so save/load is lossless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub architecture: Architecture,
    pub trainable_count: usize,
    pub quantum_params: Vec<f64>,
    pub dense_weights: Vec<Vec<f64>>,
    pub input_scaling: Option<FeatureScaling>,
    pub interlayer_scaling: f64,
    pub seed: u64,
    #[serde(default)]
    pub dataset: Option<DatasetSource>,
}
