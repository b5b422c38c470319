//! Hybrid quantum-classical multilayer perceptrons (QMLP and DeepQMLP) on a
//! small exact quantum simulator.
//!
//! * [`state`] / [`density`]: statevector and density-matrix simulation,
//!   depolarizing channels, Pauli-Z readout.
//! * [`circuit`]: angle encoding and CRZ-ring/RY parametric layers.
//! * [`gradients`]: shift-rule Jacobians and a finite-difference oracle.
//! * [`model`], [`optim`], [`train`]: the hybrid network, Adagrad, and the
//!   training / evaluation loops.
//! * [`data`]: synthetic datasets, Iris ingestion, feature scaling.
//! * [`harness`]: experiment configs, noise sweeps, comparisons, reports, plots.

pub mod circuit;
pub mod data;
pub mod density;
pub mod error;
pub mod gate;
pub mod gradients;
pub mod harness;
pub mod model;
pub mod noise;
pub mod optim;
pub mod rng;
pub mod state;
pub mod train;

pub use circuit::{build_hidden_layer, CircuitSpec, HiddenLayerSpec};
pub use data::{Dataset, DatasetSource, SyntheticFamily, SyntheticSpec};
pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use gate::{Angle, Gate, GateKind};
pub use gradients::LayerJacobians;
pub use model::{Architecture, HybridModel};
pub use noise::NoiseConfig;
pub use optim::Adagrad;
pub use state::QuantumState;
pub use train::{evaluate, train, Evaluation, TrainConfig, TrainingHistory};

