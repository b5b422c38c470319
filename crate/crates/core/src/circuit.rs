//! Hidden-layer circuits: angle encoding followed by parametric layers.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::density::{sample_expectation, DensityMatrix};
use crate::error::{Error, Result};
use crate::gate::{Angle, Gate, GateKind};
use crate::noise::NoiseConfig;
use crate::state::{check_qubits, QuantumState};

/// Shape of one quantum hidden layer: `n_qubits` wires and `L` parametric layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenLayerSpec {
    pub n_qubits: usize,
    pub n_parametric_layers: usize,
}

impl HiddenLayerSpec {
    pub fn new(n_qubits: usize, n_parametric_layers: usize) -> Self {
        HiddenLayerSpec {
            n_qubits,
            n_parametric_layers,
        }
    }

    /// 2·n·L
    pub fn param_count(&self) -> usize {
        2 * self.n_qubits * self.n_parametric_layers
    }

    /// 2n encoding gates plus 2n gates per parametric layer.
    pub fn gate_count(&self) -> usize {
        2 * self.n_qubits * (1 + self.n_parametric_layers)
    }
}

/// An ordered gate list whose rotation angles come from input and parameter slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub n_params: usize,
    pub n_inputs: usize,
}

/// H then RZ(input q) on every qubit q.
pub fn build_encoding(n_qubits: usize) -> Vec<Gate> {
    (0..n_qubits)
        .flat_map(|q| [Gate::h(q), Gate::rz(q, Angle::Input(q))])
        .collect()
}

/// A ring of CRZ(q → q+1 mod n) followed by RY on every qubit. Consumes
/// `2 * n_qubits` parameter slots starting at `param_offset`, CRZ slots first.
pub fn build_parametric_layer(n_qubits: usize, param_offset: usize) -> Result<Vec<Gate>> {
    if n_qubits < 2 {
        return Err(Error::Circuit(format!(
            "parametric layer needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let mut gates = Vec::with_capacity(2 * n_qubits);
    for q in 0..n_qubits {
        gates.push(Gate::crz(q, (q + 1) % n_qubits, Angle::Param(param_offset + q))?);
    }
    for q in 0..n_qubits {
        gates.push(Gate::ry(q, Angle::Param(param_offset + n_qubits + q)));
    }
    Ok(gates)
}

pub fn build_hidden_layer(spec: &HiddenLayerSpec) -> Result<CircuitSpec> {
    check_qubits(spec.n_qubits)?;
    if spec.n_parametric_layers == 0 {
        return Err(Error::Circuit("hidden layer needs at least one parametric layer".into()));
    }
    let mut gates = build_encoding(spec.n_qubits);
    for layer in 0..spec.n_parametric_layers {
        gates.extend(build_parametric_layer(
            spec.n_qubits,
            layer * 2 * spec.n_qubits,
        )?);
    }
    CircuitSpec::new(spec.n_qubits, gates)
}

impl CircuitSpec {
    /// Validates every gate and the slot layout: parameter and input slots must
    /// each be exactly `0..count`, used once.
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut params = Vec::new();
        let mut inputs = Vec::new();
        for g in &gates {
            g.validate(n_qubits)?;
            match g.angle {
                Some(Angle::Param(i)) => params.push(i),
                Some(Angle::Input(i)) => inputs.push(i),
                _ => {}
            }
        }
        let n_params = contiguous_slots(params, "parameter")?;
        let n_inputs = contiguous_slots(inputs, "input")?;
        Ok(CircuitSpec {
            n_qubits,
            gates,
            n_params,
            n_inputs,
        })
    }

    pub fn check_lengths(&self, inputs: &[f64], params: &[f64]) -> Result<()> {
        if inputs.len() != self.n_inputs {
            return Err(Error::length("circuit inputs", self.n_inputs, inputs.len()));
        }
        if params.len() != self.n_params {
            return Err(Error::length("circuit parameters", self.n_params, params.len()));
        }
        Ok(())
    }

    /// Noiseless final state.
    pub fn run_pure(&self, inputs: &[f64], params: &[f64]) -> Result<QuantumState> {
        self.check_lengths(inputs, params)?;
        let mut state = QuantumState::zero(self.n_qubits)?;
        for g in &self.gates {
            let angle = g.angle.map(|a| a.resolve(inputs, params)).transpose()?;
            state.apply_raw(g, &g.target_matrix(angle)?);
        }
        Ok(state)
    }

    /// Final density matrix with a depolarizing channel after every gate.
    pub fn run_noisy(
        &self,
        inputs: &[f64],
        params: &[f64],
        noise: &NoiseConfig,
    ) -> Result<DensityMatrix> {
        self.check_lengths(inputs, params)?;
        noise.validate()?;
        let mut rho = DensityMatrix::zero(self.n_qubits)?;
        for g in &self.gates {
            let angle = g.angle.map(|a| a.resolve(inputs, params)).transpose()?;
            rho.apply_raw(g, &g.target_matrix(angle)?);
            let p = noise.probability_for(g.kind.arity());
            if p > 0.0 {
                rho.depolarize_unchecked(&g.targets, p);
            }
        }
        Ok(rho)
    }

    /// Pauli-Z expectation of every qubit. Without noise this uses the
    /// statevector path; with noise the density-matrix path, sampling shots
    /// when the config asks for them.
    pub fn evaluate(
        &self,
        inputs: &[f64],
        params: &[f64],
        noise: Option<&NoiseConfig>,
        seed: Option<u64>,
    ) -> Result<Vec<f64>> {
        match (noise, noise.and_then(|n| n.shots)) {
            (Some(_), Some(_)) => {
                let seed = seed.ok_or(Error::MissingSeed)?;
                let mut rng = crate::rng::seeded(seed, 0);
                self.evaluate_with_rng(inputs, params, noise, Some(&mut rng))
            }
            _ => self.evaluate_with_rng(inputs, params, noise, None),
        }
    }

    /// As [`evaluate`](Self::evaluate), drawing shot outcomes from `rng`.
    pub fn evaluate_with_rng(
        &self,
        inputs: &[f64],
        params: &[f64],
        noise: Option<&NoiseConfig>,
        rng: Option<&mut dyn RngCore>,
    ) -> Result<Vec<f64>> {
        let Some(noise) = noise else {
            return Ok(self.run_pure(inputs, params)?.z_expectations());
        };
        let exact = self.run_noisy(inputs, params, noise)?.z_expectations();
        match noise.shots {
            None => Ok(exact),
            Some(shots) => {
                let rng = rng.ok_or(Error::MissingSeed)?;
                Ok(exact
                    .into_iter()
                    .map(|e| sample_expectation(e, shots, rng))
                    .collect())
            }
        }
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Free-function form of [`CircuitSpec::evaluate`].
pub fn eval_hidden_layer(
    circuit: &CircuitSpec,
    inputs: &[f64],
    params: &[f64],
    noise: Option<&NoiseConfig>,
    seed: Option<u64>,
) -> Result<Vec<f64>> {
    circuit.evaluate(inputs, params, noise, seed)
}

fn contiguous_slots(mut slots: Vec<usize>, what: &str) -> Result<usize> {
    slots.sort_unstable();
    for (expected, &got) in slots.iter().enumerate() {
        if got != expected {
            return Err(Error::Circuit(format!(
                "{what} slots must be 0..{} each used once (found {got} at position {expected})",
                slots.len()
            )));
        }
    }
    Ok(slots.len())
}
