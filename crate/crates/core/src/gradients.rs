//! Exact Jacobians of hidden-layer expectations.
//!
//! RZ / RY slots (trainable or input) use the two-term shift rule
//! `∂E/∂θ = ½ [E(θ + π/2) − E(θ − π/2)]`. A CRZ slot is differentiated through
//! the exact decomposition
//!
//! ```text
//! CRZ(θ) = RZ_t(θ/2) · CNOT · RZ_t(−θ/2) · CNOT
//! ```
//!
//! so `∂E/∂θ = ½ ∂E/∂a − ½ ∂E/∂b` with `a = θ/2`, `b = −θ/2`, each internal
//! rotation handled by the two-term rule. A CRZ slot therefore costs four
//! circuit runs, every other slot two.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::circuit::CircuitSpec;
use crate::error::{Error, Result};
use crate::gate::{Angle, Gate, GateKind};
use crate::state::QuantumState;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Derivatives of the per-qubit expectation vector. Both matrices are indexed
/// `[qubit][slot]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerJacobians {
    pub d_out_d_params: Vec<Vec<f64>>,
    pub d_out_d_inputs: Vec<Vec<f64>>,
}

impl LayerJacobians {
    fn zeros(n_out: usize, n_params: usize, n_inputs: usize) -> Self {
        LayerJacobians {
            d_out_d_params: vec![vec![0.0; n_params]; n_out],
            d_out_d_inputs: vec![vec![0.0; n_inputs]; n_out],
        }
    }

    /// Largest absolute entry-wise difference across both matrices.
    pub fn max_abs_diff(&self, other: &LayerJacobians) -> f64 {
        let rows = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
            a.iter()
                .zip(b)
                .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
                .fold(0.0f64, f64::max)
        };
        rows(&self.d_out_d_params, &other.d_out_d_params)
            .max(rows(&self.d_out_d_inputs, &other.d_out_d_inputs))
    }
}

#[derive(Clone, Copy)]
enum Perturb {
    /// Shift the gate's own angle.
    Whole(f64),
    /// Run CRZ as its decomposition with shifts on the `θ/2` and `−θ/2` rotations.
    Split { on_half: f64, on_neg_half: f64 },
}

/// Which slot a gate's angle belongs to.
#[derive(Clone, Copy)]
enum Slot {
    Param(usize),
    Input(usize),
}

fn slot_of(gate: &Gate) -> Option<Slot> {
    match gate.angle? {
        Angle::Param(i) => Some(Slot::Param(i)),
        Angle::Input(i) => Some(Slot::Input(i)),
        Angle::Fixed(_) => None,
    }
}

fn apply_perturbed(state: &mut QuantumState, gate: &Gate, theta: f64, perturb: Perturb) -> Result<()> {
    match perturb {
        Perturb::Whole(delta) => state.apply_raw(gate, &gate.target_matrix(Some(theta + delta))?),
        Perturb::Split {
            on_half,
            on_neg_half,
        } => {
            let (c, t) = (gate.targets[0], gate.targets[1]);
            state.apply_raw_cnot(c, t);
            state.apply_raw_rz(t, -theta / 2.0 + on_neg_half);
            state.apply_raw_cnot(c, t);
            state.apply_raw_rz(t, theta / 2.0 + on_half);
        }
    }
    Ok(())
}

fn run_suffix(
    circuit: &CircuitSpec,
    prefix: &QuantumState,
    index: usize,
    theta: f64,
    perturb: Perturb,
    angles: &[Option<f64>],
) -> Result<Vec<f64>> {
    let mut state = prefix.clone();
    apply_perturbed(&mut state, &circuit.gates[index], theta, perturb)?;
    for (g, angle) in circuit.gates.iter().zip(angles).skip(index + 1) {
        state.apply_raw(g, &g.target_matrix(*angle)?);
    }
    Ok(state.z_expectations())
}

fn sub_into(dst: &mut [Vec<f64>], col: usize, plus: &[f64], minus: &[f64], coeff: f64) {
    for (row, (p, m)) in dst.iter_mut().zip(plus.iter().zip(minus)) {
        row[col] += coeff * (p - m);
    }
}

/// Shift-rule Jacobians plus the number of circuit runs used. Input slots are
/// skipped (left at zero) when `with_inputs` is false.
pub(crate) fn shift_jacobians(
    circuit: &CircuitSpec,
    inputs: &[f64],
    params: &[f64],
    with_inputs: bool,
) -> Result<(LayerJacobians, usize)> {
    circuit.check_lengths(inputs, params)?;
    let angles: Vec<Option<f64>> = circuit
        .gates
        .iter()
        .map(|g| g.angle.map(|a| a.resolve(inputs, params)).transpose())
        .collect::<Result<_>>()?;
    let mut jac = LayerJacobians::zeros(circuit.n_qubits, circuit.n_params, circuit.n_inputs);
    let mut runs = 0;
    let mut state = QuantumState::zero(circuit.n_qubits)?;
    for (index, gate) in circuit.gates.iter().enumerate() {
        let slot = slot_of(gate);
        let wanted = match slot {
            Some(Slot::Param(_)) => true,
            Some(Slot::Input(_)) => with_inputs,
            None => false,
        };
        if let (true, Some(slot), Some(theta)) = (wanted, slot, angles[index]) {
            let (target, col) = match slot {
                Slot::Param(i) => (&mut jac.d_out_d_params, i),
                Slot::Input(i) => (&mut jac.d_out_d_inputs, i),
            };
            let mut run = |p: Perturb| {
                runs += 1;
                run_suffix(circuit, &state, index, theta, p, &angles)
            };
            if gate.kind == GateKind::Crz {
                let hp = run(Perturb::Split { on_half: FRAC_PI_2, on_neg_half: 0.0 })?;
                let hm = run(Perturb::Split { on_half: -FRAC_PI_2, on_neg_half: 0.0 })?;
                let np = run(Perturb::Split { on_half: 0.0, on_neg_half: FRAC_PI_2 })?;
                let nm = run(Perturb::Split { on_half: 0.0, on_neg_half: -FRAC_PI_2 })?;
                // ½·(½ΔE_a) − ½·(½ΔE_b)
                sub_into(target, col, &hp, &hm, 0.25);
                sub_into(target, col, &np, &nm, -0.25);
            } else {
                let plus = run(Perturb::Whole(FRAC_PI_2))?;
                let minus = run(Perturb::Whole(-FRAC_PI_2))?;
                sub_into(target, col, &plus, &minus, 0.5);
            }
        }
        state.apply_raw(gate, &gate.target_matrix(angles[index])?);
    }
    Ok((jac, runs))
}

/// Number of circuit runs [`parameter_shift_gradient`] performs: two per RZ/RY
/// slot and four per CRZ slot.
pub fn shift_evaluation_count(circuit: &CircuitSpec) -> usize {
    circuit
        .gates
        .iter()
        .filter(|g| slot_of(g).is_some())
        .map(|g| if g.kind == GateKind::Crz { 4 } else { 2 })
        .sum()
}

/// Exact noiseless Jacobians with respect to parameters and input angles.
pub fn parameter_shift_gradient(
    circuit: &CircuitSpec,
    inputs: &[f64],
    params: &[f64],
) -> Result<LayerJacobians> {
    Ok(shift_jacobians(circuit, inputs, params, true)?.0)
}

/// Central differences `[E(θ+h) − E(θ−h)] / 2h` for every parameter and input slot.
pub fn finite_difference_gradient(
    circuit: &CircuitSpec,
    inputs: &[f64],
    params: &[f64],
    h: f64,
) -> Result<LayerJacobians> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Step(h));
    }
    circuit.check_lengths(inputs, params)?;
    let mut jac = LayerJacobians::zeros(circuit.n_qubits, circuit.n_params, circuit.n_inputs);
    let eval = |x: &[f64], p: &[f64]| -> Result<Vec<f64>> { Ok(circuit.run_pure(x, p)?.z_expectations()) };

    let mut p = params.to_vec();
    for i in 0..params.len() {
        p[i] = params[i] + h;
        let plus = eval(inputs, &p)?;
        p[i] = params[i] - h;
        let minus = eval(inputs, &p)?;
        p[i] = params[i];
        sub_into(&mut jac.d_out_d_params, i, &plus, &minus, 1.0 / (2.0 * h));
    }
    let mut x = inputs.to_vec();
    for i in 0..inputs.len() {
        x[i] = inputs[i] + h;
        let plus = eval(&x, params)?;
        x[i] = inputs[i] - h;
        let minus = eval(&x, params)?;
        x[i] = inputs[i];
        sub_into(&mut jac.d_out_d_inputs, i, &plus, &minus, 1.0 / (2.0 * h));
    }
    Ok(jac)
}
