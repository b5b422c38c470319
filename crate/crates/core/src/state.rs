//! Pure-state simulation.
//!
//! Qubit `q` is bit `q` of the basis-state index (qubit 0 is least
//! significant).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Angle, Gate, Matrix2};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

/// Applies `m` to the qubit living at bit `bit` of the index.
pub(crate) fn apply_1q(amps: &mut [Complex64], bit: usize, m: &Matrix2) {
    let mask = 1usize << bit;
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let j = i | mask;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a + m[0][1] * b;
        amps[j] = m[1][0] * a + m[1][1] * b;
    }
}

/// Applies `m` to bit `target` on the subspace where bit `control` is set.
pub(crate) fn apply_controlled_1q(
    amps: &mut [Complex64],
    control: usize,
    target: usize,
    m: &Matrix2,
) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for i in 0..amps.len() {
        if i & cmask == 0 || i & tmask != 0 {
            continue;
        }
        let j = i | tmask;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a + m[0][1] * b;
        amps[j] = m[1][0] * a + m[1][1] * b;
    }
}

/// Applies `gate` (with target matrix `m`) to a vector whose qubit `q` sits at
/// bit `q + offset`.
pub(crate) fn apply_with_offset(amps: &mut [Complex64], gate: &Gate, m: &Matrix2, offset: usize) {
    match gate.kind.arity() {
        1 => apply_1q(amps, gate.targets[0] + offset, m),
        _ => apply_controlled_1q(amps, gate.targets[0] + offset, gate.targets[1] + offset, m),
    }
}

/// Uses the explicitly supplied angle, falling back to a fixed angle on the gate.
pub(crate) fn effective_angle(gate: &Gate, angle: Option<f64>) -> Option<f64> {
    angle.or(match gate.angle {
        Some(Angle::Fixed(v)) => Some(v),
        _ => None,
    })
}

pub(crate) fn check_qubits(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::QubitCount(n_qubits))
    }
}

#[inline]
pub(crate) fn z_sign(index: usize, qubit: usize) -> f64 {
    if index >> qubit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(QuantumState {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes. The vector must have power-of-two length and unit norm
    /// (within 1e-10).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::length("amplitude vector (power of two)", len.next_power_of_two(), len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let state = QuantumState {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "not normalized (|ψ|² = {norm})"
            )));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `gate` in place. `angle` is the resolved rotation angle; it may be
    /// omitted for fixed-angle and non-rotation gates.
    pub fn apply_gate(&mut self, gate: &Gate, angle: Option<f64>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let m = gate.target_matrix(effective_angle(gate, angle))?;
        apply_with_offset(&mut self.amplitudes, gate, &m, 0);
        Ok(())
    }

    /// ⟨ψ|Z_q|ψ⟩.
    pub fn pauli_z_expectation(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| z_sign(i, qubit) * a.norm_sqr())
            .sum())
    }

    /// Z expectations of every qubit, in qubit order.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, e) in out.iter_mut().enumerate() {
                *e += z_sign(i, q) * p;
            }
        }
        out
    }

    // Unchecked fast path for circuit evaluation after the circuit was validated.
    pub(crate) fn apply_raw(&mut self, gate: &Gate, m: &Matrix2) {
        apply_with_offset(&mut self.amplitudes, gate, m, 0);
    }

    pub(crate) fn apply_raw_cnot(&mut self, control: usize, target: usize) {
        apply_controlled_1q(&mut self.amplitudes, control, target, &crate::gate::pauli_x());
    }

    pub(crate) fn apply_raw_rz(&mut self, target: usize, theta: f64) {
        apply_1q(&mut self.amplitudes, target, &crate::gate::rz(theta));
    }
}

/// |0…0⟩; errors when `n_qubits` is outside `1..=12`.
pub fn zero_state(n_qubits: usize) -> Result<QuantumState> {
    QuantumState::zero(n_qubits)
}

/// Returns `state` transformed by `gate`.
pub fn apply_gate(state: &QuantumState, gate: &Gate, angle: Option<f64>) -> Result<QuantumState> {
    let mut out = state.clone();
    out.apply_gate(gate, angle)?;
    Ok(out)
}

pub fn pauli_z_expectation(state: &QuantumState, qubit: usize) -> Result<f64> {
    state.pauli_z_expectation(qubit)
}
