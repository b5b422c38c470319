//! Mixed-state simulation with depolarizing channels.
//!
//! The matrix is stored row-major as a flat vector of length 4^n; element
//! (r, c) sits at `(r << n) | c`. Row qubit `q` is therefore bit `q + n` and
//! column qubit `q` is bit `q`, which lets gates reuse the statevector kernels:
//! U acts on the row bits and conj(U) on the column bits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::gate::{conj, Gate};
use crate::state::{apply_with_offset, check_qubits, effective_angle, z_sign, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elements: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
        elements[0] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { n_qubits, elements })
    }

    /// I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            elements[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { n_qubits, elements })
    }

    /// |ψ⟩⟨ψ|.
    pub fn from_state(state: &QuantumState) -> Self {
        let amps = state.amplitudes();
        let elements = amps
            .iter()
            .flat_map(|a| amps.iter().map(move |b| a * b.conj()))
            .collect();
        DensityMatrix {
            n_qubits: state.n_qubits(),
            elements,
        }
    }

    /// Builds a density matrix from row-major elements without checking
    /// positivity; trace and Hermiticity must hold within 1e-10.
    pub fn from_elements(n_qubits: usize, elements: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if elements.len() != dim * dim {
            return Err(Error::length("density matrix elements", dim * dim, elements.len()));
        }
        let rho = DensityMatrix { n_qubits, elements };
        if (rho.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {} != 1", rho.trace())));
        }
        if !rho.is_hermitian(1e-10) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.elements[row * self.dim() + col]
    }

    /// Real part of the trace (the imaginary part vanishes for Hermitian ρ).
    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.elements[i * dim + i].re).sum()
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ_{rc} ρ_rc ρ_cr = Σ |ρ_rc|² for Hermitian ρ.
        self.elements.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (r..dim).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol))
    }

    /// ρ → U ρ U†.
    pub fn apply_gate(&mut self, gate: &Gate, angle: Option<f64>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let m = gate.target_matrix(effective_angle(gate, angle))?;
        self.apply_raw(gate, &m);
        Ok(())
    }

    pub(crate) fn apply_raw(&mut self, gate: &Gate, m: &crate::gate::Matrix2) {
        apply_with_offset(&mut self.elements, gate, m, self.n_qubits);
        apply_with_offset(&mut self.elements, gate, &conj(m), 0);
    }

    /// Depolarizing channel on `qubits`:
    /// Λ(ρ) = (1 − p) ρ + p · (I/2^k ⊗ Tr_qubits ρ).
    pub fn apply_depolarizing(&mut self, qubits: &[usize], p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Probability(p));
        }
        if qubits.is_empty() || qubits.len() > 2 {
            return Err(Error::Noise(format!(
                "depolarizing channel acts on 1 or 2 qubits, got {}",
                qubits.len()
            )));
        }
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::QubitIndex {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Noise("repeated qubit in depolarizing channel".into()));
        }
        if p == 0.0 {
            return Ok(());
        }
        self.depolarize_unchecked(qubits, p);
        Ok(())
    }

    pub(crate) fn depolarize_unchecked(&mut self, qubits: &[usize], p: f64) {
        let n = self.n_qubits;
        let dim = self.dim();
        let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
        let k = qubits.len();
        let patterns: Vec<usize> = (0..1usize << k)
            .map(|bits| {
                qubits
                    .iter()
                    .enumerate()
                    .map(|(j, &q)| ((bits >> j) & 1) << q)
                    .sum()
            })
            .collect();
        let weight = p / (1usize << k) as f64;
        let old = self.elements.clone();
        for r in 0..dim {
            for c in 0..dim {
                let idx = (r << n) | c;
                let mut v = old[idx] * (1.0 - p);
                if r & mask == c & mask {
                    let (rr, cc) = (r & !mask, c & !mask);
                    let partial: Complex64 = patterns
                        .iter()
                        .map(|&a| old[((rr | a) << n) | (cc | a)])
                        .sum();
                    v += partial * weight;
                }
                self.elements[idx] = v;
            }
        }
    }

    /// Tr(ρ Z_q).
    pub fn pauli_z_expectation(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let dim = self.dim();
        Ok((0..dim)
            .map(|i| z_sign(i, qubit) * self.elements[i * dim + i].re)
            .sum())
    }

    pub fn z_expectations(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut out = vec![0.0; self.n_qubits];
        for i in 0..dim {
            let p = self.elements[i * dim + i].re;
            for (q, e) in out.iter_mut().enumerate() {
                *e += z_sign(i, q) * p;
            }
        }
        out
    }
}

pub fn to_density(state: &QuantumState) -> DensityMatrix {
    DensityMatrix::from_state(state)
}

pub fn apply_gate_density(
    rho: &DensityMatrix,
    gate: &Gate,
    angle: Option<f64>,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_gate(gate, angle)?;
    Ok(out)
}

pub fn apply_depolarizing(rho: &DensityMatrix, qubits: &[usize], p: f64) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_depolarizing(qubits, p)?;
    Ok(out)
}

/// Estimates a ±1 observable with exact mean `exact` from `shots` outcomes.
/// Returns (n₊ − n₋) / shots.
pub fn sample_expectation<R: Rng + ?Sized>(exact: f64, shots: u32, rng: &mut R) -> f64 {
    let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let n_plus = Binomial::new(shots as u64, p_plus)
        .expect("probability clamped to [0, 1]")
        .sample(rng);
    (2.0 * n_plus as f64 - shots as f64) / shots as f64
}

/// Z expectation of `qubit`, exact when `shots` is `None`, otherwise estimated
/// from `shots` samples drawn with `rng_seed`.
pub fn pauli_z_expectation_density(
    rho: &DensityMatrix,
    qubit: usize,
    shots: Option<u32>,
    rng_seed: Option<u64>,
) -> Result<f64> {
    let exact = rho.pauli_z_expectation(qubit)?;
    match shots {
        None => Ok(exact),
        Some(0) => Err(Error::Noise("shots must be positive".into())),
        Some(shots) => {
            let seed = rng_seed.ok_or(Error::MissingSeed)?;
            let mut rng = crate::rng::seeded(seed, 0);
            Ok(sample_expectation(exact, shots, &mut rng))
        }
    }
}
