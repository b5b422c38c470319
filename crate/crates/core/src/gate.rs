//! Gate descriptions and their matrices.
//!
//! Rotations use the symmetric phase convention
//! `RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, and `CRZ(θ)` is
//! `diag(1, 1, e^{-iθ/2}, e^{iθ/2})` in control ⊗ target ordering.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Rz,
    Ry,
    Crz,
    Cnot,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Rz | GateKind::Ry => 1,
            GateKind::Crz | GateKind::Cnot => 2,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::Ry | GateKind::Crz)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Rz => "RZ",
            GateKind::Ry => "RY",
            GateKind::Crz => "CRZ",
            GateKind::Cnot => "CNOT",
        };
        f.write_str(s)
    }
}

/// Where a rotation gate takes its angle from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    /// Index into the trainable parameter vector.
    Param(usize),
    /// Index into the input (encoded feature) vector.
    Input(usize),
    Fixed(f64),
}

impl Angle {
    /// Resolves the angle against concrete input and parameter vectors.
    pub fn resolve(self, inputs: &[f64], params: &[f64]) -> Result<f64> {
        match self {
            Angle::Param(i) => params
                .get(i)
                .copied()
                .ok_or_else(|| Error::Circuit(format!("parameter slot {i} not bound"))),
            Angle::Input(i) => inputs
                .get(i)
                .copied()
                .ok_or_else(|| Error::Circuit(format!("input slot {i} not bound"))),
            Angle::Fixed(v) => Ok(v),
        }
    }
}

/// A gate acting on one or two qubits. For controlled gates `targets` is
/// `[control, target]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, angle: Option<Angle>) -> Result<Self> {
        let gate = Gate {
            kind,
            targets,
            angle,
        };
        gate.check_shape()?;
        Ok(gate)
    }

    pub fn h(q: usize) -> Self {
        Gate {
            kind: GateKind::H,
            targets: vec![q],
            angle: None,
        }
    }

    pub fn x(q: usize) -> Self {
        Gate {
            kind: GateKind::X,
            targets: vec![q],
            angle: None,
        }
    }

    pub fn rz(q: usize, angle: Angle) -> Self {
        Gate {
            kind: GateKind::Rz,
            targets: vec![q],
            angle: Some(angle),
        }
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Gate {
            kind: GateKind::Ry,
            targets: vec![q],
            angle: Some(angle),
        }
    }

    pub fn crz(control: usize, target: usize, angle: Angle) -> Result<Self> {
        Gate::new(GateKind::Crz, vec![control, target], Some(angle))
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Gate::new(GateKind::Cnot, vec![control, target], None)
    }

    /// Checks arity, angle presence and distinct control/target.
    pub fn check_shape(&self) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} qubit(s), got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if self.kind.arity() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::InvalidGate(format!(
                "{} control and target must differ (both {})",
                self.kind, self.targets[0]
            )));
        }
        match (self.kind.is_rotation(), self.angle.is_some()) {
            (true, false) => Err(Error::InvalidGate(format!("{} requires an angle", self.kind))),
            (false, true) => Err(Error::InvalidGate(format!("{} takes no angle", self.kind))),
            _ => Ok(()),
        }
    }

    /// Full validation against a register size.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        self.check_shape()?;
        for &q in &self.targets {
            if q >= n_qubits {
                return Err(Error::QubitIndex { index: q, n_qubits });
            }
        }
        Ok(())
    }

    /// The single-qubit matrix this gate applies to its (last) target.
    /// Controlled gates return the matrix applied when the control is |1⟩.
    pub fn target_matrix(&self, angle: Option<f64>) -> Result<Matrix2> {
        let need = || angle.ok_or_else(|| Error::MissingAngle(self.kind.to_string()));
        Ok(match self.kind {
            GateKind::H => hadamard(),
            GateKind::X | GateKind::Cnot => pauli_x(),
            GateKind::Rz | GateKind::Crz => rz(need()?),
            GateKind::Ry => ry(need()?),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.targets)
    }
}

pub fn hadamard() -> Matrix2 {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub fn pauli_x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn rz(theta: f64) -> Matrix2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn ry(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub(crate) fn conj(m: &Matrix2) -> Matrix2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}
