//! Dense-matrix reference simulator for checking the fast kernels.
//!
//! Every gate is expanded to a full 2^n × 2^n operator by explicit Kronecker
//! products (qubit 0 is the least significant bit, so it is the rightmost
//! factor). Nothing here calls into the simulator being tested.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qmlp_core::{Gate, GateKind};

pub type Mat = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn eye(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn matvec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// 2×2 matrix of a single-qubit gate, written out independently.
pub fn single(kind: GateKind, theta: f64) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match kind {
        GateKind::H => vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        GateKind::X | GateKind::Cnot => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Rz | GateKind::Crz => vec![
            vec![c(ch, -sh), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(ch, sh)],
        ],
        GateKind::Ry => vec![vec![c(ch, 0.0), c(-sh, 0.0)], vec![c(sh, 0.0), c(ch, 0.0)]],
    }
}

/// ⊗ over qubits n−1 … 0 of `ops[q]` (identity where `None`).
fn tensor(n: usize, ops: &[Option<Mat>]) -> Mat {
    let mut out = vec![vec![c(1.0, 0.0)]];
    for q in (0..n).rev() {
        let m = ops[q].clone().unwrap_or_else(|| eye(2));
        out = kron(&out, &m);
    }
    out
}

/// Full operator of `gate` on `n` qubits.
pub fn operator(n: usize, gate: &Gate, theta: f64) -> Mat {
    let u = single(gate.kind, theta);
    if gate.kind.arity() == 1 {
        let mut ops = vec![None; n];
        ops[gate.targets[0]] = Some(u);
        return tensor(n, &ops);
    }
    let (ctrl, tgt) = (gate.targets[0], gate.targets[1]);
    let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let mut a = vec![None; n];
    a[ctrl] = Some(p0);
    let mut b = vec![None; n];
    b[ctrl] = Some(p1);
    b[tgt] = Some(u);
    let (a, b) = (tensor(n, &a), tensor(n, &b));
    a.iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn zero_vector(n: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

/// Final state after `gates` with the given angles (ignored for fixed gates).
pub fn run(n: usize, gates: &[(Gate, f64)]) -> Vec<C> {
    let mut v = zero_vector(n);
    for (g, theta) in gates {
        v = matvec(&operator(n, g, *theta), &v);
    }
    v
}

pub fn z_matrix(n: usize, q: usize) -> Mat {
    let mut ops = vec![None; n];
    ops[q] = Some(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]);
    tensor(n, &ops)
}

pub fn expectation(n: usize, v: &[C], q: usize) -> f64 {
    let zv = matvec(&z_matrix(n, q), v);
    v.iter().zip(&zv).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn outer(v: &[C]) -> Mat {
    v.iter().map(|a| v.iter().map(|b| a * b.conj()).collect()).collect()
}

pub fn conjugate(u: &Mat, rho: &Mat) -> Mat {
    matmul(&matmul(u, rho), &dagger(u))
}

fn paulis() -> [Mat; 4] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    [
        eye(2),
        vec![vec![z, o], vec![o, z]],
        vec![vec![z, c(0.0, -1.0)], vec![c(0.0, 1.0), z]],
        vec![vec![o, z], vec![z, -o]],
    ]
}

/// Depolarizing channel as a Pauli twirl:
/// (1−p)ρ + p · 4^{-k} Σ_P P ρ P over all Paulis on `qubits`.
pub fn depolarize(n: usize, rho: &Mat, qubits: &[usize], p: f64) -> Mat {
    let k = qubits.len();
    let dim = rho.len();
    let mut twirled = vec![vec![c(0.0, 0.0); dim]; dim];
    let ps = paulis();
    for code in 0..4usize.pow(k as u32) {
        let mut ops = vec![None; n];
        for (i, &q) in qubits.iter().enumerate() {
            ops[q] = Some(ps[(code >> (2 * i)) & 3].clone());
        }
        let pm = tensor(n, &ops);
        let term = conjugate(&pm, rho);
        for i in 0..dim {
            for j in 0..dim {
                twirled[i][j] += term[i][j];
            }
        }
    }
    let norm = 1.0 / 4f64.powi(k as i32);
    (0..dim)
        .map(|i| (0..dim).map(|j| rho[i][j] * (1.0 - p) + twirled[i][j] * (p * norm)).collect())
        .collect()
}

pub fn density_expectation(n: usize, rho: &Mat, q: usize) -> f64 {
    let zr = matmul(&z_matrix(n, q), rho);
    (0..rho.len()).map(|i| zr[i][i].re).sum()
}
