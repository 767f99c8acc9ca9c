//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qmarl::qsim::{Angle, Gate, GateKind};
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single_qubit_matrix(kind: GateKind, theta: f64) -> CMatrix {
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let entries = match kind {
        GateKind::RotX => [c(cos, 0.0), c(0.0, -sin), c(0.0, -sin), c(cos, 0.0)],
        GateKind::RotY => [c(cos, 0.0), c(-sin, 0.0), c(sin, 0.0), c(cos, 0.0)],
        GateKind::RotZ => [c(cos, -sin), c(0.0, 0.0), c(0.0, 0.0), c(cos, sin)],
        GateKind::Cnot => panic!("CNOT is not a single-qubit gate"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// `⊗` over qubits `n−1 … 0`, so qubit `q` is bit `q` of the basis index.
pub fn embed(n_qubits: usize, ops: &[(usize, CMatrix)]) -> CMatrix {
    let identity = CMatrix::identity(2, 2);
    let mut full = CMatrix::identity(1, 1);
    for q in (0..n_qubits).rev() {
        let factor = ops
            .iter()
            .find(|(t, _)| *t == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| identity.clone());
        full = full.kronecker(&factor);
    }
    full
}

pub fn cnot_matrix(n_qubits: usize, control: usize, target: usize) -> CMatrix {
    let p0 = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let p1 = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    embed(n_qubits, &[(control, p0)]) + embed(n_qubits, &[(control, p1), (target, x)])
}

pub fn pauli_z(n_qubits: usize, q: usize) -> CMatrix {
    let z = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    embed(n_qubits, &[(q, z)])
}

pub fn gate_unitary(n_qubits: usize, gate: &Gate, inputs: &[f64], params: &[f64]) -> CMatrix {
    match gate.kind {
        GateKind::Cnot => cnot_matrix(n_qubits, gate.control.unwrap(), gate.target),
        kind => {
            let theta = match gate.angle.unwrap() {
                Angle::Param(k) => params[k],
                Angle::Input(k) => inputs[k],
                Angle::Fixed(a) => a,
            };
            embed(n_qubits, &[(gate.target, single_qubit_matrix(kind, theta))])
        }
    }
}

/// Dense circuit unitary, later gates multiplied on the left.
pub fn circuit_unitary(n_qubits: usize, gates: &[Gate], inputs: &[f64], params: &[f64]) -> CMatrix {
    let dim = 1 << n_qubits;
    gates.iter().fold(CMatrix::identity(dim, dim), |acc, g| {
        gate_unitary(n_qubits, g, inputs, params) * acc
    })
}

pub fn dense_state(n_qubits: usize, gates: &[Gate], inputs: &[f64], params: &[f64]) -> DVector<Complex64> {
    let dim = 1 << n_qubits;
    let mut zero = DVector::from_element(dim, c(0.0, 0.0));
    zero[0] = c(1.0, 0.0);
    circuit_unitary(n_qubits, gates, inputs, params) * zero
}

/// `⟨ψ|Z_q|ψ⟩` for every qubit.
pub fn dense_expectations(n_qubits: usize, gates: &[Gate], inputs: &[f64], params: &[f64]) -> Vec<f64> {
    let psi = dense_state(n_qubits, gates, inputs, params);
    (0..n_qubits)
        .map(|q| (psi.adjoint() * pauli_z(n_qubits, q) * &psi)[(0, 0)].re)
        .collect()
}

/// Random gate list over `n_qubits`; rotations draw their angle source at
/// random from `n_inputs` input slots, `n_params` parameter slots and fixed angles.
pub fn random_gates<R: Rng>(
    rng: &mut R,
    n_qubits: usize,
    n_gates: usize,
    n_inputs: usize,
    n_params: usize,
) -> Vec<Gate> {
    (0..n_gates)
        .map(|_| {
            let target = rng.gen_range(0..n_qubits);
            match rng.gen_range(0..4) {
                3 if n_qubits > 1 => {
                    let control = (target + rng.gen_range(1..n_qubits)) % n_qubits;
                    Gate::cnot(control, target)
                }
                k => {
                    let kind = [GateKind::RotX, GateKind::RotY, GateKind::RotZ][k % 3];
                    let angle = match rng.gen_range(0..3) {
                        0 if n_inputs > 0 => Angle::Input(rng.gen_range(0..n_inputs)),
                        1 => Angle::Fixed(rng.gen_range(-4.0..4.0)),
                        _ if n_params > 0 => Angle::Param(rng.gen_range(0..n_params)),
                        _ => Angle::Fixed(rng.gen_range(-4.0..4.0)),
                    };
                    Gate::rotation(kind, target, angle)
                }
            }
        })
        .collect()
}

/// Central finite-difference gradient of `f` at `x`.
pub fn central_diff<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + h;
            let plus = f(&probe);
            probe[k] = x[k] - h;
            let minus = f(&probe);
            probe[k] = x[k];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `|a − b| / max(|a|, |b|, floor)`, maximised over entries.
pub fn max_rel_diff(a: &[f64], b: &[f64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}
