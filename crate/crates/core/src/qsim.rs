//! Dense statevector simulation for few-qubit variational circuits.
//!
//! Amplitudes are stored as a flat array indexed by the computational basis
//! bitstring, qubit 0 being the least-significant bit. Rotations use the
//! half-angle convention `R_P(δ) = exp(-i δ P / 2)`, so `⟨Z⟩` after
//! `RotY(δ)|0⟩` is `cos δ`.
//!
//! Gradients are computed with the parameter-shift rule
//! `∂f/∂θ = [f(θ + π/2) − f(θ − π/2)] / 2`, which is exact for the
//! Pauli-rotation gate set supported here.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use thiserror::Error;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("register size {0} unsupported (1..={MAX_QUBITS} qubits)")]
    RegisterSize(usize),
    #[error("CNOT control and target are both qubit {0}")]
    ControlIsTarget(usize),
    #[error("rotation on qubit {target} needs an angle at application time")]
    MissingAngle { target: usize },
    #[error("gate on qubit {target} takes no angle at application time")]
    SuperfluousAngle { target: usize },
    #[error("{what}: expected {expected} values, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("amplitude vector has norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("observable must measure between 1 and {n_qubits} qubits, got {measured}")]
    EmptyObservable { measured: usize, n_qubits: usize },
}

pub type Result<T> = std::result::Result<T, QsimError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    RotX,
    RotY,
    RotZ,
    Cnot,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        !matches!(self, GateKind::Cnot)
    }
}

/// Where a rotation gets its angle from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    /// Index into the trainable parameter vector.
    Param(usize),
    /// Index into the encoder (input) angle vector, bound at evaluation time.
    Input(usize),
    /// Angle fixed when the circuit is built.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn rotation(kind: GateKind, target: usize, angle: Angle) -> Self {
        debug_assert!(kind.is_rotation());
        Gate {
            kind,
            target,
            control: None,
            angle: Some(angle),
        }
    }

    pub fn rx(target: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RotX, target, angle)
    }

    pub fn ry(target: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RotY, target, angle)
    }

    pub fn rz(target: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RotZ, target, angle)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cnot,
            target,
            control: Some(control),
            angle: None,
        }
    }

    /// Whether `apply` must be handed an angle for this gate.
    pub fn needs_angle(&self) -> bool {
        matches!(self.angle, Some(Angle::Param(_)) | Some(Angle::Input(_)))
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.target >= n_qubits {
            return Err(QsimError::QubitOutOfRange {
                index: self.target,
                n_qubits,
            });
        }
        if let Some(control) = self.control {
            if control >= n_qubits {
                return Err(QsimError::QubitOutOfRange {
                    index: control,
                    n_qubits,
                });
            }
            if control == self.target {
                return Err(QsimError::ControlIsTarget(control));
            }
        }
        Ok(())
    }
}

/// Single-qubit measurement basis of an [`Observable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    Identity,
}

/// Pauli-Z measurement on a subset of qubits; one expectation per `Z` entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    basis: Vec<Basis>,
}

impl Observable {
    pub fn new(basis: Vec<Basis>) -> Result<Self> {
        let measured = basis.iter().filter(|b| **b == Basis::Z).count();
        if measured == 0 || measured > basis.len() {
            return Err(QsimError::EmptyObservable {
                measured,
                n_qubits: basis.len(),
            });
        }
        Ok(Observable { basis })
    }

    /// Z on every qubit.
    pub fn all_z(n_qubits: usize) -> Self {
        Observable {
            basis: vec![Basis::Z; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.basis.len()
    }

    pub fn measured_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Basis::Z)
            .map(|(q, _)| q)
    }

    pub fn n_outputs(&self) -> usize {
        self.measured_qubits().count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QsimError::RegisterSize(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QsimError::NotPowerOfTwo(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(QsimError::RegisterSize(n_qubits));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized(norm));
        }
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `gate`. `angle` must be given exactly when the gate is a
    /// rotation whose angle is not fixed at build time.
    pub fn apply(&mut self, gate: &Gate, angle: Option<f64>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let theta = match (gate.angle, angle) {
            (Some(Angle::Fixed(a)), None) => Some(a),
            (Some(Angle::Fixed(_)), Some(_)) | (None, Some(_)) => {
                return Err(QsimError::SuperfluousAngle {
                    target: gate.target,
                })
            }
            (Some(_), None) => {
                return Err(QsimError::MissingAngle {
                    target: gate.target,
                })
            }
            (Some(_), Some(a)) => Some(a),
            (None, None) if gate.kind.is_rotation() => {
                return Err(QsimError::MissingAngle {
                    target: gate.target,
                })
            }
            (None, None) => None,
        };
        match (gate.kind, theta) {
            (GateKind::Cnot, _) => self.apply_cnot(gate.control.unwrap_or_default(), gate.target),
            (kind, Some(theta)) => self.apply_rotation(kind, gate.target, theta),
            (_, None) => unreachable!("rotation without angle rejected above"),
        }
        Ok(())
    }

    /// Rotation without validation; callers guarantee `target < n_qubits`.
    fn apply_rotation(&mut self, kind: GateKind, target: usize, theta: f64) {
        let (s, c) = (0.5 * theta).sin_cos();
        match kind {
            GateKind::RotX => {
                let off = Complex64::new(0.0, -s);
                self.for_each_pair(target, |a, b| (a * c + b * off, a * off + b * c));
            }
            GateKind::RotY => {
                self.for_each_pair(target, |a, b| (a * c - b * s, a * s + b * c));
            }
            GateKind::RotZ => {
                let lo = Complex64::new(c, -s);
                let hi = Complex64::new(c, s);
                self.for_each_pair(target, |a, b| (a * lo, b * hi));
            }
            GateKind::Cnot => unreachable!(),
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    #[inline]
    fn for_each_pair<F>(&mut self, target: usize, f: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
    {
        let stride = 1usize << target;
        let dim = self.amps.len();
        let mut block = 0;
        while block < dim {
            for i in block..block + stride {
                let j = i + stride;
                let (a, b) = f(self.amps[i], self.amps[j]);
                self.amps[i] = a;
                self.amps[j] = b;
            }
            block += 2 * stride;
        }
    }

    /// `⟨Z_q⟩` for every `Z` entry of `obs`, in qubit order.
    pub fn expectation(&self, obs: &Observable) -> Result<Vec<f64>> {
        if obs.n_qubits() != self.n_qubits {
            return Err(QsimError::LengthMismatch {
                what: "observable basis",
                expected: self.n_qubits,
                got: obs.n_qubits(),
            });
        }
        Ok(self.expectation_unchecked(obs))
    }

    fn expectation_unchecked(&self, obs: &Observable) -> Vec<f64> {
        let mut out = Vec::with_capacity(obs.n_outputs());
        for q in obs.measured_qubits() {
            let mask = 1usize << q;
            let z: f64 = self
                .amps
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let p = a.norm_sqr();
                    if i & mask == 0 {
                        p
                    } else {
                        -p
                    }
                })
                .sum();
            out.push(z.clamp(-1.0, 1.0));
        }
        out
    }
}

/// Ordered gate list with parameter/input slots and a measurement head.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    n_qubits: usize,
    gates: Vec<Gate>,
    observable: Observable,
    n_inputs: usize,
    n_params: usize,
}

impl CircuitSpec {
    /// Validates every gate against the register and counts the slots.
    /// Slot counts are one past the highest referenced index.
    pub fn new(n_qubits: usize, gates: Vec<Gate>, observable: Observable) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QsimError::RegisterSize(n_qubits));
        }
        if observable.n_qubits() != n_qubits {
            return Err(QsimError::LengthMismatch {
                what: "observable basis",
                expected: n_qubits,
                got: observable.n_qubits(),
            });
        }
        let mut n_inputs = 0;
        let mut n_params = 0;
        for gate in &gates {
            gate.validate(n_qubits)?;
            match (gate.kind.is_rotation(), gate.angle) {
                (true, None) => return Err(QsimError::MissingAngle { target: gate.target }),
                (false, Some(_)) => {
                    return Err(QsimError::SuperfluousAngle { target: gate.target })
                }
                _ => {}
            }
            match gate.angle {
                Some(Angle::Param(k)) => n_params = n_params.max(k + 1),
                Some(Angle::Input(k)) => n_inputs = n_inputs.max(k + 1),
                _ => {}
            }
        }
        Ok(CircuitSpec {
            n_qubits,
            gates,
            observable,
            n_inputs,
            n_params,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_outputs(&self) -> usize {
        self.observable.n_outputs()
    }

    /// Number of gates carrying a trainable parameter.
    pub fn n_param_gates(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.angle, Some(Angle::Param(_))))
            .count()
    }

    fn check_lengths(&self, inputs: &[f64], params: &[f64]) -> Result<()> {
        if inputs.len() != self.n_inputs {
            return Err(QsimError::LengthMismatch {
                what: "encoder angles",
                expected: self.n_inputs,
                got: inputs.len(),
            });
        }
        if params.len() != self.n_params {
            return Err(QsimError::LengthMismatch {
                what: "variational parameters",
                expected: self.n_params,
                got: params.len(),
            });
        }
        Ok(())
    }

    #[inline]
    fn resolve(angle: Angle, inputs: &[f64], params: &[f64]) -> f64 {
        match angle {
            Angle::Param(k) => params[k],
            Angle::Input(k) => inputs[k],
            Angle::Fixed(a) => a,
        }
    }

    #[inline]
    fn apply_unchecked(&self, state: &mut Statevector, gate: &Gate, inputs: &[f64], params: &[f64]) {
        match gate.angle {
            Some(angle) => {
                state.apply_rotation(gate.kind, gate.target, Self::resolve(angle, inputs, params))
            }
            None => state.apply_cnot(gate.control.unwrap_or_default(), gate.target),
        }
    }

    /// Prepares `|0…0⟩` and applies every gate with bound angles.
    pub fn prepare(&self, inputs: &[f64], params: &[f64]) -> Result<Statevector> {
        self.check_lengths(inputs, params)?;
        let mut state = Statevector::zero(self.n_qubits)?;
        for gate in &self.gates {
            self.apply_unchecked(&mut state, gate, inputs, params);
        }
        Ok(state)
    }

    /// Expectation vector of the circuit's observable.
    pub fn run(&self, inputs: &[f64], params: &[f64]) -> Result<Vec<f64>> {
        let state = self.prepare(inputs, params)?;
        Ok(state.expectation_unchecked(&self.observable))
    }

    /// Gradient of `Σ_j weights_j · f_j` with respect to every trainable
    /// parameter, by the parameter-shift rule. A parameter shared by
    /// several gates accumulates one shift pair per occurrence.
    pub fn gradient(&self, inputs: &[f64], params: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
        self.check_lengths(inputs, params)?;
        if weights.len() != self.n_outputs() {
            return Err(QsimError::LengthMismatch {
                what: "output weights",
                expected: self.n_outputs(),
                got: weights.len(),
            });
        }
        let mut grad = vec![0.0; self.n_params];
        if weights.iter().all(|w| *w == 0.0) {
            return Ok(grad);
        }
        let weighted = |state: &Statevector| -> f64 {
            state
                .expectation_unchecked(&self.observable)
                .iter()
                .zip(weights)
                .map(|(f, w)| f * w)
                .sum()
        };

        // The prefix state is advanced gate by gate; each parameterised gate
        // is evaluated at ±π/2 on a copy and the suffix replayed.
        let mut prefix = Statevector::zero(self.n_qubits)?;
        let mut shifted = prefix.clone();
        for (idx, gate) in self.gates.iter().enumerate() {
            if let Some(Angle::Param(k)) = gate.angle {
                let theta = params[k];
                let mut diff = 0.0;
                for (sign, shift) in [(1.0, FRAC_PI_2), (-1.0, -FRAC_PI_2)] {
                    shifted.amps.copy_from_slice(&prefix.amps);
                    shifted.apply_rotation(gate.kind, gate.target, theta + shift);
                    for rest in &self.gates[idx + 1..] {
                        self.apply_unchecked(&mut shifted, rest, inputs, params);
                    }
                    diff += sign * weighted(&shifted);
                }
                grad[k] += 0.5 * diff;
            }
            self.apply_unchecked(&mut prefix, gate, inputs, params);
        }
        Ok(grad)
    }

    /// Full Jacobian `∂f_j/∂θ_k`, indexed `[k][j]`.
    pub fn jacobian(&self, inputs: &[f64], params: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n_out = self.n_outputs();
        let mut jac = vec![vec![0.0; n_out]; self.n_params];
        let mut unit = vec![0.0; n_out];
        for j in 0..n_out {
            unit.iter_mut().for_each(|u| *u = 0.0);
            unit[j] = 1.0;
            for (k, g) in self.gradient(inputs, params, &unit)?.into_iter().enumerate() {
                jac[k][j] = g;
            }
        }
        Ok(jac)
    }
}

/// Free-function form of [`CircuitSpec::run`].
pub fn run_circuit(spec: &CircuitSpec, encoder_angles: &[f64], params: &[f64]) -> Result<Vec<f64>> {
    spec.run(encoder_angles, params)
}

/// Free-function form of [`CircuitSpec::gradient`].
pub fn gradient(
    spec: &CircuitSpec,
    encoder_angles: &[f64],
    params: &[f64],
    output_weights: &[f64],
) -> Result<Vec<f64>> {
    spec.gradient(encoder_angles, params, output_weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rotx_zero_is_identity() {
        let mut state = Statevector::from_amplitudes(vec![
            c(0.6, 0.0),
            c(0.0, 0.8),
        ])
        .unwrap();
        let before = state.clone();
        state.apply(&Gate::rx(0, Angle::Fixed(0.0)), None).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn rotx_pi_flips_zero_to_minus_i_one() {
        let mut state = Statevector::zero(1).unwrap();
        state.apply(&Gate::rx(0, Angle::Param(0)), Some(PI)).unwrap();
        let a = state.amplitudes();
        assert_abs_diff_eq!(a[0].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[0].im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1].im, -1.0, epsilon = 1e-15);
        let z = state.expectation(&Observable::all_z(1)).unwrap();
        assert_abs_diff_eq!(z[0], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn cnot_twice_is_identity() {
        let amps: Vec<_> = (0..4).map(|i| c(0.5, 0.1 * i as f64)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let mut state =
            Statevector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap();
        let before = state.clone();
        let gate = Gate::cnot(1, 0);
        state.apply(&gate, None).unwrap();
        assert_ne!(state, before);
        state.apply(&gate, None).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn cnot_uses_lsb_qubit_order() {
        // |q1 q0⟩ = |01⟩ is index 1; CNOT(0 → 1) maps it to index 3.
        let mut state = Statevector::zero(2).unwrap();
        state.apply(&Gate::rx(0, Angle::Fixed(PI)), None).unwrap();
        state.apply(&Gate::cnot(0, 1), None).unwrap();
        assert_abs_diff_eq!(state.amplitudes()[3].norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn basis_expectations() {
        let zero = Statevector::zero(1).unwrap();
        assert_eq!(zero.expectation(&Observable::all_z(1)).unwrap(), vec![1.0]);
        let one = Statevector::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(one.expectation(&Observable::all_z(1)).unwrap(), vec![-1.0]);
        let mut half = Statevector::zero(1).unwrap();
        half.apply(&Gate::ry(0, Angle::Fixed(PI / 2.0)), None).unwrap();
        assert_abs_diff_eq!(
            half.expectation(&Observable::all_z(1)).unwrap()[0],
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn angle_contract_is_enforced() {
        let mut state = Statevector::zero(2).unwrap();
        assert_eq!(
            state.apply(&Gate::ry(0, Angle::Param(0)), None),
            Err(QsimError::MissingAngle { target: 0 })
        );
        assert_eq!(
            state.apply(&Gate::ry(0, Angle::Fixed(0.1)), Some(0.2)),
            Err(QsimError::SuperfluousAngle { target: 0 })
        );
        assert_eq!(
            state.apply(&Gate::cnot(0, 1), Some(0.2)),
            Err(QsimError::SuperfluousAngle { target: 1 })
        );
        assert_eq!(
            state.apply(&Gate::ry(2, Angle::Fixed(0.1)), None),
            Err(QsimError::QubitOutOfRange { index: 2, n_qubits: 2 })
        );
        assert_eq!(
            state.apply(&Gate::cnot(1, 1), None),
            Err(QsimError::ControlIsTarget(1))
        );
    }

    #[test]
    fn empty_circuit_measures_all_ones() {
        let spec = CircuitSpec::new(4, vec![], Observable::all_z(4)).unwrap();
        assert_eq!(spec.run(&[], &[]).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn run_rejects_length_mismatch() {
        let spec = CircuitSpec::new(
            1,
            vec![Gate::ry(0, Angle::Input(0)), Gate::rx(0, Angle::Param(0))],
            Observable::all_z(1),
        )
        .unwrap();
        assert!(matches!(
            spec.run(&[], &[0.0]),
            Err(QsimError::LengthMismatch { what: "encoder angles", .. })
        ));
        assert!(matches!(
            spec.run(&[0.0], &[]),
            Err(QsimError::LengthMismatch { what: "variational parameters", .. })
        ));
        assert!(matches!(
            spec.gradient(&[0.0], &[0.0], &[1.0, 1.0]),
            Err(QsimError::LengthMismatch { what: "output weights", .. })
        ));
    }

    #[test]
    fn single_qubit_shift_gradient() {
        let spec =
            CircuitSpec::new(1, vec![Gate::ry(0, Angle::Param(0))], Observable::all_z(1)).unwrap();
        let g = spec.gradient(&[], &[PI / 2.0], &[1.0]).unwrap();
        assert_abs_diff_eq!(g[0], -1.0, epsilon = 1e-14);
        let g = spec.gradient(&[], &[0.0], &[1.0]).unwrap();
        assert_abs_diff_eq!(g[0], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn shared_parameter_accumulates() {
        // RY(θ)·RY(θ) = RY(2θ), ⟨Z⟩ = cos 2θ, derivative −2 sin 2θ.
        let spec = CircuitSpec::new(
            1,
            vec![Gate::ry(0, Angle::Param(0)), Gate::ry(0, Angle::Param(0))],
            Observable::all_z(1),
        )
        .unwrap();
        let theta = 0.37;
        let g = spec.gradient(&[], &[theta], &[1.0]).unwrap();
        assert_abs_diff_eq!(g[0], -2.0 * (2.0 * theta).sin(), epsilon = 1e-12);
    }

    #[test]
    fn observable_needs_a_z_entry() {
        assert!(Observable::new(vec![Basis::Identity, Basis::Identity]).is_err());
        let obs = Observable::new(vec![Basis::Identity, Basis::Z]).unwrap();
        assert_eq!(obs.measured_qubits().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn from_amplitudes_validates() {
        assert_eq!(
            Statevector::from_amplitudes(vec![c(1.0, 0.0); 3]),
            Err(QsimError::NotPowerOfTwo(3))
        );
        assert!(matches!(
            Statevector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(QsimError::NotNormalized(_))
        ));
    }
}
