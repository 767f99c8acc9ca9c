//! Variational actor and critic circuits.
//!
//! Both models share the same 4-qubit, 50-gate variational ansatz and differ
//! in their encoders and heads:
//!
//! * the actor encodes its 4 observation features with one `RotY` per qubit
//!   and turns the four `⟨Z_q⟩` into a softmax policy;
//! * the critic encodes the 16 global-state features with a
//!   `RotX → RotY → RotZ → RotX` chain per qubit (feature `i·4 + q` drives
//!   cycle position `i` on qubit `q`) and reports
//!   `value_scale · Σ_q ⟨Z_q⟩`.

use std::f64::consts::PI;

use rand::Rng;

use crate::model::{
    check_len, log_softmax_weights, softmax, Actor, Critic, ModelError, ModelText, Result,
};
use crate::qsim::{Angle, CircuitSpec, Gate, GateKind, Observable};

pub const N_QUBITS: usize = 4;
pub const N_PARAM_GATES: usize = 50;
pub const DEFAULT_LOGIT_SCALE: f64 = 1.0;
pub const DEFAULT_VALUE_SCALE: f64 = 10.0;

/// Feature-to-rotation encoding stage.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderLayout {
    pub n_qubits: usize,
    pub rotation_cycle: Vec<GateKind>,
    /// `angle = angle_scale · feature + angle_offset`.
    pub angle_scale: f64,
    pub angle_offset: f64,
}

impl EncoderLayout {
    /// One `RotY` per qubit; angle `π · feature / q_max`.
    pub fn observation(q_max: f64) -> Self {
        EncoderLayout {
            n_qubits: N_QUBITS,
            rotation_cycle: vec![GateKind::RotY],
            angle_scale: PI / q_max,
            angle_offset: 0.0,
        }
    }

    /// Four-rotation chain per qubit for the 16-feature global state.
    pub fn state(q_max: f64) -> Self {
        EncoderLayout {
            n_qubits: N_QUBITS,
            rotation_cycle: vec![
                GateKind::RotX,
                GateKind::RotY,
                GateKind::RotZ,
                GateKind::RotX,
            ],
            angle_scale: PI / q_max,
            angle_offset: 0.0,
        }
    }

    pub fn features_per_qubit(&self) -> usize {
        self.rotation_cycle.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_qubits * self.features_per_qubit()
    }

    /// Encoder gates in application order. Feature `i · n_qubits + q` is
    /// input slot `i · n_qubits + q` and drives cycle position `i` on qubit `q`.
    pub fn gates(&self) -> Vec<Gate> {
        let mut gates = Vec::with_capacity(self.n_features());
        for (position, kind) in self.rotation_cycle.iter().enumerate() {
            for q in 0..self.n_qubits {
                gates.push(Gate::rotation(
                    *kind,
                    q,
                    Angle::Input(position * self.n_qubits + q),
                ));
            }
        }
        gates
    }

    pub fn angles(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .map(|x| self.angle_scale * x + self.angle_offset)
            .collect()
    }
}

/// Repeated blocks of per-qubit `RotX, RotY, RotZ` followed by a CNOT ring
/// `q → (q+1) mod n`, then a tail of single rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzLayout {
    pub n_qubits: usize,
    pub n_blocks: usize,
    pub tail: Vec<(GateKind, usize)>,
}

impl AnsatzLayout {
    /// 4 blocks × 12 rotations + `RotY` on qubits 0 and 1: 50 parameterised gates.
    pub fn standard() -> Self {
        AnsatzLayout {
            n_qubits: N_QUBITS,
            n_blocks: 4,
            tail: vec![(GateKind::RotY, 0), (GateKind::RotY, 1)],
        }
    }

    pub fn n_param_gates(&self) -> usize {
        3 * self.n_qubits * self.n_blocks + self.tail.len()
    }

    pub fn gates(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        let mut slot = 0;
        let mut next = || {
            slot += 1;
            Angle::Param(slot - 1)
        };
        for _ in 0..self.n_blocks {
            for q in 0..self.n_qubits {
                gates.push(Gate::rx(q, next()));
                gates.push(Gate::ry(q, next()));
                gates.push(Gate::rz(q, next()));
            }
            if self.n_qubits > 1 {
                for q in 0..self.n_qubits {
                    gates.push(Gate::cnot(q, (q + 1) % self.n_qubits));
                }
            }
        }
        for (kind, q) in &self.tail {
            gates.push(Gate::rotation(*kind, *q, next()));
        }
        gates
    }
}

fn build_circuit(encoder: &EncoderLayout, ansatz: &AnsatzLayout) -> Result<CircuitSpec> {
    let mut gates = encoder.gates();
    gates.extend(ansatz.gates());
    let spec = CircuitSpec::new(encoder.n_qubits, gates, Observable::all_z(encoder.n_qubits))?;
    if spec.n_param_gates() != N_PARAM_GATES {
        return Err(ModelError::ParamCount {
            layout: "vqc ansatz".into(),
            expected: N_PARAM_GATES,
            got: spec.n_param_gates(),
        });
    }
    Ok(spec)
}

/// Draws `n` angles uniformly from `[−π, π]`.
pub fn random_angles<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-PI..=PI)).collect()
}

#[derive(Debug, Clone)]
pub struct VqcActor {
    circuit: CircuitSpec,
    encoder: EncoderLayout,
    params: Vec<f64>,
    logit_scale: f64,
    q_max: f64,
}

impl VqcActor {
    pub const LAYOUT: &'static str = "vqc-actor";

    pub fn new(params: Vec<f64>, logit_scale: f64, q_max: f64) -> Result<Self> {
        let encoder = EncoderLayout::observation(q_max);
        let circuit = build_circuit(&encoder, &AnsatzLayout::standard())?;
        check_len("actor parameters", circuit.n_params(), params.len())?;
        Ok(VqcActor {
            circuit,
            encoder,
            params,
            logit_scale,
            q_max,
        })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, logit_scale: f64, q_max: f64) -> Result<Self> {
        Self::new(random_angles(rng, N_PARAM_GATES), logit_scale, q_max)
    }

    pub fn from_text(text: &ModelText) -> Result<Self> {
        Self::new(
            text.params.clone(),
            text.parse_value("logit_scale")?,
            text.parse_value("q_max")?,
        )
    }

    pub fn circuit(&self) -> &CircuitSpec {
        &self.circuit
    }

    pub fn logit_scale(&self) -> f64 {
        self.logit_scale
    }

    /// Raw `⟨Z_q⟩` for each of the four measured qubits.
    pub fn expectations(&self, obs: &[f64]) -> Result<Vec<f64>> {
        check_len("observation", self.encoder.n_features(), obs.len())?;
        Ok(self.circuit.run(&self.encoder.angles(obs), &self.params)?)
    }
}

impl Actor for VqcActor {
    fn layout(&self) -> &'static str {
        Self::LAYOUT
    }

    fn obs_dim(&self) -> usize {
        self.encoder.n_features()
    }

    fn n_actions(&self) -> usize {
        self.circuit.n_outputs()
    }

    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn policy(&self, obs: &[f64]) -> Result<Vec<f64>> {
        let logits: Vec<f64> = self
            .expectations(obs)?
            .into_iter()
            .map(|z| self.logit_scale * z)
            .collect();
        Ok(softmax(&logits))
    }

    fn log_prob_and_grad(
        &self,
        obs: &[f64],
        action: usize,
        weight: f64,
    ) -> Result<(f64, Vec<f64>)> {
        let probs = self.policy(obs)?;
        if action >= probs.len() {
            return Err(ModelError::ActionOutOfRange {
                action,
                n_actions: probs.len(),
            });
        }
        // d log π_a / dθ = scale · Σ_j (δ_aj − π_j) ∂⟨Z_j⟩/∂θ
        let weights = log_softmax_weights(&probs, action, weight * self.logit_scale);
        let grad = self
            .circuit
            .gradient(&self.encoder.angles(obs), &self.params, &weights)?;
        Ok((probs[action].ln(), grad))
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n_qubits", self.circuit.n_qubits().to_string()),
            ("logit_scale", format!("{:?}", self.logit_scale)),
            ("q_max", format!("{:?}", self.q_max)),
        ]
    }

    fn box_clone(&self) -> Box<dyn Actor> {
        Box::new(self.clone())
    }
}

#[derive(Debug, Clone)]
pub struct VqcCritic {
    circuit: CircuitSpec,
    encoder: EncoderLayout,
    params: Vec<f64>,
    value_scale: f64,
    q_max: f64,
}

impl VqcCritic {
    pub const LAYOUT: &'static str = "vqc-critic";

    pub fn new(params: Vec<f64>, value_scale: f64, q_max: f64) -> Result<Self> {
        let encoder = EncoderLayout::state(q_max);
        let circuit = build_circuit(&encoder, &AnsatzLayout::standard())?;
        check_len("critic parameters", circuit.n_params(), params.len())?;
        Ok(VqcCritic {
            circuit,
            encoder,
            params,
            value_scale,
            q_max,
        })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, value_scale: f64, q_max: f64) -> Result<Self> {
        Self::new(random_angles(rng, N_PARAM_GATES), value_scale, q_max)
    }

    pub fn from_text(text: &ModelText) -> Result<Self> {
        Self::new(
            text.params.clone(),
            text.parse_value("value_scale")?,
            text.parse_value("q_max")?,
        )
    }

    pub fn circuit(&self) -> &CircuitSpec {
        &self.circuit
    }

    pub fn value_scale(&self) -> f64 {
        self.value_scale
    }
}

impl Critic for VqcCritic {
    fn layout(&self) -> &'static str {
        Self::LAYOUT
    }

    fn state_dim(&self) -> usize {
        self.encoder.n_features()
    }

    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn value(&self, state: &[f64]) -> Result<f64> {
        check_len("state", self.encoder.n_features(), state.len())?;
        let z = self.circuit.run(&self.encoder.angles(state), &self.params)?;
        Ok(self.value_scale * z.iter().sum::<f64>())
    }

    fn value_grad(&self, state: &[f64], weight: f64) -> Result<Vec<f64>> {
        check_len("state", self.encoder.n_features(), state.len())?;
        let weights = vec![weight * self.value_scale; self.circuit.n_outputs()];
        Ok(self
            .circuit
            .gradient(&self.encoder.angles(state), &self.params, &weights)?)
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n_qubits", self.circuit.n_qubits().to_string()),
            ("value_scale", format!("{:?}", self.value_scale)),
            ("q_max", format!("{:?}", self.q_max)),
        ]
    }

    fn box_clone(&self) -> Box<dyn Critic> {
        Box::new(self.clone())
    }
}
