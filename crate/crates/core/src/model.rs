//! Actor and critic interfaces shared by the quantum and classical models,
//! plus the plain-text parameter format used for checkpoints.
//!
//! A serialized model is a block of `key value` header lines followed by a
//! `params` line holding the flat parameter vector:
//!
//! ```text
//! layout vqc-actor
//! n_qubits 4
//! logit_scale 1
//! n_params 50
//! params 0.12 -1.5 ...
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a model reads
//! back bit-identical.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qsim::QsimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{what}: expected length {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("action index {action} out of range for {n_actions} actions")]
    ActionOutOfRange { action: usize, n_actions: usize },
    #[error("{layout} requires exactly {expected} parameters, layout has {got}")]
    ParamCount {
        layout: String,
        expected: usize,
        got: usize,
    },
    #[error("model text: {0}")]
    Format(String),
    #[error("unknown model layout `{0}`")]
    UnknownLayout(String),
    #[error(transparent)]
    Circuit(#[from] QsimError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// Decentralised policy: local observation in, action distribution out.
pub trait Actor: Send + Sync + fmt::Debug {
    fn layout(&self) -> &'static str;
    fn obs_dim(&self) -> usize;
    fn n_actions(&self) -> usize;
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];

    /// Action probabilities for `obs`; strictly positive and summing to one.
    fn policy(&self, obs: &[f64]) -> Result<Vec<f64>>;

    /// `log π(action | obs)` together with `weight · ∇_θ log π(action | obs)`.
    fn log_prob_and_grad(&self, obs: &[f64], action: usize, weight: f64)
        -> Result<(f64, Vec<f64>)>;

    /// `weight · ∇_θ log π(action | obs)`.
    fn log_prob_grad(&self, obs: &[f64], action: usize, weight: f64) -> Result<Vec<f64>> {
        Ok(self.log_prob_and_grad(obs, action, weight)?.1)
    }

    /// Layout-specific header lines, excluding `layout`, `n_params` and `params`.
    fn header(&self) -> Vec<(&'static str, String)>;

    fn box_clone(&self) -> Box<dyn Actor>;

    fn n_params(&self) -> usize {
        self.params().len()
    }

    fn greedy_action(&self, obs: &[f64]) -> Result<usize> {
        Ok(greedy_action(&self.policy(obs)?))
    }
}

/// Centralised state-value function.
pub trait Critic: Send + Sync + fmt::Debug {
    fn layout(&self) -> &'static str;
    fn state_dim(&self) -> usize;
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];

    fn value(&self, state: &[f64]) -> Result<f64>;

    /// `weight · ∇_ψ V(state)`.
    fn value_grad(&self, state: &[f64], weight: f64) -> Result<Vec<f64>>;

    fn header(&self) -> Vec<(&'static str, String)>;

    fn box_clone(&self) -> Box<dyn Critic>;

    fn n_params(&self) -> usize {
        self.params().len()
    }
}

impl Clone for Box<dyn Actor> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl Clone for Box<dyn Critic> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the largest probability; ties go to the lowest index.
pub fn greedy_action(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, p) in probs.iter().enumerate().skip(1) {
        if *p > probs[best] {
            best = i;
        }
    }
    best
}

/// Weights `∂ log softmax(z)_a / ∂z_j = δ_aj − π_j`, scaled by `weight`.
pub(crate) fn log_softmax_weights(probs: &[f64], action: usize, weight: f64) -> Vec<f64> {
    probs
        .iter()
        .enumerate()
        .map(|(j, p)| weight * (f64::from(u8::from(j == action)) - p))
        .collect()
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(ModelError::Shape {
            what,
            expected,
            got,
        })
    }
}

/// Parsed header and parameter vector of a serialized model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelText {
    pub layout: String,
    pub header: Vec<(String, String)>,
    pub params: Vec<f64>,
}

impl ModelText {
    pub fn from_actor(actor: &dyn Actor) -> Self {
        Self::build(actor.layout(), actor.header(), actor.params())
    }

    pub fn from_critic(critic: &dyn Critic) -> Self {
        Self::build(critic.layout(), critic.header(), critic.params())
    }

    fn build(layout: &str, header: Vec<(&'static str, String)>, params: &[f64]) -> Self {
        ModelText {
            layout: layout.to_string(),
            header: header
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            params: params.to_vec(),
        }
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| ModelError::Format(format!("missing header key `{key}`")))
    }

    pub fn parse_value<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.get(key)?;
        raw.parse()
            .map_err(|_| ModelError::Format(format!("bad value `{raw}` for `{key}`")))
    }

    /// Reads one model block from `lines`, stopping after its `params` line.
    pub fn read<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = &'a str>,
    {
        let mut layout = None;
        let mut header = Vec::new();
        let mut n_params: Option<usize> = None;
        for line in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "layout" => layout = Some(rest.trim().to_string()),
                "n_params" => {
                    n_params = Some(rest.trim().parse().map_err(|_| {
                        ModelError::Format(format!("bad n_params `{}`", rest.trim()))
                    })?)
                }
                "params" => {
                    let params = rest
                        .split_whitespace()
                        .map(|tok| {
                            tok.parse::<f64>()
                                .map_err(|_| ModelError::Format(format!("bad parameter `{tok}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let layout =
                        layout.ok_or_else(|| ModelError::Format("missing `layout` line".into()))?;
                    let expected = n_params
                        .ok_or_else(|| ModelError::Format("missing `n_params` line".into()))?;
                    check_len("params", expected, params.len())?;
                    return Ok(ModelText {
                        layout,
                        header,
                        params,
                    });
                }
                _ => header.push((key.to_string(), rest.trim().to_string())),
            }
        }
        Err(ModelError::Format("unexpected end of input before `params`".into()))
    }
}

impl fmt::Display for ModelText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "layout {}", self.layout)?;
        for (k, v) in &self.header {
            writeln!(f, "{k} {v}")?;
        }
        writeln!(f, "n_params {}", self.params.len())?;
        write!(f, "params")?;
        for p in &self.params {
            write!(f, " {p:?}")?;
        }
        writeln!(f)
    }
}

impl FromStr for ModelText {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Self::read(&mut s.lines())
    }
}

/// Uniform policy over `n_actions`; has no parameters. Drives the random-walk
/// reference.
#[derive(Debug, Clone)]
pub struct UniformActor {
    obs_dim: usize,
    n_actions: usize,
}

impl UniformActor {
    pub fn new(obs_dim: usize, n_actions: usize) -> Self {
        UniformActor { obs_dim, n_actions }
    }
}

impl Actor for UniformActor {
    fn layout(&self) -> &'static str {
        "uniform-actor"
    }

    fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    fn n_actions(&self) -> usize {
        self.n_actions
    }

    fn params(&self) -> &[f64] {
        &[]
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut []
    }

    fn policy(&self, obs: &[f64]) -> Result<Vec<f64>> {
        check_len("observation", self.obs_dim, obs.len())?;
        Ok(vec![1.0 / self.n_actions as f64; self.n_actions])
    }

    fn log_prob_and_grad(
        &self,
        obs: &[f64],
        action: usize,
        _weight: f64,
    ) -> Result<(f64, Vec<f64>)> {
        check_len("observation", self.obs_dim, obs.len())?;
        if action >= self.n_actions {
            return Err(ModelError::ActionOutOfRange {
                action,
                n_actions: self.n_actions,
            });
        }
        Ok((-(self.n_actions as f64).ln(), Vec::new()))
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        vec![
            ("obs_dim", self.obs_dim.to_string()),
            ("n_actions", self.n_actions.to_string()),
        ]
    }

    fn box_clone(&self) -> Box<dyn Actor> {
        Box::new(self.clone())
    }
}

/// Critic that always answers zero; paired with [`UniformActor`].
#[derive(Debug, Clone)]
pub struct ZeroCritic {
    state_dim: usize,
}

impl ZeroCritic {
    pub fn new(state_dim: usize) -> Self {
        ZeroCritic { state_dim }
    }
}

impl Critic for ZeroCritic {
    fn layout(&self) -> &'static str {
        "zero-critic"
    }

    fn state_dim(&self) -> usize {
        self.state_dim
    }

    fn params(&self) -> &[f64] {
        &[]
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut []
    }

    fn value(&self, state: &[f64]) -> Result<f64> {
        check_len("state", self.state_dim, state.len())?;
        Ok(0.0)
    }

    fn value_grad(&self, state: &[f64], _weight: f64) -> Result<Vec<f64>> {
        check_len("state", self.state_dim, state.len())?;
        Ok(Vec::new())
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        vec![("state_dim", self.state_dim.to_string())]
    }

    fn box_clone(&self) -> Box<dyn Critic> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_of_constant_is_uniform() {
        assert_eq!(softmax(&[0.3; 4]), vec![0.25; 4]);
    }

    #[test]
    fn softmax_hand_value() {
        let p = softmax(&[1.0, -1.0, -1.0, -1.0]);
        let e2 = 2f64.exp();
        let expected_top = e2 / (e2 + 3.0);
        assert!((p[0] - expected_top).abs() < 1e-15);
        assert!((p[0] - 0.711).abs() < 5e-4);
        assert!((p[1] - 0.0963).abs() < 5e-5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_breaks_ties_low() {
        assert_eq!(greedy_action(&[0.1, 0.6, 0.2, 0.1]), 1);
        assert_eq!(greedy_action(&[0.4, 0.1, 0.4, 0.1]), 0);
    }

    #[test]
    fn model_text_round_trip() {
        let text = ModelText {
            layout: "vqc-actor".into(),
            header: vec![("logit_scale".into(), "1.5".into())],
            params: vec![0.1, -2.0, std::f64::consts::PI, 1e-300],
        };
        let back: ModelText = text.to_string().parse().unwrap();
        assert_eq!(back, text);
        assert_eq!(back.parse_value::<f64>("logit_scale").unwrap(), 1.5);
    }

    #[test]
    fn model_text_rejects_count_mismatch() {
        let err = "layout x\nn_params 3\nparams 1 2\n".parse::<ModelText>();
        assert!(matches!(err, Err(ModelError::Shape { .. })));
    }
}
