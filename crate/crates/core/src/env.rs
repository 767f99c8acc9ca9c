//! Single-hop edge-to-cloud offloading environment.
//!
//! `N` edge agents hold fluid packet queues fed by uniform random arrivals.
//! Each step every agent picks a destination cloud and a packet amount; the
//! `K` clouds drain a fixed amount per step. The shared reward penalises
//! clouds that run empty (by the underflow magnitude) or overflow (by the
//! excess, weighted by `w_r`).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("expected {expected} agent actions, got {got}")]
    ActionCount { expected: usize, got: usize },
    #[error("agent {agent}: destination {destination} out of range for {n_clouds} clouds")]
    Destination {
        agent: usize,
        destination: usize,
        n_clouds: usize,
    },
    #[error("agent {agent}: amount index {amount_index} out of range for {n_amounts} amounts")]
    Amount {
        agent: usize,
        amount_index: usize,
        n_amounts: usize,
    },
    #[error("action index {index} out of range for {n_actions} actions")]
    ActionIndex { index: usize, n_actions: usize },
    #[error("invalid environment config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, EnvError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvConfig {
    pub n_clouds: usize,
    pub n_edges: usize,
    pub q_max: f64,
    pub packet_amounts: Vec<f64>,
    /// Edge arrivals are `Uniform(0, w_p · q_max)`.
    pub w_p: f64,
    /// Weight on the overflow penalty.
    pub w_r: f64,
    /// Packets each cloud transmits per step.
    pub cloud_departure: f64,
    pub episode_length: usize,
    /// Initial level of every queue, as a fraction of `q_max`.
    pub initial_fill: f64,
    pub seed: u64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            n_clouds: 2,
            n_edges: 4,
            q_max: 1.0,
            packet_amounts: vec![0.1, 0.2],
            w_p: 0.3,
            w_r: 4.0,
            cloud_departure: 0.3,
            episode_length: 100,
            initial_fill: 0.5,
            seed: 0,
        }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(EnvError::Config(msg.to_string()));
        if self.n_clouds == 0 || self.n_edges == 0 {
            return bad("n_clouds and n_edges must be positive");
        }
        if !(self.q_max > 0.0) {
            return bad("q_max must be positive");
        }
        if self.packet_amounts.is_empty() || self.packet_amounts.iter().any(|p| !(*p >= 0.0)) {
            return bad("packet_amounts must be a non-empty list of non-negative amounts");
        }
        if !(self.w_p >= 0.0) || !(self.w_r >= 0.0) || !(self.cloud_departure >= 0.0) {
            return bad("w_p, w_r and cloud_departure must be non-negative");
        }
        if self.episode_length == 0 {
            return bad("episode_length must be positive");
        }
        if !(0.0..=1.0).contains(&self.initial_fill) {
            return bad("initial_fill must lie in [0, 1]");
        }
        Ok(())
    }

    pub fn n_actions(&self) -> usize {
        self.n_clouds * self.packet_amounts.len()
    }

    /// Per-agent observation length: own queue now, own queue previous, every cloud.
    pub fn obs_dim(&self) -> usize {
        2 + self.n_clouds
    }

    pub fn state_dim(&self) -> usize {
        self.n_edges * self.obs_dim()
    }
}

/// One agent's choice: destination cloud (0-based) and packet amount index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub destination: usize,
    pub amount_index: usize,
}

impl Action {
    /// `index = destination · |P| + amount_index`.
    pub fn from_index(index: usize, config: &EnvConfig) -> Result<Self> {
        let n_amounts = config.packet_amounts.len();
        if index >= config.n_actions() {
            return Err(EnvError::ActionIndex {
                index,
                n_actions: config.n_actions(),
            });
        }
        Ok(Action {
            destination: index / n_amounts,
            amount_index: index % n_amounts,
        })
    }

    pub fn index(&self, config: &EnvConfig) -> usize {
        self.destination * config.packet_amounts.len() + self.amount_index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvState {
    pub edge_queues: Vec<f64>,
    pub edge_queues_prev: Vec<f64>,
    pub cloud_queues: Vec<f64>,
    pub step_index: usize,
}

impl EnvState {
    pub fn initial(config: &EnvConfig) -> Self {
        let level = config.initial_fill * config.q_max;
        EnvState {
            edge_queues: vec![level; config.n_edges],
            edge_queues_prev: vec![level; config.n_edges],
            cloud_queues: vec![level; config.n_clouds],
            step_index: 0,
        }
    }

    /// Observation of agent `n`: own queue, own previous queue, every cloud queue.
    pub fn observation(&self, n: usize) -> Vec<f64> {
        let mut obs = Vec::with_capacity(2 + self.cloud_queues.len());
        obs.push(self.edge_queues[n]);
        obs.push(self.edge_queues_prev[n]);
        obs.extend_from_slice(&self.cloud_queues);
        obs
    }

    pub fn observations(&self) -> Vec<Vec<f64>> {
        (0..self.edge_queues.len())
            .map(|n| self.observation(n))
            .collect()
    }

    /// Global state: the agents' observations concatenated in agent order.
    pub fn global_state(&self) -> Vec<f64> {
        self.observations().concat()
    }
}

/// What happened during one transition, besides the new state.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub reward: f64,
    /// Amount each agent actually sent (capped by its queue).
    pub sent: Vec<f64>,
    /// `q − departure + arrivals` per cloud, before clipping.
    pub cloud_pre_clip: Vec<f64>,
    pub empty_clouds: usize,
    pub full_clouds: usize,
}

/// Deterministic transition given the edge arrivals of this step.
pub fn transition(
    config: &EnvConfig,
    state: &EnvState,
    actions: &[Action],
    edge_arrivals: &[f64],
) -> Result<(EnvState, StepOutcome)> {
    check_actions(config, actions)?;
    let q_max = config.q_max;
    let clip = |x: f64| x.clamp(0.0, q_max);

    let sent: Vec<f64> = actions
        .iter()
        .zip(&state.edge_queues)
        .map(|(a, q)| config.packet_amounts[a.amount_index].min(*q))
        .collect();

    let mut cloud_arrivals = vec![0.0; config.n_clouds];
    for (a, u) in actions.iter().zip(&sent) {
        cloud_arrivals[a.destination] += u;
    }

    let edge_queues: Vec<f64> = state
        .edge_queues
        .iter()
        .zip(&sent)
        .zip(edge_arrivals)
        .map(|((q, u), b)| clip(q - u + b))
        .collect();

    let cloud_pre_clip: Vec<f64> = state
        .cloud_queues
        .iter()
        .zip(&cloud_arrivals)
        .map(|(q, b)| q - config.cloud_departure + b)
        .collect();
    let cloud_queues: Vec<f64> = cloud_pre_clip.iter().map(|x| clip(*x)).collect();

    let mut penalty = 0.0;
    let mut empty_clouds = 0;
    let mut full_clouds = 0;
    for (next, pre) in cloud_queues.iter().zip(&cloud_pre_clip) {
        let magnitude = pre.abs();
        if *next == 0.0 {
            empty_clouds += 1;
            penalty += magnitude;
        }
        if *next == q_max {
            full_clouds += 1;
            penalty += (q_max - magnitude).abs() * config.w_r;
        }
    }

    let next = EnvState {
        edge_queues_prev: state.edge_queues.clone(),
        edge_queues,
        cloud_queues,
        step_index: state.step_index + 1,
    };
    let outcome = StepOutcome {
        reward: -penalty,
        sent,
        cloud_pre_clip,
        empty_clouds,
        full_clouds,
    };
    Ok((next, outcome))
}

fn check_actions(config: &EnvConfig, actions: &[Action]) -> Result<()> {
    if actions.len() != config.n_edges {
        return Err(EnvError::ActionCount {
            expected: config.n_edges,
            got: actions.len(),
        });
    }
    for (agent, a) in actions.iter().enumerate() {
        if a.destination >= config.n_clouds {
            return Err(EnvError::Destination {
                agent,
                destination: a.destination,
                n_clouds: config.n_clouds,
            });
        }
        if a.amount_index >= config.packet_amounts.len() {
            return Err(EnvError::Amount {
                agent,
                amount_index: a.amount_index,
                n_amounts: config.packet_amounts.len(),
            });
        }
    }
    Ok(())
}

/// Environment instance owning its state and arrival stream.
#[derive(Debug, Clone)]
pub struct OffloadEnv {
    config: EnvConfig,
    state: EnvState,
    rng: ChaCha8Rng,
}

impl OffloadEnv {
    pub fn new(config: EnvConfig) -> Result<Self> {
        config.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let state = EnvState::initial(&config);
        Ok(OffloadEnv { config, state, rng })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    /// Restores the initial queues; the arrival stream continues.
    pub fn reset(&mut self) -> Vec<Vec<f64>> {
        self.state = EnvState::initial(&self.config);
        self.state.observations()
    }

    /// Restores the initial queues and restarts the arrival stream from `seed`.
    pub fn reseed(&mut self, seed: u64) -> Vec<Vec<f64>> {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.reset()
    }

    pub fn is_done(&self) -> bool {
        self.state.step_index >= self.config.episode_length
    }

    pub fn step(&mut self, actions: &[Action]) -> Result<StepOutcome> {
        check_actions(&self.config, actions)?;
        let width = self.config.w_p * self.config.q_max;
        let arrivals: Vec<f64> = (0..self.config.n_edges)
            .map(|_| self.rng.gen::<f64>() * width)
            .collect();
        let (next, outcome) = transition(&self.config, &self.state, actions, &arrivals)?;
        self.state = next;
        Ok(outcome)
    }

    /// Decodes flat action indices and steps.
    pub fn step_indices(&mut self, indices: &[usize]) -> Result<StepOutcome> {
        let actions = indices
            .iter()
            .map(|i| Action::from_index(*i, &self.config))
            .collect::<Result<Vec<_>>>()?;
        self.step(&actions)
    }
}

/// One tab-separated debug line: step, edge queues, cloud queues, actions, reward.
pub fn trajectory_line(state: &EnvState, actions: &[usize], reward: f64) -> String {
    let join = |xs: &[f64]| {
        let mut s = String::new();
        for (i, x) in xs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{x:?}");
        }
        s
    };
    let acts: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
    format!(
        "{}\t{}\t{}\t{}\t{:?}",
        state.step_index,
        join(&state.edge_queues),
        join(&state.cloud_queues),
        acts.join(","),
        reward
    )
}

/// Mean undiscounted return of uniformly random joint actions over
/// `episodes` episodes. Arrivals come from `config.seed`; actions from a
/// stream derived from it.
pub fn random_walk_rollout(config: &EnvConfig, episodes: usize) -> Result<f64> {
    if episodes == 0 {
        return Err(EnvError::Config("random walk needs at least one episode".into()));
    }
    let mut env = OffloadEnv::new(config.clone())?;
    let mut action_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9E37_79B9_7F4A_7C15);
    let n_actions = config.n_actions();
    let mut total = 0.0;
    for _ in 0..episodes {
        env.reset();
        while !env.is_done() {
            let indices: Vec<usize> = (0..config.n_edges)
                .map(|_| action_rng.gen_range(0..n_actions))
                .collect();
            total += env.step_indices(&indices)?.reward;
        }
    }
    Ok(total / episodes as f64)
}
