//! Centralised-critic actor-critic training.
//!
//! Each epoch collects `episodes_per_update` on-policy episodes with actions
//! sampled from the current softmax policies, computes the TD residual
//!
//! ```text
//! y_t = r_t + γ V_target(s_{t+1}) − V(s_t)
//! ```
//!
//! for every step, and takes one Adam step per model:
//!
//! * actor `n`: gradient `−(1/B) Σ_t y_t ∇ log π_n(u_t^n | o_t^n)` with `y_t` held constant;
//! * critic: gradient of `(1/B) Σ_t y_t²` through `V(s_t)` only.
//!
//! The target critic is refreshed from the critic every
//! `target_update_period` updates. The horizon is a truncation, so the last
//! step still bootstraps from its next state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{EnvConfig, EnvError, OffloadEnv};
use crate::metrics::MetricsRecord;
use crate::model::{greedy_action, Actor, Critic, ModelError};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("update called with an empty batch")]
    EmptyBatch,
    #[error("invalid trainer config: {0}")]
    Config(String),
    #[error("{0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, TrainError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainerConfig {
    pub gamma: f64,
    pub episodes_per_update: usize,
    /// Updates between target-critic refreshes.
    pub target_update_period: usize,
    pub lr_actor: f64,
    pub lr_critic: f64,
    pub epochs: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
    /// Epochs between checkpoints; 0 writes only the final one.
    pub checkpoint_period: usize,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            gamma: 0.99,
            episodes_per_update: 8,
            target_update_period: 10,
            lr_actor: 1e-4,
            lr_critic: 1e-5,
            epochs: 1000,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
            checkpoint_period: 0,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(TrainError::Config(m.to_string()));
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1)");
        }
        if self.episodes_per_update == 0 {
            return bad("episodes_per_update must be positive");
        }
        if self.target_update_period == 0 {
            return bad("target_update_period must be positive");
        }
        if !(self.lr_actor >= 0.0 && self.lr_critic >= 0.0) {
            return bad("learning rates must be non-negative");
        }
        if !((0.0..1.0).contains(&self.beta1) && (0.0..1.0).contains(&self.beta2)) {
            return bad("adam betas must lie in [0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("adam epsilon must be positive");
        }
        Ok(())
    }
}

/// Adam with bias-corrected moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub t: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl Adam {
    pub fn new(n_params: usize, lr: f64, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Adam {
            lr,
            beta1,
            beta2,
            epsilon,
            t: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }

    /// One descent step on `params` along `grad`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        debug_assert_eq!(params.len(), grad.len());
        debug_assert_eq!(params.len(), self.m.len());
        self.t += 1;
        let t = self.t as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= self.lr * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: Vec<f64>,
    pub observations: Vec<Vec<f64>>,
    pub actions: Vec<usize>,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub next_observations: Vec<Vec<f64>>,
}

/// Rollout statistics of one episode.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EpisodeStats {
    pub total_return: f64,
    pub steps: usize,
    pub edge_fill_sum: f64,
    pub cloud_fill_sum: f64,
    pub empty_events: usize,
    pub overflow_events: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub transitions: Vec<Transition>,
    pub stats: EpisodeStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionMode {
    /// Sample from the softmax policy (training rollouts).
    Sample,
    /// Take the most probable action (evaluation rollouts).
    Greedy,
}

fn sample_categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Plays one episode of `env_config.episode_length` steps.
pub fn collect_episode(
    env_config: &EnvConfig,
    actors: &[Box<dyn Actor>],
    env_seed: u64,
    action_seed: u64,
    mode: ActionMode,
) -> Result<Episode> {
    if actors.len() != env_config.n_edges {
        return Err(TrainError::Mismatch(format!(
            "{} actors for {} edge agents",
            actors.len(),
            env_config.n_edges
        )));
    }
    let mut env = OffloadEnv::new(env_config.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(action_seed);
    let mut observations = env.reseed(env_seed);
    let mut state = env.state().global_state();
    let mut transitions = Vec::with_capacity(env_config.episode_length);
    let mut stats = EpisodeStats::default();
    while !env.is_done() {
        let actions = actors
            .iter()
            .zip(&observations)
            .map(|(actor, obs)| {
                let probs = actor.policy(obs)?;
                Ok(match mode {
                    ActionMode::Sample => sample_categorical(&probs, &mut rng),
                    ActionMode::Greedy => greedy_action(&probs),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let outcome = env.step_indices(&actions)?;
        let next = env.state();
        let next_observations = next.observations();
        let next_state = next.global_state();

        stats.total_return += outcome.reward;
        stats.steps += 1;
        stats.edge_fill_sum +=
            next.edge_queues.iter().sum::<f64>() / (env_config.n_edges as f64 * env_config.q_max);
        stats.cloud_fill_sum +=
            next.cloud_queues.iter().sum::<f64>() / (env_config.n_clouds as f64 * env_config.q_max);
        stats.empty_events += outcome.empty_clouds;
        stats.overflow_events += outcome.full_clouds;

        transitions.push(Transition {
            state: std::mem::replace(&mut state, next_state.clone()),
            observations: std::mem::replace(&mut observations, next_observations.clone()),
            actions,
            reward: outcome.reward,
            next_state,
            next_observations,
        });
    }
    Ok(Episode { transitions, stats })
}

/// `y = r + γ V_target(s') − V(s)`, bootstrapping through the horizon.
pub fn td_target(
    transition: &Transition,
    critic: &dyn Critic,
    target_critic: &dyn Critic,
    gamma: f64,
) -> Result<f64> {
    let bootstrap = target_critic.value(&transition.next_state)?;
    let baseline = critic.value(&transition.state)?;
    Ok(td_residual(transition.reward, bootstrap, baseline, gamma))
}

/// `r + γ·next_value − value`.
pub fn td_residual(reward: f64, next_value: f64, value: f64, gamma: f64) -> f64 {
    reward + gamma * next_value - value
}

/// Actors plus the critic and its periodically synchronised copy.
#[derive(Debug, Clone)]
pub struct Agents {
    pub actors: Vec<Box<dyn Actor>>,
    pub critic: Box<dyn Critic>,
    pub target_critic: Box<dyn Critic>,
}

impl Agents {
    pub fn new(actors: Vec<Box<dyn Actor>>, critic: Box<dyn Critic>) -> Self {
        let target_critic = critic.clone();
        Agents {
            actors,
            critic,
            target_critic,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Losses {
    /// `−(1/B) Σ_t Σ_n y_t log π_n(u_t^n | o_t^n)`.
    pub actor: f64,
    /// `(1/B) Σ_t y_t²`.
    pub critic: f64,
}

/// Gradients of the actor and critic objectives on one batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchGradients {
    pub actors: Vec<Vec<f64>>,
    pub critic: Vec<f64>,
    pub losses: Losses,
}

/// Derives an independent stream seed from the master seed and a path of tags.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    tags.iter().fold(mix(master), |acc, t| mix(acc ^ mix(*t)))
}

const STREAM_ENV: u64 = 1;
const STREAM_ACTIONS: u64 = 2;

pub struct Trainer {
    config: TrainerConfig,
    env_config: EnvConfig,
    agents: Agents,
    actor_opts: Vec<Adam>,
    critic_opt: Adam,
    learn: bool,
    epoch: usize,
    updates: u64,
}

impl Trainer {
    /// `learn = false` only rolls out (the random-walk reference).
    pub fn new(
        config: TrainerConfig,
        env_config: EnvConfig,
        agents: Agents,
        learn: bool,
    ) -> Result<Self> {
        config.validate()?;
        env_config.validate()?;
        if agents.actors.len() != env_config.n_edges {
            return Err(TrainError::Mismatch(format!(
                "{} actors for {} edge agents",
                agents.actors.len(),
                env_config.n_edges
            )));
        }
        for actor in &agents.actors {
            if actor.obs_dim() != env_config.obs_dim() || actor.n_actions() != env_config.n_actions()
            {
                return Err(TrainError::Mismatch(format!(
                    "actor `{}` takes {} features / {} actions, environment has {} / {}",
                    actor.layout(),
                    actor.obs_dim(),
                    actor.n_actions(),
                    env_config.obs_dim(),
                    env_config.n_actions()
                )));
            }
        }
        if agents.critic.state_dim() != env_config.state_dim() {
            return Err(TrainError::Mismatch(format!(
                "critic `{}` takes {} features, environment state has {}",
                agents.critic.layout(),
                agents.critic.state_dim(),
                env_config.state_dim()
            )));
        }
        let actor_opts = agents
            .actors
            .iter()
            .map(|a| {
                Adam::new(
                    a.n_params(),
                    config.lr_actor,
                    config.beta1,
                    config.beta2,
                    config.epsilon,
                )
            })
            .collect();
        let critic_opt = Adam::new(
            agents.critic.n_params(),
            config.lr_critic,
            config.beta1,
            config.beta2,
            config.epsilon,
        );
        Ok(Trainer {
            config,
            env_config,
            agents,
            actor_opts,
            critic_opt,
            learn,
            epoch: 0,
            updates: 0,
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn env_config(&self) -> &EnvConfig {
        &self.env_config
    }

    pub fn agents(&self) -> &Agents {
        &self.agents
    }

    pub fn agents_mut(&mut self) -> &mut Agents {
        &mut self.agents
    }

    pub fn actor_optimizers(&self) -> &[Adam] {
        &self.actor_opts
    }

    pub fn critic_optimizer(&self) -> &Adam {
        &self.critic_opt
    }

    pub fn learns(&self) -> bool {
        self.learn
    }

    /// Index of the next epoch to run.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Restores the progress counters and optimiser state of a checkpoint.
    pub fn restore(
        &mut self,
        epoch: usize,
        updates: u64,
        actor_opts: Vec<Adam>,
        critic_opt: Adam,
    ) -> Result<()> {
        if actor_opts.len() != self.actor_opts.len()
            || actor_opts
                .iter()
                .zip(&self.actor_opts)
                .any(|(a, b)| a.m.len() != b.m.len())
            || critic_opt.m.len() != self.critic_opt.m.len()
        {
            return Err(TrainError::Mismatch(
                "optimiser state does not match the models".into(),
            ));
        }
        self.epoch = epoch;
        self.updates = updates;
        self.actor_opts = actor_opts;
        self.critic_opt = critic_opt;
        Ok(())
    }

    /// Seeds of episode `episode` within `epoch`: (arrivals, actions).
    pub fn episode_seeds(&self, epoch: usize, episode: usize) -> (u64, u64) {
        let tag = [epoch as u64, episode as u64];
        (
            derive_seed(self.config.seed, &[STREAM_ENV, tag[0], tag[1]]),
            derive_seed(self.config.seed, &[STREAM_ACTIONS, tag[0], tag[1]]),
        )
    }

    /// On-policy batch for the current epoch.
    pub fn collect_batch(&self) -> Result<Vec<Episode>> {
        (0..self.config.episodes_per_update)
            .map(|e| {
                let (env_seed, action_seed) = self.episode_seeds(self.epoch, e);
                collect_episode(
                    &self.env_config,
                    &self.agents.actors,
                    env_seed,
                    action_seed,
                    ActionMode::Sample,
                )
            })
            .collect()
    }

    /// TD residual of every step in `batch`, episode-major.
    pub fn td_targets(&self, batch: &[Episode]) -> Result<Vec<f64>> {
        let mut ys = Vec::new();
        for episode in batch {
            for t in &episode.transitions {
                ys.push(td_target(
                    t,
                    self.agents.critic.as_ref(),
                    self.agents.target_critic.as_ref(),
                    self.config.gamma,
                )?);
            }
        }
        Ok(ys)
    }

    /// Actor and critic objectives on `batch` under the current parameters.
    pub fn losses(&self, batch: &[Episode]) -> Result<Losses> {
        if batch.is_empty() {
            return Err(TrainError::EmptyBatch);
        }
        let inv_b = 1.0 / batch.len() as f64;
        let ys = self.td_targets(batch)?;
        let mut losses = Losses::default();
        let steps = batch.iter().flat_map(|e| &e.transitions);
        for (t, y) in steps.zip(&ys) {
            losses.critic += inv_b * y * y;
            for ((actor, obs), a) in self.agents.actors.iter().zip(&t.observations).zip(&t.actions)
            {
                losses.actor -= inv_b * y * actor.policy(obs)?[*a].ln();
            }
        }
        Ok(losses)
    }

    /// Gradients of both objectives; `y_t` is treated as a constant for the
    /// actors and only `V(s_t)` is differentiated for the critic.
    pub fn gradients(&self, batch: &[Episode]) -> Result<BatchGradients> {
        if batch.is_empty() {
            return Err(TrainError::EmptyBatch);
        }
        let inv_b = 1.0 / batch.len() as f64;
        let mut losses = Losses::default();
        let mut actors: Vec<Vec<f64>> = self
            .agents
            .actors
            .iter()
            .map(|a| vec![0.0; a.n_params()])
            .collect();
        let mut critic = vec![0.0; self.agents.critic.n_params()];
        for t in batch.iter().flat_map(|e| &e.transitions) {
            let y = td_target(
                t,
                self.agents.critic.as_ref(),
                self.agents.target_critic.as_ref(),
                self.config.gamma,
            )?;
            losses.critic += inv_b * y * y;
            if y == 0.0 {
                continue;
            }
            for (((actor, grad), obs), a) in self
                .agents
                .actors
                .iter()
                .zip(actors.iter_mut())
                .zip(&t.observations)
                .zip(&t.actions)
            {
                let (log_prob, g) = actor.log_prob_and_grad(obs, *a, -inv_b * y)?;
                losses.actor -= inv_b * y * log_prob;
                grad.iter_mut().zip(g).for_each(|(acc, x)| *acc += x);
            }
            // ∂(y²)/∂ψ = −2y ∂V(s)/∂ψ
            let g = self.agents.critic.value_grad(&t.state, -2.0 * inv_b * y)?;
            critic.iter_mut().zip(g).for_each(|(acc, x)| *acc += x);
        }
        Ok(BatchGradients {
            actors,
            critic,
            losses,
        })
    }

    /// One Adam step per model on `batch`, which is consumed.
    pub fn update(&mut self, batch: Vec<Episode>) -> Result<Losses> {
        let grads = self.gradients(&batch)?;
        drop(batch);
        for ((actor, opt), g) in self
            .agents
            .actors
            .iter_mut()
            .zip(self.actor_opts.iter_mut())
            .zip(&grads.actors)
        {
            opt.step(actor.params_mut(), g);
        }
        self.critic_opt
            .step(self.agents.critic.params_mut(), &grads.critic);
        self.updates += 1;
        if self.updates.is_multiple_of(self.config.target_update_period as u64) {
            self.agents.target_critic = self.agents.critic.clone();
        }
        Ok(grads.losses)
    }

    /// Collects a batch, updates (when learning) and reports the epoch.
    pub fn run_epoch(&mut self) -> Result<MetricsRecord> {
        let batch = self.collect_batch()?;
        let record_stats = summarize(self.epoch, &self.env_config, &batch);
        let losses = if self.learn {
            self.update(batch)?
        } else {
            Losses::default()
        };
        self.epoch += 1;
        Ok(MetricsRecord {
            actor_loss: losses.actor,
            critic_loss: losses.critic,
            ..record_stats
        })
    }

    /// Runs the remaining epochs, handing each record to `on_epoch`.
    pub fn train<F>(&mut self, mut on_epoch: F) -> Result<Vec<MetricsRecord>>
    where
        F: FnMut(&Trainer, &MetricsRecord) -> Result<()>,
    {
        let mut records = Vec::with_capacity(self.config.epochs.saturating_sub(self.epoch));
        while self.epoch < self.config.epochs {
            let record = self.run_epoch()?;
            on_epoch(self, &record)?;
            records.push(record);
        }
        Ok(records)
    }

    /// Greedy rollouts of the current actors; returns the mean episode statistics.
    pub fn evaluate(&self, episodes: usize, seed: u64) -> Result<MetricsRecord> {
        let batch = (0..episodes)
            .map(|e| {
                collect_episode(
                    &self.env_config,
                    &self.agents.actors,
                    derive_seed(seed, &[STREAM_ENV, e as u64]),
                    derive_seed(seed, &[STREAM_ACTIONS, e as u64]),
                    ActionMode::Greedy,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(summarize(self.epoch, &self.env_config, &batch))
    }
}

/// Rollout part of a metrics record; losses left at zero.
pub fn summarize(epoch: usize, env_config: &EnvConfig, batch: &[Episode]) -> MetricsRecord {
    let n = batch.len().max(1) as f64;
    let steps: usize = batch.iter().map(|e| e.stats.steps).sum();
    let steps_f = steps.max(1) as f64;
    let cloud_steps = (steps * env_config.n_clouds).max(1) as f64;
    let sum = |f: fn(&EpisodeStats) -> f64| batch.iter().map(|e| f(&e.stats)).sum::<f64>();
    MetricsRecord {
        epoch,
        mean_return: sum(|s| s.total_return) / n,
        mean_edge_queue: sum(|s| s.edge_fill_sum) / steps_f,
        mean_cloud_queue: sum(|s| s.cloud_fill_sum) / steps_f,
        empty_event_ratio: sum(|s| s.empty_events as f64) / cloud_steps,
        overflow_event_ratio: sum(|s| s.overflow_events as f64) / cloud_steps,
        actor_loss: 0.0,
        critic_loss: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{UniformActor, ZeroCritic};

    #[derive(Debug, Clone)]
    struct ConstCritic(f64);

    impl Critic for ConstCritic {
        fn layout(&self) -> &'static str {
            "const"
        }
        fn state_dim(&self) -> usize {
            16
        }
        fn params(&self) -> &[f64] {
            &[]
        }
        fn params_mut(&mut self) -> &mut [f64] {
            &mut []
        }
        fn value(&self, _: &[f64]) -> crate::model::Result<f64> {
            Ok(self.0)
        }
        fn value_grad(&self, _: &[f64], _: f64) -> crate::model::Result<Vec<f64>> {
            Ok(vec![])
        }
        fn header(&self) -> Vec<(&'static str, String)> {
            vec![]
        }
        fn box_clone(&self) -> Box<dyn Critic> {
            Box::new(self.clone())
        }
    }

    fn transition(reward: f64) -> Transition {
        Transition {
            state: vec![0.5; 16],
            observations: vec![vec![0.5; 4]; 4],
            actions: vec![0; 4],
            reward,
            next_state: vec![0.5; 16],
            next_observations: vec![vec![0.5; 4]; 4],
        }
    }

    #[test]
    fn td_target_hand_values() {
        let t = transition(0.0);
        assert_eq!(td_target(&t, &ConstCritic(0.0), &ConstCritic(0.0), 0.99).unwrap(), 0.0);
        let t = transition(-1.2);
        let y = td_target(&t, &ConstCritic(-12.0), &ConstCritic(-10.0), 0.99).unwrap();
        assert!((y - 0.9).abs() < 1e-12);
        let y0 = td_target(&t, &ConstCritic(-12.0), &ConstCritic(-10.0), 0.0).unwrap();
        assert_eq!(y0, -1.2 + 12.0);
    }

    #[test]
    fn adam_first_step_is_lr_sized() {
        let mut opt = Adam::new(1, 1e-4, 0.9, 0.999, 1e-8);
        let mut p = [0.5];
        opt.step(&mut p, &[1.0]);
        assert!((0.5 - p[0] - 1e-4).abs() < 1e-11);
        let mut opt = Adam::new(1, 1e-4, 0.9, 0.999, 1e-8);
        let mut p = [0.5];
        opt.step(&mut p, &[-250.0]);
        assert!((p[0] - 0.5 - 1e-4).abs() < 1e-11);
    }

    #[test]
    fn config_validation() {
        assert!(TrainerConfig::default().validate().is_ok());
        let bad = TrainerConfig {
            gamma: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainerConfig {
            episodes_per_update: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    fn uniform_agents() -> Agents {
        Agents::new(
            (0..4)
                .map(|_| Box::new(UniformActor::new(4, 4)) as Box<dyn Actor>)
                .collect(),
            Box::new(ZeroCritic::new(16)),
        )
    }

    #[test]
    fn empty_batch_rejected() {
        let mut trainer = Trainer::new(
            TrainerConfig::default(),
            EnvConfig::default(),
            uniform_agents(),
            true,
        )
        .unwrap();
        assert!(matches!(trainer.update(vec![]), Err(TrainError::EmptyBatch)));
    }

    #[test]
    fn rollout_only_epoch() {
        let config = TrainerConfig {
            episodes_per_update: 2,
            epochs: 3,
            ..Default::default()
        };
        let env = EnvConfig {
            episode_length: 20,
            ..Default::default()
        };
        let mut trainer = Trainer::new(config, env, uniform_agents(), false).unwrap();
        let records = trainer.train(|_, _| Ok(())).unwrap();
        assert_eq!(records.len(), 3);
        for r in &records {
            assert!(r.mean_return <= 0.0);
            assert!((0.0..=1.0).contains(&r.empty_event_ratio));
            assert!((0.0..=1.0).contains(&r.overflow_event_ratio));
            assert_eq!(r.actor_loss, 0.0);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let env = EnvConfig {
            n_clouds: 3,
            ..Default::default()
        };
        assert!(matches!(
            Trainer::new(TrainerConfig::default(), env, uniform_agents(), true),
            Err(TrainError::Mismatch(_))
        ));
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, &[1, 0, 0]), derive_seed(1, &[1, 0, 1]));
        assert_ne!(derive_seed(1, &[1, 0, 0]), derive_seed(2, &[1, 0, 0]));
        assert_eq!(derive_seed(7, &[3]), derive_seed(7, &[3]));
    }
}
