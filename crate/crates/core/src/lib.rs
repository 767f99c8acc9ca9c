//! Centralised-training, decentralised-execution multi-agent actor-critic
//! with variational quantum circuit models, benchmarked on a single-hop
//! edge-to-cloud packet offloading task against classical baselines.
//!
//! * [`qsim`]: statevector simulator with parameter-shift gradients
//! * [`vqc`]: quantum actor and critic circuits
//! * [`baselines`]: classical MLP actors and critics
//! * [`env`]: the offloading environment
//! * [`trainer`]: rollouts, TD targets, policy-gradient and critic updates
//! * [`framework`]: named actor/critic recipes selected at runtime
//! * [`config`], [`experiment`], [`metrics`], [`checkpoint`]: the harness

pub mod baselines;
pub mod checkpoint;
pub mod config;
pub mod env;
pub mod experiment;
pub mod framework;
pub mod metrics;
pub mod model;
pub mod qsim;
pub mod trainer;
pub mod vqc;

pub use config::ExperimentConfig;
pub use framework::{Framework, FrameworkRegistry, ModelConfig};
pub use model::{Actor, Critic};
