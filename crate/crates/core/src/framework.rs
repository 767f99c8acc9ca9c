//! Named training frameworks, each a recipe for the four actors and the
//! centralised critic, selected at runtime through [`FrameworkRegistry`].
//!
//! | name       | actors                | critic                |
//! |------------|-----------------------|-----------------------|
//! | `proposed` | VQC, 50 params        | VQC, 50 params        |
//! | `comp1`    | VQC, 50 params        | MLP, 50 params        |
//! | `comp2`    | MLP, 50 params        | MLP, 50 params        |
//! | `comp3`    | MLP, > 40K params     | MLP, > 40K params     |
//! | `random`   | uniform, not trained  | none                  |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{MlpActor, MlpCritic};
use crate::env::EnvConfig;
use crate::model::{Actor, Critic, ModelError, ModelText, Result, UniformActor, ZeroCritic};
use crate::trainer::{derive_seed, Agents};
use crate::vqc::{VqcActor, VqcCritic, DEFAULT_LOGIT_SCALE, DEFAULT_VALUE_SCALE};

/// Hyperparameters of the quantum model heads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Multiplies the actor's `⟨Z⟩` outputs before the softmax.
    pub logit_scale: f64,
    /// Reward units per unit of summed critic expectation.
    pub value_scale: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            logit_scale: DEFAULT_LOGIT_SCALE,
            value_scale: DEFAULT_VALUE_SCALE,
        }
    }
}

const STREAM_MODELS: u64 = 3;
const CRITIC_TAG: u64 = 1 << 32;

fn model_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[STREAM_MODELS, tag]))
}

pub trait Framework: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Whether the trainer updates the models.
    fn learns(&self) -> bool {
        true
    }

    /// Freshly initialised agents; actor `n` and the critic draw from
    /// independent streams derived from `seed`.
    fn build(&self, env: &EnvConfig, model: &ModelConfig, seed: u64) -> Result<Agents>;
}

fn vqc_actors(env: &EnvConfig, model: &ModelConfig, seed: u64) -> Result<Vec<Box<dyn Actor>>> {
    (0..env.n_edges)
        .map(|n| {
            let actor = VqcActor::random(&mut model_rng(seed, n as u64), model.logit_scale, env.q_max)?;
            expect_dims(&actor, env)?;
            Ok(Box::new(actor) as Box<dyn Actor>)
        })
        .collect()
}

fn expect_dims(actor: &dyn Actor, env: &EnvConfig) -> Result<()> {
    if actor.obs_dim() != env.obs_dim() || actor.n_actions() != env.n_actions() {
        return Err(ModelError::Shape {
            what: "environment observation/action sizes for a 4-qubit actor",
            expected: actor.obs_dim(),
            got: env.obs_dim(),
        });
    }
    Ok(())
}

fn vqc_critic(env: &EnvConfig, model: &ModelConfig, seed: u64) -> Result<Box<dyn Critic>> {
    let critic = VqcCritic::random(&mut model_rng(seed, CRITIC_TAG), model.value_scale, env.q_max)?;
    if critic.state_dim() != env.state_dim() {
        return Err(ModelError::Shape {
            what: "environment state size for a 4-qubit critic",
            expected: critic.state_dim(),
            got: env.state_dim(),
        });
    }
    Ok(Box::new(critic))
}

pub struct Proposed;

impl Framework for Proposed {
    fn name(&self) -> &'static str {
        "proposed"
    }

    fn description(&self) -> &'static str {
        "VQC actors with a VQC centralised critic (50 parameters each)"
    }

    fn build(&self, env: &EnvConfig, model: &ModelConfig, seed: u64) -> Result<Agents> {
        Ok(Agents::new(
            vqc_actors(env, model, seed)?,
            vqc_critic(env, model, seed)?,
        ))
    }
}

pub struct HybridComp1;

impl Framework for HybridComp1 {
    fn name(&self) -> &'static str {
        "comp1"
    }

    fn description(&self) -> &'static str {
        "VQC actors with a classical centralised critic (50 parameters each)"
    }

    fn build(&self, env: &EnvConfig, model: &ModelConfig, seed: u64) -> Result<Agents> {
        let critic = MlpCritic::compact(env.state_dim(), &mut model_rng(seed, CRITIC_TAG))?;
        Ok(Agents::new(vqc_actors(env, model, seed)?, Box::new(critic)))
    }
}

pub struct ClassicalComp2;

impl Framework for ClassicalComp2 {
    fn name(&self) -> &'static str {
        "comp2"
    }

    fn description(&self) -> &'static str {
        "classical actors and critic at the 50-parameter budget"
    }

    fn build(&self, env: &EnvConfig, _model: &ModelConfig, seed: u64) -> Result<Agents> {
        let actors = (0..env.n_edges)
            .map(|n| {
                let a = MlpActor::compact(env.obs_dim(), env.n_actions(), &mut model_rng(seed, n as u64))?;
                Ok(Box::new(a) as Box<dyn Actor>)
            })
            .collect::<Result<Vec<_>>>()?;
        let critic = MlpCritic::compact(env.state_dim(), &mut model_rng(seed, CRITIC_TAG))?;
        Ok(Agents::new(actors, Box::new(critic)))
    }
}

pub struct ClassicalComp3;

impl Framework for ClassicalComp3 {
    fn name(&self) -> &'static str {
        "comp3"
    }

    fn description(&self) -> &'static str {
        "classical actors and critic with more than 40K parameters each"
    }

    fn build(&self, env: &EnvConfig, _model: &ModelConfig, seed: u64) -> Result<Agents> {
        let actors = (0..env.n_edges)
            .map(|n| {
                let a = MlpActor::wide(env.obs_dim(), env.n_actions(), &mut model_rng(seed, n as u64))?;
                Ok(Box::new(a) as Box<dyn Actor>)
            })
            .collect::<Result<Vec<_>>>()?;
        let critic = MlpCritic::wide(env.state_dim(), &mut model_rng(seed, CRITIC_TAG))?;
        Ok(Agents::new(actors, Box::new(critic)))
    }
}

pub struct RandomWalk;

impl Framework for RandomWalk {
    fn name(&self) -> &'static str {
        "random"
    }

    fn description(&self) -> &'static str {
        "uniformly random actions, no training"
    }

    fn learns(&self) -> bool {
        false
    }

    fn build(&self, env: &EnvConfig, _model: &ModelConfig, _seed: u64) -> Result<Agents> {
        let actors = (0..env.n_edges)
            .map(|_| Box::new(UniformActor::new(env.obs_dim(), env.n_actions())) as Box<dyn Actor>)
            .collect();
        Ok(Agents::new(actors, Box::new(ZeroCritic::new(env.state_dim()))))
    }
}

/// Ordered name → framework table.
pub struct FrameworkRegistry {
    entries: Vec<Box<dyn Framework>>,
}

impl FrameworkRegistry {
    pub fn empty() -> Self {
        FrameworkRegistry {
            entries: Vec::new(),
        }
    }

    /// Adds `framework`, replacing any entry with the same name.
    pub fn register(&mut self, framework: Box<dyn Framework>) {
        match self
            .entries
            .iter_mut()
            .find(|f| f.name() == framework.name())
        {
            Some(slot) => *slot = framework,
            None => self.entries.push(framework),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Framework> {
        self.entries
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Framework> {
        self.entries.iter().map(|f| f.as_ref())
    }
}

impl Default for FrameworkRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Proposed));
        reg.register(Box::new(HybridComp1));
        reg.register(Box::new(ClassicalComp2));
        reg.register(Box::new(ClassicalComp3));
        reg.register(Box::new(RandomWalk));
        reg
    }
}

/// Rebuilds an actor from its serialized form, dispatching on `layout`.
pub fn load_actor(text: &ModelText) -> Result<Box<dyn Actor>> {
    Ok(match text.layout.as_str() {
        VqcActor::LAYOUT => Box::new(VqcActor::from_text(text)?),
        MlpActor::LAYOUT => Box::new(MlpActor::from_text(text)?),
        "uniform-actor" => Box::new(UniformActor::new(
            text.parse_value("obs_dim")?,
            text.parse_value("n_actions")?,
        )),
        other => return Err(ModelError::UnknownLayout(other.to_string())),
    })
}

/// Rebuilds a critic from its serialized form, dispatching on `layout`.
pub fn load_critic(text: &ModelText) -> Result<Box<dyn Critic>> {
    Ok(match text.layout.as_str() {
        VqcCritic::LAYOUT => Box::new(VqcCritic::from_text(text)?),
        MlpCritic::LAYOUT => Box::new(MlpCritic::from_text(text)?),
        "zero-critic" => Box::new(ZeroCritic::new(text.parse_value("state_dim")?)),
        other => return Err(ModelError::UnknownLayout(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_in_order() {
        assert_eq!(
            FrameworkRegistry::default().names(),
            vec!["proposed", "comp1", "comp2", "comp3", "random"]
        );
    }

    #[test]
    fn parameter_budgets() {
        let reg = FrameworkRegistry::default();
        let env = EnvConfig::default();
        let model = ModelConfig::default();
        for name in ["proposed", "comp1", "comp2"] {
            let agents = reg.get(name).unwrap().build(&env, &model, 1).unwrap();
            assert_eq!(agents.actors.len(), 4);
            assert!(agents.actors.iter().all(|a| a.n_params() == 50), "{name}");
            assert_eq!(agents.critic.n_params(), 50, "{name}");
        }
        let agents = reg.get("comp3").unwrap().build(&env, &model, 1).unwrap();
        assert!(agents.actors.iter().all(|a| a.n_params() > 40_000));
        assert!(agents.critic.n_params() > 40_000);
        assert!(!reg.get("random").unwrap().learns());
    }

    #[test]
    fn agents_are_independent_but_reproducible() {
        let reg = FrameworkRegistry::default();
        let env = EnvConfig::default();
        let a = reg.get("proposed").unwrap().build(&env, &ModelConfig::default(), 3).unwrap();
        let b = reg.get("proposed").unwrap().build(&env, &ModelConfig::default(), 3).unwrap();
        assert_eq!(a.actors[0].params(), b.actors[0].params());
        assert_ne!(a.actors[0].params(), a.actors[1].params());
        assert_eq!(a.critic.params(), a.target_critic.params());
    }

    #[test]
    fn quantum_frameworks_reject_other_topologies() {
        let env = EnvConfig {
            n_clouds: 3,
            ..Default::default()
        };
        assert!(Proposed.build(&env, &ModelConfig::default(), 0).is_err());
    }

    #[test]
    fn load_dispatches_on_layout() {
        let agents = ClassicalComp2
            .build(&EnvConfig::default(), &ModelConfig::default(), 5)
            .unwrap();
        let text = ModelText::from_actor(agents.actors[2].as_ref());
        let back = load_actor(&text).unwrap();
        assert_eq!(back.params(), agents.actors[2].params());
        let bogus = ModelText {
            layout: "nope".into(),
            header: vec![],
            params: vec![],
        };
        assert!(matches!(load_critic(&bogus), Err(ModelError::UnknownLayout(_))));
    }
}
