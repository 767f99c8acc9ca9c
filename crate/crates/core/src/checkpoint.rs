//! Plain-text training checkpoints.
//!
//! ```text
//! qmarl-checkpoint 1
//! framework proposed
//! seed 7
//! epoch 120
//! updates 120
//! [actor 0]
//! <model block, see `model`>
//! [adam actor 0]
//! t 120
//! lr 0.0001
//! beta1 0.9
//! beta2 0.999
//! epsilon 1e-8
//! m ...
//! v ...
//! ...
//! [critic]
//! [adam critic]
//! [target-critic]
//! ```
//!
//! Episode streams are derived from `(seed, epoch, episode)`, so `seed` and
//! `epoch` fully determine the random state of a resumed run.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::model::{ModelError, ModelText};
use crate::trainer::{Adam, Trainer};

const MAGIC: &str = "qmarl-checkpoint 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub framework: String,
    pub seed: u64,
    pub epoch: usize,
    pub updates: u64,
    pub actors: Vec<ModelText>,
    pub actor_opts: Vec<Adam>,
    pub critic: ModelText,
    pub critic_opt: Adam,
    pub target_critic: ModelText,
}

impl Checkpoint {
    pub fn capture(framework: &str, trainer: &Trainer) -> Self {
        let agents = trainer.agents();
        Checkpoint {
            framework: framework.to_string(),
            seed: trainer.config().seed,
            epoch: trainer.epoch(),
            updates: trainer.updates(),
            actors: agents
                .actors
                .iter()
                .map(|a| ModelText::from_actor(a.as_ref()))
                .collect(),
            actor_opts: trainer.actor_optimizers().to_vec(),
            critic: ModelText::from_critic(agents.critic.as_ref()),
            critic_opt: trainer.critic_optimizer().clone(),
            target_critic: ModelText::from_critic(agents.target_critic.as_ref()),
        }
    }
}

fn write_floats(out: &mut String, key: &str, xs: &[f64]) {
    out.push_str(key);
    for x in xs {
        let _ = write!(out, " {x:?}");
    }
    out.push('\n');
}

fn write_adam(out: &mut String, adam: &Adam) {
    let _ = writeln!(out, "t {}", adam.t);
    let _ = writeln!(out, "lr {:?}", adam.lr);
    let _ = writeln!(out, "beta1 {:?}", adam.beta1);
    let _ = writeln!(out, "beta2 {:?}", adam.beta2);
    let _ = writeln!(out, "epsilon {:?}", adam.epsilon);
    write_floats(out, "m", &adam.m);
    write_floats(out, "v", &adam.v);
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "framework {}", self.framework);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "epoch {}", self.epoch);
        let _ = writeln!(out, "updates {}", self.updates);
        for (n, (actor, opt)) in self.actors.iter().zip(&self.actor_opts).enumerate() {
            let _ = writeln!(out, "[actor {n}]");
            out.push_str(&actor.to_string());
            let _ = writeln!(out, "[adam actor {n}]");
            write_adam(&mut out, opt);
        }
        out.push_str("[critic]\n");
        out.push_str(&self.critic.to_string());
        out.push_str("[adam critic]\n");
        write_adam(&mut out, &self.critic_opt);
        out.push_str("[target-critic]\n");
        out.push_str(&self.target_critic.to_string());
        f.write_str(&out)
    }
}

fn format_err(msg: impl Into<String>) -> ModelError {
    ModelError::Format(msg.into())
}

fn next_kv<'a, I: Iterator<Item = &'a str>>(lines: &mut I, key: &str) -> Result<&'a str, ModelError> {
    for line in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once(' ').unwrap_or((line, ""));
        if k != key {
            return Err(format_err(format!("expected `{key}`, found `{k}`")));
        }
        return Ok(v.trim());
    }
    Err(format_err(format!("missing `{key}`")))
}

fn parse<T: FromStr>(raw: &str, key: &str) -> Result<T, ModelError> {
    raw.parse()
        .map_err(|_| format_err(format!("bad value `{raw}` for `{key}`")))
}

fn parse_floats(raw: &str) -> Result<Vec<f64>, ModelError> {
    raw.split_whitespace().map(|t| parse(t, "vector")).collect()
}

fn read_adam<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Adam, ModelError> {
    let t = parse(next_kv(lines, "t")?, "t")?;
    let lr = parse(next_kv(lines, "lr")?, "lr")?;
    let beta1 = parse(next_kv(lines, "beta1")?, "beta1")?;
    let beta2 = parse(next_kv(lines, "beta2")?, "beta2")?;
    let epsilon = parse(next_kv(lines, "epsilon")?, "epsilon")?;
    let m = parse_floats(next_kv(lines, "m")?)?;
    let v = parse_floats(next_kv(lines, "v")?)?;
    if m.len() != v.len() {
        return Err(format_err("adam moment vectors differ in length"));
    }
    Ok(Adam {
        lr,
        beta1,
        beta2,
        epsilon,
        t,
        m,
        v,
    })
}

fn expect_section<'a, I: Iterator<Item = &'a str>>(
    lines: &mut I,
    name: &str,
) -> Result<(), ModelError> {
    for line in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == format!("[{name}]") {
            return Ok(());
        }
        return Err(format_err(format!("expected section [{name}], found `{line}`")));
    }
    Err(format_err(format!("missing section [{name}]")))
}

impl FromStr for Checkpoint {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        let mut lines = s.lines().peekable();
        match lines.next() {
            Some(l) if l.trim() == MAGIC => {}
            _ => return Err(format_err("not a checkpoint file")),
        }
        let framework = next_kv(&mut lines, "framework")?.to_string();
        let seed = parse(next_kv(&mut lines, "seed")?, "seed")?;
        let epoch = parse(next_kv(&mut lines, "epoch")?, "epoch")?;
        let updates = parse(next_kv(&mut lines, "updates")?, "updates")?;
        let mut actors = Vec::new();
        let mut actor_opts = Vec::new();
        while lines
            .peek()
            .is_some_and(|l| l.trim().starts_with("[actor "))
        {
            let n = actors.len();
            expect_section(&mut lines, &format!("actor {n}"))?;
            actors.push(ModelText::read(&mut lines)?);
            expect_section(&mut lines, &format!("adam actor {n}"))?;
            actor_opts.push(read_adam(&mut lines)?);
        }
        expect_section(&mut lines, "critic")?;
        let critic = ModelText::read(&mut lines)?;
        expect_section(&mut lines, "adam critic")?;
        let critic_opt = read_adam(&mut lines)?;
        expect_section(&mut lines, "target-critic")?;
        let target_critic = ModelText::read(&mut lines)?;
        Ok(Checkpoint {
            framework,
            seed,
            epoch,
            updates,
            actors,
            actor_opts,
            critic,
            critic_opt,
            target_critic,
        })
    }
}
