//! Experiment driver: the framework × seed matrix, the random-walk
//! reference, achievability and the summary file.
//!
//! Output layout under `run.out`:
//!
//! ```text
//! random_walk.txt                       reference return (key = value)
//! <framework>/seed-<seed>/metrics.csv   one row per epoch
//! <framework>/seed-<seed>/checkpoint.txt
//! <framework>/seed-<seed>/checkpoint-epoch<k>.txt   (checkpoint_period > 0)
//! summary.txt                           final-window means, achievability, gaps
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::checkpoint::Checkpoint;
use crate::config::{ConfigError, ExperimentConfig};
use crate::env::{random_walk_rollout, EnvConfig, EnvError};
use crate::framework::{load_actor, load_critic, FrameworkRegistry};
use crate::metrics::{final_window_mean, read_metrics, write_metrics, MetricsRecord};
use crate::model::ModelError;
use crate::trainer::{Agents, TrainError, Trainer};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error("metrics file {path}: {source}")]
    Metrics { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("{0}")]
    Achievability(String),
    #[error("no runs found under {0}")]
    NoRuns(PathBuf),
}

impl HarnessError {
    /// 1 for configuration problems, 2 for everything that failed at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let context = context.into();
    move |source| HarnessError::Io { context, source }
}

/// `1 − mean_return / random_walk_return`: 0 at the random walk, 1 at the
/// best possible return of 0.
pub fn achievability(mean_return: f64, random_walk_return: f64) -> Result<f64> {
    if !(random_walk_return < 0.0) {
        return Err(HarnessError::Achievability(format!(
            "random-walk return must be negative, got {random_walk_return}"
        )));
    }
    Ok(1.0 - mean_return / random_walk_return)
}

pub fn run_dir(out: &Path, framework: &str, seed: u64) -> PathBuf {
    out.join(framework).join(format!("seed-{seed}"))
}

/// Random-walk reference return with the run's dedicated seed.
pub fn random_walk_reference(config: &ExperimentConfig) -> Result<f64> {
    let env = EnvConfig {
        seed: config.run.random_walk_seed,
        ..config.env.clone()
    };
    Ok(random_walk_rollout(&env, config.run.random_walk_episodes)?)
}

pub fn write_random_walk(out: &Path, config: &ExperimentConfig, value: f64) -> Result<()> {
    fs::create_dir_all(out).map_err(io_err(format!("creating {}", out.display())))?;
    let text = format!(
        "random_walk_return = {value:?}\nrandom_walk_episodes = {}\nrandom_walk_seed = {}\n",
        config.run.random_walk_episodes, config.run.random_walk_seed
    );
    let path = out.join("random_walk.txt");
    fs::write(&path, text).map_err(io_err(format!("writing {}", path.display())))
}

pub fn read_key_values(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(io_err(format!("reading {}", path.display())))?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect())
}

fn read_random_walk(out: &Path) -> Result<Option<f64>> {
    let path = out.join("random_walk.txt");
    if !path.exists() {
        return Ok(None);
    }
    let kv = read_key_values(&path)?;
    Ok(kv.get("random_walk_return").and_then(|v| v.parse().ok()))
}

fn build_trainer(
    config: &ExperimentConfig,
    registry: &FrameworkRegistry,
    framework: &str,
    seed: u64,
) -> Result<Trainer> {
    let fw = registry.get(framework).ok_or_else(|| {
        ConfigError::Invalid(format!("unknown framework `{framework}`"))
    })?;
    let agents = fw.build(&config.env, &config.model, seed)?;
    let trainer_config = crate::trainer::TrainerConfig {
        seed,
        ..config.trainer.clone()
    };
    Ok(Trainer::new(trainer_config, config.env.clone(), agents, fw.learns())?)
}

/// Trains one (framework, seed) pair and writes its run directory. Output
/// goes to a `.partial` sibling that is renamed on success and removed on
/// failure.
pub fn run_single(
    config: &ExperimentConfig,
    registry: &FrameworkRegistry,
    framework: &str,
    seed: u64,
    mut progress: impl FnMut(&MetricsRecord),
) -> Result<Vec<MetricsRecord>> {
    let final_dir = run_dir(&config.run.out, framework, seed);
    let partial = final_dir.with_extension("partial");
    let _ = fs::remove_dir_all(&partial);
    fs::create_dir_all(&partial).map_err(io_err(format!("creating {}", partial.display())))?;

    let result = (|| -> Result<Vec<MetricsRecord>> {
        let mut trainer = build_trainer(config, registry, framework, seed)?;
        let period = config.trainer.checkpoint_period;
        let records = trainer.train(|t, record| {
            progress(record);
            if period > 0 && t.epoch() % period == 0 {
                let path = partial.join(format!("checkpoint-epoch{}.txt", t.epoch()));
                fs::write(&path, Checkpoint::capture(framework, t).to_string())
                    .map_err(|e| TrainError::Config(format!("writing {}: {e}", path.display())))?;
            }
            Ok(())
        })?;
        let metrics_path = partial.join("metrics.csv");
        let file = fs::File::create(&metrics_path)
            .map_err(io_err(format!("creating {}", metrics_path.display())))?;
        write_metrics(BufWriter::new(file), &records).map_err(|source| HarnessError::Metrics {
            path: metrics_path.clone(),
            source,
        })?;
        let cp_path = partial.join("checkpoint.txt");
        fs::write(&cp_path, Checkpoint::capture(framework, &trainer).to_string())
            .map_err(io_err(format!("writing {}", cp_path.display())))?;
        Ok(records)
    })();

    match result {
        Ok(records) => {
            let _ = fs::remove_dir_all(&final_dir);
            fs::rename(&partial, &final_dir)
                .map_err(io_err(format!("finalising {}", final_dir.display())))?;
            Ok(records)
        }
        Err(e) => {
            let _ = fs::remove_dir_all(&partial);
            Err(e)
        }
    }
}

/// Runs the whole configured matrix, then writes `random_walk.txt` and
/// `summary.txt`.
pub fn run_experiment(
    config: &ExperimentConfig,
    registry: &FrameworkRegistry,
    mut progress: impl FnMut(&str, u64, &MetricsRecord),
) -> Result<Summary> {
    config.validate(registry)?;
    let out = &config.run.out;
    fs::create_dir_all(out).map_err(io_err(format!("creating {}", out.display())))?;
    let random = random_walk_reference(config)?;
    write_random_walk(out, config, random)?;
    for framework in &config.run.frameworks {
        for &seed in &config.run.seeds {
            run_single(config, registry, framework, seed, |r| progress(framework, seed, r))?;
        }
    }
    let summary = summarize_runs(config, registry, random)?;
    summary.write(&out.join("summary.txt"))?;
    Ok(summary)
}

pub fn load_metrics(path: &Path) -> Result<Vec<MetricsRecord>> {
    let file = fs::File::open(path).map_err(io_err(format!("opening {}", path.display())))?;
    read_metrics(BufReader::new(file)).map_err(|source| HarnessError::Metrics {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub framework: String,
    pub seed: u64,
    pub final_window: MetricsRecord,
    pub achievability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameworkSummary {
    pub framework: String,
    /// Seed-averaged final-window means.
    pub mean: MetricsRecord,
    pub achievability: f64,
    pub runs: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub random_walk_return: f64,
    pub final_window: usize,
    pub frameworks: Vec<FrameworkSummary>,
}

impl Summary {
    pub fn framework(&self, name: &str) -> Option<&FrameworkSummary> {
        self.frameworks.iter().find(|f| f.framework == name)
    }

    /// Achievability of `a` minus that of `b`.
    pub fn gap(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.framework(a)?.achievability - self.framework(b)?.achievability)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "random_walk_return = {:?}", self.random_walk_return);
        let _ = writeln!(s, "final_window = {}", self.final_window);
        let record = |s: &mut String, prefix: &str, r: &MetricsRecord| {
            let _ = writeln!(s, "{prefix}.mean_return = {:?}", r.mean_return);
            let _ = writeln!(s, "{prefix}.mean_edge_queue = {:?}", r.mean_edge_queue);
            let _ = writeln!(s, "{prefix}.mean_cloud_queue = {:?}", r.mean_cloud_queue);
            let _ = writeln!(s, "{prefix}.empty_event_ratio = {:?}", r.empty_event_ratio);
            let _ = writeln!(s, "{prefix}.overflow_event_ratio = {:?}", r.overflow_event_ratio);
        };
        for fw in &self.frameworks {
            for run in &fw.runs {
                let prefix = format!("{}.seed-{}", fw.framework, run.seed);
                record(&mut s, &prefix, &run.final_window);
                let _ = writeln!(s, "{prefix}.achievability = {:?}", run.achievability);
            }
            record(&mut s, &fw.framework, &fw.mean);
            let _ = writeln!(s, "{}.achievability = {:?}", fw.framework, fw.achievability);
        }
        for (i, a) in self.frameworks.iter().enumerate() {
            for b in &self.frameworks[i + 1..] {
                let _ = writeln!(
                    s,
                    "gap.{}-{} = {:?}",
                    a.framework,
                    b.framework,
                    a.achievability - b.achievability
                );
            }
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(io_err(format!("writing {}", path.display())))
    }
}

/// Builds the summary from the metrics files of every configured run.
pub fn summarize_runs(
    config: &ExperimentConfig,
    registry: &FrameworkRegistry,
    random_walk_return: f64,
) -> Result<Summary> {
    let out = &config.run.out;
    let window = config.run.final_window;
    let mut frameworks = Vec::new();
    // registry order keeps the summary layout stable
    for name in registry.names() {
        if !config.run.frameworks.iter().any(|f| f == name) {
            continue;
        }
        let mut runs = Vec::new();
        for &seed in &config.run.seeds {
            let path = run_dir(out, name, seed).join("metrics.csv");
            if !path.exists() {
                continue;
            }
            let records = load_metrics(&path)?;
            let Some(final_window) = final_window_mean(&records, window) else {
                continue;
            };
            runs.push(RunSummary {
                framework: name.to_string(),
                seed,
                achievability: achievability(final_window.mean_return, random_walk_return)?,
                final_window,
            });
        }
        if runs.is_empty() {
            continue;
        }
        let finals: Vec<MetricsRecord> = runs.iter().map(|r| r.final_window.clone()).collect();
        let mean = final_window_mean(&finals, finals.len()).expect("non-empty");
        frameworks.push(FrameworkSummary {
            framework: name.to_string(),
            achievability: achievability(mean.mean_return, random_walk_return)?,
            mean,
            runs,
        });
    }
    if frameworks.is_empty() {
        return Err(HarnessError::NoRuns(out.clone()));
    }
    Ok(Summary {
        random_walk_return,
        final_window: window,
        frameworks,
    })
}

/// Re-reads `random_walk.txt` (recomputing it if absent) and every metrics
/// file, then rewrites `summary.txt`.
pub fn report(config: &ExperimentConfig, registry: &FrameworkRegistry) -> Result<Summary> {
    config.validate(registry)?;
    let out = &config.run.out;
    let random = match read_random_walk(out)? {
        Some(v) => v,
        None => {
            let v = random_walk_reference(config)?;
            write_random_walk(out, config, v)?;
            v
        }
    };
    let summary = summarize_runs(config, registry, random)?;
    summary.write(&out.join("summary.txt"))?;
    Ok(summary)
}

/// Rebuilds a trainer from a checkpoint written by [`run_single`].
pub fn trainer_from_checkpoint(config: &ExperimentConfig, checkpoint: &Checkpoint) -> Result<Trainer> {
    let actors = checkpoint
        .actors
        .iter()
        .map(load_actor)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut agents = Agents::new(actors, load_critic(&checkpoint.critic)?);
    agents.target_critic = load_critic(&checkpoint.target_critic)?;
    let learns = checkpoint.framework != "random";
    let trainer_config = crate::trainer::TrainerConfig {
        seed: checkpoint.seed,
        ..config.trainer.clone()
    };
    let mut trainer = Trainer::new(trainer_config, config.env.clone(), agents, learns)?;
    trainer.restore(
        checkpoint.epoch,
        checkpoint.updates,
        checkpoint.actor_opts.clone(),
        checkpoint.critic_opt.clone(),
    )?;
    Ok(trainer)
}

/// Greedy evaluation of every finished run; writes `evaluation.csv` next to
/// each checkpoint.
pub fn evaluate_runs(
    config: &ExperimentConfig,
    registry: &FrameworkRegistry,
) -> Result<Vec<(String, u64, MetricsRecord)>> {
    config.validate(registry)?;
    let mut results = Vec::new();
    for framework in &config.run.frameworks {
        for &seed in &config.run.seeds {
            let dir = run_dir(&config.run.out, framework, seed);
            let cp_path = dir.join("checkpoint.txt");
            if !cp_path.exists() {
                continue;
            }
            let text = fs::read_to_string(&cp_path)
                .map_err(io_err(format!("reading {}", cp_path.display())))?;
            let checkpoint: Checkpoint = text.parse()?;
            let trainer = trainer_from_checkpoint(config, &checkpoint)?;
            let record = trainer.evaluate(config.run.eval_episodes.max(1), seed)?;
            let mut buf = Vec::new();
            write_metrics(&mut buf, std::slice::from_ref(&record)).map_err(|source| {
                HarnessError::Metrics {
                    path: dir.join("evaluation.csv"),
                    source,
                }
            })?;
            fs::write(dir.join("evaluation.csv"), buf)
                .map_err(io_err(format!("writing {}", dir.join("evaluation.csv").display())))?;
            results.push((framework.clone(), seed, record));
        }
    }
    if results.is_empty() {
        return Err(HarnessError::NoRuns(config.run.out.clone()));
    }
    Ok(results)
}
