use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmarl::config::{ConfigError, ExperimentConfig};
use qmarl::experiment::{self, HarnessError};
use qmarl::FrameworkRegistry;

/// Quantum multi-agent actor-critic on the edge-to-cloud offloading benchmark.
#[derive(Parser, Debug)]
#[command(name = "qmarl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train every configured (framework, seed) pair and write metrics + summary.
    Train(CommonArgs),
    /// Greedy rollouts of the trained checkpoints.
    Evaluate(CommonArgs),
    /// Mean return of uniformly random actions (the achievability reference).
    RandomBaseline(CommonArgs),
    /// Rebuild summary.txt from existing metrics files.
    Report(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Experiment config (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run a single seed instead of the configured list.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run a single framework instead of the configured list.
    #[arg(long)]
    framework: Option<String>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.run.seeds = vec![seed];
        }
        if let Some(out) = &self.out {
            config.run.out = out.clone();
        }
        if let Some(fw) = &self.framework {
            config.run.frameworks = vec![fw.clone()];
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let registry = FrameworkRegistry::default();
    match cli.command {
        Command::Train(args) => {
            let config = args.resolve()?;
            let log_every = (config.trainer.epochs / 20).max(1);
            let summary = experiment::run_experiment(&config, &registry, |fw, seed, r| {
                if (r.epoch + 1) % log_every == 0 {
                    eprintln!(
                        "{fw} seed {seed} epoch {:>5}: return {:>8.3}  critic loss {:>10.4}",
                        r.epoch + 1,
                        r.mean_return,
                        r.critic_loss
                    );
                }
            })?;
            print!("{}", summary.to_text());
        }
        Command::Evaluate(args) => {
            let config = args.resolve()?;
            for (fw, seed, r) in experiment::evaluate_runs(&config, &registry)? {
                println!(
                    "{fw} seed {seed}: greedy return {:.4}, edge fill {:.3}, cloud fill {:.3}, \
                     empty {:.4}, overflow {:.4}",
                    r.mean_return,
                    r.mean_edge_queue,
                    r.mean_cloud_queue,
                    r.empty_event_ratio,
                    r.overflow_event_ratio
                );
            }
        }
        Command::RandomBaseline(args) => {
            let config = args.resolve()?;
            config.validate(&registry)?;
            let value = experiment::random_walk_reference(&config)?;
            experiment::write_random_walk(&config.run.out, &config, value)?;
            println!("random_walk_return = {value:?}");
        }
        Command::Report(args) => {
            let config = args.resolve()?;
            print!("{}", experiment::report(&config, &registry)?.to_text());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
