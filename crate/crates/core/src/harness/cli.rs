//! Command-line front end. Exit code 0 on success (divergence included),
//! 2 on configuration or I/O errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{parse_interest, AlphaConfig, EnvironmentConfig, ExperimentConfig, LearnerKind, RmseWeighting, RunLength};
use super::run::{compare, compare_csv, curve_csv, run_records, solve_csv, sweep, sweep_csv, trace, trace_csv, write_file};
use crate::env::Bootstrap;
use crate::error::{Error, Result};
use crate::oracles::solve_true_values;

#[derive(Debug, Parser)]
#[command(name = "toetd", version, about = "True online emphatic TD(lambda) experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration and write its learning curves.
    Run {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Grid over step sizes and bootstrapping parameters.
    Sweep {
        #[command(flatten)]
        common: ConfigArgs,
        /// Comma-separated step sizes; "auto" allowed.
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
    },
    /// Feed identical streams to several learners.
    Compare {
        #[command(flatten)]
        common: ConfigArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        learners: Vec<String>,
    },
    /// Print exact values for an environment.
    Solve {
        /// chain, chain:N, baird, file:PATH, or a path to a spec file.
        #[arg(long)]
        env: String,
        /// Interest override (affects nothing but validation).
        #[arg(long)]
        interest: Option<String>,
    },
    /// Print per-step diagnostics of the core learner.
    Trace {
        #[command(flatten)]
        common: ConfigArgs,
    },
}

/// The config file plus flags that override its keys.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Replace the seed list with a single seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Step size or "auto".
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub alpha_decay: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub learner: Option<String>,
    #[arg(long)]
    pub interest: Option<String>,
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub episodes: Option<u64>,
    #[arg(long)]
    pub eval_every: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub divergence_threshold: Option<f64>,
    #[arg(long)]
    pub stop_on_divergence: bool,
    /// interest | uniform
    #[arg(long)]
    pub rmse_weighting: Option<String>,
    #[arg(long)]
    pub parallel: bool,
}

impl ConfigArgs {
    pub fn load(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::load(&self.config)?;
        if let Some(s) = &self.seeds {
            c.seeds = s.clone();
        }
        if let Some(s) = self.seed {
            c.seeds = vec![s];
        }
        if let Some(a) = &self.alpha {
            c.alpha = a.parse()?;
        }
        if let Some(h) = self.alpha_decay {
            c.alpha_decay = Some(h);
        }
        if let Some(l) = self.lambda {
            c.lambda = Bootstrap::Constant(l);
        }
        if let Some(l) = &self.learner {
            c.learner = l.parse()?;
        }
        if let Some(i) = &self.interest {
            c.interest = Some(parse_interest(i)?);
        }
        if let Some(s) = self.steps {
            c.length = RunLength::Steps(s);
        }
        if let Some(e) = self.episodes {
            c.length = RunLength::Episodes(e);
        }
        if let Some(e) = self.eval_every {
            c.eval_every = e;
        }
        if let Some(o) = &self.out {
            c.output = Some(o.clone());
        }
        if let Some(d) = self.divergence_threshold {
            c.divergence_threshold = d;
        }
        if let Some(w) = &self.rmse_weighting {
            c.rmse_weighting = match w.as_str() {
                "interest" => RmseWeighting::Interest,
                "uniform" => RmseWeighting::Uniform,
                other => return Err(Error::config(format!("unknown rmse weighting {other:?}"))),
            };
        }
        c.stop_on_divergence |= self.stop_on_divergence;
        c.parallel |= self.parallel;
        c.validate()?;
        Ok(c)
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Executes a parsed command. CSV goes to the configured output path, or to
/// stdout when none is set.
pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common } => {
            let config = common.load()?;
            let records = run_records(&config)?;
            emit(config.output.as_ref(), &curve_csv(&records))?;
            if let Some(last) = records.last() {
                eprintln!(
                    "final: seed={} step={} rmse={} diverged={}",
                    last.seed, last.step, last.rmse, last.diverged
                );
            }
        }
        Command::Sweep { common, alphas, lambdas } => {
            let mut config = common.load()?;
            let output = config.output.take();
            let alphas = alphas.iter().map(|a| a.parse()).collect::<Result<Vec<AlphaConfig>>>()?;
            let cells = sweep(&config, &alphas, &lambdas)?;
            for c in cells.iter().filter(|c| c.error.is_some()) {
                eprintln!("cell alpha={} lambda={}: {}", c.alpha, c.lambda, c.error.as_deref().unwrap_or(""));
            }
            emit(output.as_ref(), &sweep_csv(&cells))?;
        }
        Command::Compare { common, learners } => {
            let mut config = common.load()?;
            let output = config.output.take();
            let kinds = learners.iter().map(|l| l.parse()).collect::<Result<Vec<LearnerKind>>>()?;
            let rows = compare(&config, &kinds)?;
            emit(output.as_ref(), &compare_csv(&rows))?;
        }
        Command::Solve { env, interest } => {
            let interest = interest.as_deref().map(parse_interest).transpose()?;
            let spec = EnvironmentConfig::from_name(&env)?.build(interest.as_ref())?;
            let solution = solve_true_values(&spec)?;
            print!("{}", solve_csv(&spec, &solution));
        }
        Command::Trace { common } => {
            let config = common.load()?;
            let steps = common.steps.unwrap_or(config.length.count()) as usize;
            let rows = trace(&config, steps)?;
            emit(config.output.as_ref(), &trace_csv(&rows))?;
        }
    }
    Ok(())
}

/// Entry point for the binary: parses `std::env::args`, runs, and maps
/// errors to exit code 2.
pub fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}
