use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::{
    AlphaConfig, EnvironmentConfig, ExperimentConfig, LearnerKind, RmseWeighting, RunLength,
};
use super::learners::AnyLearner;
use crate::env::{Bootstrap, MrpSpec, StreamCursor};
use crate::error::{Error, Result};
use crate::learner::{Learner, StepDiagnostics};
use crate::oracles::{solve_true_values, MrpSolution};

pub const CURVE_HEADER: &str = "seed,step,episode,rmse,weight_norm,followon,diverged";
pub const SWEEP_HEADER: &str = "alpha,lambda,mean_rmse,std_rmse,frac_diverged";

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRecord {
    pub seed: u64,
    pub step: u64,
    pub episode: u64,
    pub rmse: f64,
    pub weight_norm: f64,
    pub followon: f64,
    /// Sticky: once a run diverges every later record is flagged.
    pub diverged: bool,
}

impl CurveRecord {
    fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.seed, self.step, self.episode, self.rmse, self.weight_norm, self.followon, self.diverged
        )
    }
}

/// Interest-weighted (or uniform) RMS error against the exact values.
#[derive(Clone, Debug)]
pub struct Evaluator {
    rows: Vec<(f64, Vec<f64>, f64)>,
}

impl Evaluator {
    pub fn new(spec: &MrpSpec, solution: &MrpSolution, weighting: RmseWeighting) -> Result<Self> {
        let weights = match weighting {
            RmseWeighting::Interest => spec.interest().state_weights(spec),
            RmseWeighting::Uniform => (0..spec.num_states())
                .map(|s| if spec.is_terminal(s) { 0.0 } else { 1.0 })
                .collect(),
        };
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::config("RMSE weights are all zero for this environment"));
        }
        let rows = (0..spec.num_states())
            .filter(|&s| weights[s] > 0.0)
            .map(|s| (weights[s] / total, spec.feature_row(s).to_vec(), solution.values[s]))
            .collect();
        Ok(Self { rows })
    }

    pub fn rmse(&self, weights: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|(w, phi, v)| {
                let pred: f64 = weights.iter().zip(phi).map(|(a, b)| a * b).sum();
                w * (pred - v) * (pred - v)
            })
            .sum::<f64>()
            .sqrt()
    }
}

struct Prepared {
    spec: MrpSpec,
    evaluator: Evaluator,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    config.validate()?;
    let spec = config.build_spec()?;
    if let RunLength::Episodes(_) = config.length {
        if !spec.terminal().iter().any(|&t| t) {
            return Err(Error::config("episodes require an environment with terminal states"));
        }
    }
    let solution = solve_true_values(&spec)?;
    let evaluator = Evaluator::new(&spec, &solution, config.rmse_weighting)?;
    Ok(Prepared { spec, evaluator })
}

fn run_seed(config: &ExperimentConfig, prep: &Prepared, kind: LearnerKind, seed: u64) -> Result<Vec<CurveRecord>> {
    let spec = &prep.spec;
    let schedule = config.schedule(spec)?;
    let mut cursor = StreamCursor::new(spec, schedule, seed)?;
    let mut learner = AnyLearner::new(kind, config.initial_weights(spec.num_features())?)?;
    let mut records = Vec::new();
    let mut diverged = false;
    let total = config.length.count();
    loop {
        let episodes_before = cursor.episode_index();
        let step = cursor.next_step();
        learner.learn(&step)?;

        let (progress, advanced) = match config.length {
            RunLength::Steps(_) => (cursor.step_index(), true),
            RunLength::Episodes(_) => (cursor.episode_index(), cursor.episode_index() > episodes_before),
        };
        let norm = learner.weight_norm();
        diverged |= learner.is_non_finite() || !(norm <= config.divergence_threshold);
        let done = progress >= total;
        let stop = done || (diverged && config.stop_on_divergence);
        if (advanced && progress % config.eval_every == 0) || stop {
            records.push(CurveRecord {
                seed,
                step: cursor.step_index(),
                episode: cursor.episode_index(),
                rmse: prep.evaluator.rmse(learner.weights()),
                weight_norm: norm,
                followon: learner.followon(),
                diverged,
            });
        }
        if stop {
            return Ok(records);
        }
    }
}

fn run_kind(config: &ExperimentConfig, prep: &Prepared, kind: LearnerKind) -> Result<Vec<CurveRecord>> {
    let per_seed: Vec<Result<Vec<CurveRecord>>> = if config.parallel {
        config.seeds.par_iter().map(|&s| run_seed(config, prep, kind, s)).collect()
    } else {
        config.seeds.iter().map(|&s| run_seed(config, prep, kind, s)).collect()
    };
    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?);
    }
    Ok(out)
}

/// Runs every seed and returns the learning curves without writing files.
pub fn run_records(config: &ExperimentConfig) -> Result<Vec<CurveRecord>> {
    let prep = prepare(config)?;
    run_kind(config, &prep, config.learner)
}

/// Runs every seed, writing the curve CSV to `config.output` when set.
pub fn run(config: &ExperimentConfig) -> Result<Vec<CurveRecord>> {
    let records = run_records(config)?;
    if let Some(path) = &config.output {
        write_file(path, &curve_csv(&records))?;
    }
    Ok(records)
}

pub fn curve_csv(records: &[CurveRecord]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_fields());
    }
    out
}

/// Feeds the same seeded streams to several learners. The environment
/// trajectory depends only on the environment, schedule and seed.
pub fn compare(config: &ExperimentConfig, learners: &[LearnerKind]) -> Result<Vec<(LearnerKind, CurveRecord)>> {
    if learners.is_empty() {
        return Err(Error::config("compare needs at least one learner"));
    }
    let prep = prepare(config)?;
    let mut out = Vec::new();
    for &kind in learners {
        out.extend(run_kind(config, &prep, kind)?.into_iter().map(|r| (kind, r)));
    }
    if let Some(path) = &config.output {
        write_file(path, &compare_csv(&out))?;
    }
    Ok(out)
}

pub fn compare_csv(rows: &[(LearnerKind, CurveRecord)]) -> String {
    let mut out = format!("learner,{CURVE_HEADER}\n");
    for (kind, r) in rows {
        let _ = writeln!(out, "{},{}", kind.name(), r.csv_fields());
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    /// Resolved step size (α after resolving "auto").
    pub alpha: f64,
    pub lambda: f64,
    pub mean_rmse: f64,
    pub std_rmse: f64,
    pub frac_diverged: f64,
    pub error: Option<String>,
}

/// Runs the α × λ grid, summarizing each cell by the final RMSE of each seed.
/// A failing cell is reported with NaN statistics and its error message; the
/// other cells still run.
pub fn sweep(config: &ExperimentConfig, alphas: &[AlphaConfig], lambdas: &[f64]) -> Result<Vec<SweepCell>> {
    if alphas.is_empty() || lambdas.is_empty() {
        return Err(Error::config("sweep grids must be non-empty"));
    }
    config.validate()?;
    let spec = config.build_spec()?;
    let grid: Vec<(AlphaConfig, f64)> = alphas
        .iter()
        .flat_map(|&a| lambdas.iter().map(move |&l| (a, l)))
        .collect();
    let cell = |&(alpha, lambda): &(AlphaConfig, f64)| -> SweepCell {
        let resolved = match alpha {
            AlphaConfig::Fixed(a) => a,
            AlphaConfig::Auto => super::config::auto_step_size(&spec).unwrap_or(f64::NAN),
        };
        let mut c = config.clone();
        c.alpha = alpha;
        c.lambda = Bootstrap::Constant(lambda);
        c.output = None;
        c.parallel = false;
        match run_records(&c) {
            Ok(records) => summarize(resolved, lambda, &c.seeds, &records),
            Err(e) => SweepCell {
                alpha: resolved,
                lambda,
                mean_rmse: f64::NAN,
                std_rmse: f64::NAN,
                frac_diverged: f64::NAN,
                error: Some(e.to_string()),
            },
        }
    };
    let cells: Vec<SweepCell> = if config.parallel {
        grid.par_iter().map(cell).collect()
    } else {
        grid.iter().map(cell).collect()
    };
    if let Some(path) = &config.output {
        write_file(path, &sweep_csv(&cells))?;
    }
    Ok(cells)
}

fn summarize(alpha: f64, lambda: f64, seeds: &[u64], records: &[CurveRecord]) -> SweepCell {
    let finals: Vec<&CurveRecord> = seeds
        .iter()
        .filter_map(|s| records.iter().rev().find(|r| r.seed == *s))
        .collect();
    let n = finals.len() as f64;
    let mean = finals.iter().map(|r| r.rmse).sum::<f64>() / n;
    let std = if finals.len() > 1 {
        (finals.iter().map(|r| (r.rmse - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let frac = finals.iter().filter(|r| r.diverged).count() as f64 / n;
    SweepCell { alpha, lambda, mean_rmse: mean, std_rmse: std, frac_diverged: frac, error: None }
}

pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.alpha, c.lambda, c.mean_rmse, c.std_rmse, c.frac_diverged
        );
    }
    out
}

/// One row of a `trace` listing: the step's temporaries and the learner
/// state after the step.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    pub diagnostics: StepDiagnostics,
    pub weights: Vec<f64>,
    pub trace: Vec<f64>,
    pub update_dot: f64,
    pub followon: f64,
    pub stored_discount: f64,
}

/// Runs the core learner for up to `steps` steps of the configured stream
/// (the first seed) or of the inline step list.
pub fn trace(config: &ExperimentConfig, steps: usize) -> Result<Vec<TraceRow>> {
    let inputs = match &config.environment {
        EnvironmentConfig::Steps { steps: list } => list.iter().take(steps).cloned().collect(),
        _ => {
            let spec = config.build_spec()?;
            let mut cursor = StreamCursor::new(&spec, config.schedule(&spec)?, config.seeds[0])?;
            (0..steps).map(|_| cursor.next_step()).collect::<Vec<_>>()
        }
    };
    let n = match inputs.first() {
        Some(s) => s.features.len(),
        None => return Ok(Vec::new()),
    };
    let mut learner = Learner::with_weights(config.initial_weights(n)?)?;
    let mut rows = Vec::with_capacity(inputs.len());
    for (t, step) in inputs.iter().enumerate() {
        let diagnostics = learner.learn(step)?;
        rows.push(TraceRow {
            t,
            diagnostics,
            weights: learner.weights().to_vec(),
            trace: learner.trace_copy(),
            update_dot: learner.update_dot(),
            followon: learner.followon_value(),
            stored_discount: learner.stored_discount(),
        });
    }
    Ok(rows)
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out =
        String::from("t,td_error,emphasis,followon_t,trace_scalar,weights,trace,update_dot,followon,stored_discount\n");
    for r in rows {
        let d = &r.diagnostics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.t,
            d.td_error,
            d.emphasis,
            d.followon,
            d.trace_scalar,
            join(&r.weights),
            join(&r.trace),
            r.update_dot,
            r.followon,
            r.stored_discount
        );
    }
    out
}

pub fn solve_csv(spec: &MrpSpec, solution: &MrpSolution) -> String {
    let mut out = String::from("state,value,terminal\n");
    for (s, v) in solution.values.iter().enumerate() {
        let _ = writeln!(out, "{s},{v},{}", spec.is_terminal(s));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
