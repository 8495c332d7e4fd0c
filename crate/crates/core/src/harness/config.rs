//! Experiment configuration.
//!
//! Configs are TOML restricted to flat `key = value` pairs under three
//! section headers:
//!
//! ```toml
//! [environment]
//! name = "chain"          # chain | baird | file | steps
//! num_interior = 5        # chain
//! reward_right = 1.0      # chain
//! payoff_left = 0.0       # chain, optional terminal payoff folded into the cumulant
//! payoff_right = 0.0      # chain, optional
//! discount = 0.99         # baird
//! path = "spec.mrp"       # file
//! interest = "first-state" # optional override: constant | constant:<c> | first-state | discounted-interest
//!
//! [learner]
//! kind = "toetd"          # toetd | totd | etd0 | offpolicy_td
//! alpha = "auto"          # number, or "auto" = 0.1 / max_s φ(s)ᵀφ(s)
//! alpha_decay = 1000.0    # optional horizon τ: α_t = α·τ/(τ + t)
//! lambda = 0.9            # number, or one entry per state
//! initial_weights = [...] # optional; the Baird star defaults to (1,1,1,1,1,1,10,1)
//!
//! [run]
//! episodes = 100          # exactly one of steps / episodes
//! seeds = [1, 2, 3]
//! eval_every = 10         # in units of the run length (steps or episodes)
//! output = "curve.csv"
//! divergence_threshold = 1e6
//! stop_on_divergence = false
//! rmse_weighting = "interest"  # interest | uniform
//! parallel = false
//! ```
//!
//! The `steps` environment takes an inline `[[environment.step]]` array of
//! hand-written steps and is only usable with `trace`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::env::{
    make_baird_star_with, make_chain, read_spec, Bootstrap, ChainFeatures, InterestSchedule,
    MrpSpec, Schedule, StepSize, BAIRD_DISCOUNT, BAIRD_INITIAL_WEIGHTS,
};
use crate::error::{Error, Result};
use crate::learner::GvfStep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    /// True online emphatic TD(λ), the [`crate::Learner`].
    Toetd,
    /// On-policy true online TD(λ) reference.
    Totd,
    /// Emphatic TD(0) reference (ignores λ).
    Etd0,
    /// Conventional off-policy TD(λ) with accumulating traces.
    OffpolicyTd,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Toetd => "toetd",
            LearnerKind::Totd => "totd",
            LearnerKind::Etd0 => "etd0",
            LearnerKind::OffpolicyTd => "offpolicy_td",
        }
    }
}

impl std::str::FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "toetd" => Ok(LearnerKind::Toetd),
            "totd" => Ok(LearnerKind::Totd),
            "etd0" => Ok(LearnerKind::Etd0),
            "offpolicy_td" => Ok(LearnerKind::OffpolicyTd),
            other => Err(Error::config(format!("unknown learner {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EnvironmentConfig {
    Chain { num_interior: usize, reward_right: f64, payoff_left: f64, payoff_right: f64 },
    Baird { discount: f64 },
    File { path: PathBuf },
    Steps { steps: Vec<GvfStep> },
}

impl EnvironmentConfig {
    /// Parses a short environment name as accepted by `solve --env`:
    /// `chain`, `chain:N`, `baird`, `file:PATH`, or a path to a spec file.
    pub fn from_name(name: &str) -> Result<Self> {
        let chain = |n: usize| EnvironmentConfig::Chain {
            num_interior: n,
            reward_right: 1.0,
            payoff_left: 0.0,
            payoff_right: 0.0,
        };
        match name.split_once(':') {
            None if name == "chain" => Ok(chain(5)),
            None if name == "baird" => Ok(EnvironmentConfig::Baird { discount: BAIRD_DISCOUNT }),
            Some(("chain", n)) => n
                .parse()
                .map(chain)
                .map_err(|_| Error::config(format!("bad chain length {n:?}"))),
            Some(("file", p)) => Ok(EnvironmentConfig::File { path: p.into() }),
            _ if Path::new(name).is_file() => Ok(EnvironmentConfig::File { path: name.into() }),
            _ => Err(Error::config(format!("unknown environment {name:?}"))),
        }
    }

    /// Builds the MRP. `steps` environments have none.
    pub fn build(&self, interest: Option<&InterestSchedule>) -> Result<MrpSpec> {
        let spec = match self {
            EnvironmentConfig::Chain { num_interior, reward_right, payoff_left, payoff_right } => {
                let spec = make_chain(*num_interior, *reward_right, ChainFeatures::Tabular)?;
                if *payoff_left != 0.0 || *payoff_right != 0.0 {
                    let mut z = vec![0.0; spec.num_states()];
                    z[0] = *payoff_left;
                    z[num_interior + 1] = *payoff_right;
                    spec.with_terminal_payoffs(&z)?
                } else {
                    spec
                }
            }
            EnvironmentConfig::Baird { discount } => make_baird_star_with(*discount)?,
            EnvironmentConfig::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| Error::Io { path: path.clone(), source })?;
                read_spec(&text)?
            }
            EnvironmentConfig::Steps { .. } => {
                return Err(Error::config("the `steps` environment can only be traced"))
            }
        };
        match interest {
            Some(i) => spec.with_interest(i.clone()),
            None => Ok(spec),
        }
    }

    fn default_weights(&self) -> Option<Vec<f64>> {
        match self {
            EnvironmentConfig::Baird { .. } => Some(BAIRD_INITIAL_WEIGHTS.to_vec()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaConfig {
    Fixed(f64),
    /// 0.1 / max_s φ(s)ᵀφ(s)
    Auto,
}

impl std::str::FromStr for AlphaConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(AlphaConfig::Auto),
            x => x
                .parse()
                .map(AlphaConfig::Fixed)
                .map_err(|_| Error::config(format!("alpha must be a number or \"auto\", got {x:?}"))),
        }
    }
}

impl std::fmt::Display for AlphaConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaConfig::Fixed(a) => write!(f, "{a}"),
            AlphaConfig::Auto => f.write_str("auto"),
        }
    }
}

/// Resolves `"auto"` against a feature table.
pub fn auto_step_size(spec: &MrpSpec) -> Result<f64> {
    let m = spec.max_feature_sq_norm();
    if m > 0.0 {
        Ok(0.1 / m)
    } else {
        Err(Error::config("alpha = \"auto\" needs at least one nonzero feature row"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunLength {
    Steps(u64),
    Episodes(u64),
}

impl RunLength {
    pub fn count(self) -> u64 {
        match self {
            RunLength::Steps(n) | RunLength::Episodes(n) => n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmseWeighting {
    /// Weight states by the interest schedule's per-state weights.
    Interest,
    /// Equal weight on every non-terminal state.
    Uniform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub environment: EnvironmentConfig,
    pub interest: Option<InterestSchedule>,
    pub learner: LearnerKind,
    pub alpha: AlphaConfig,
    pub alpha_decay: Option<f64>,
    pub lambda: Bootstrap,
    pub initial_weights: Option<Vec<f64>>,
    pub length: RunLength,
    pub seeds: Vec<u64>,
    pub eval_every: u64,
    pub output: Option<PathBuf>,
    pub divergence_threshold: f64,
    pub stop_on_divergence: bool,
    pub rmse_weighting: RmseWeighting,
    pub parallel: bool,
}

pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 1e6;

impl ExperimentConfig {
    /// A config with default run settings (one seed, evaluation every unit).
    pub fn new(environment: EnvironmentConfig, learner: LearnerKind, length: RunLength) -> Self {
        Self {
            environment,
            interest: None,
            learner,
            alpha: AlphaConfig::Auto,
            alpha_decay: None,
            lambda: Bootstrap::Constant(0.0),
            initial_weights: None,
            length,
            seeds: vec![0],
            eval_every: 1,
            output: None,
            divergence_threshold: DEFAULT_DIVERGENCE_THRESHOLD,
            stop_on_divergence: false,
            rmse_weighting: RmseWeighting::Interest,
            parallel: false,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        raw.into_config()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::config("seeds must not be empty"));
        }
        if self.length.count() == 0 {
            return Err(Error::config("steps/episodes must be positive"));
        }
        if self.eval_every == 0 {
            return Err(Error::config("eval_every must be positive"));
        }
        if let AlphaConfig::Fixed(a) = self.alpha {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::config(format!("alpha {a} must be finite and >= 0")));
            }
        }
        if let Some(h) = self.alpha_decay {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::config("alpha_decay must be positive"));
            }
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(Error::config("divergence_threshold must be positive"));
        }
        Ok(())
    }

    /// The MRP after applying any interest override.
    pub fn build_spec(&self) -> Result<MrpSpec> {
        self.environment.build(self.interest.as_ref())
    }

    /// Resolves `"auto"` and the decay horizon into a stream schedule.
    pub fn schedule(&self, spec: &MrpSpec) -> Result<Schedule> {
        let alpha = match self.alpha {
            AlphaConfig::Fixed(a) => a,
            AlphaConfig::Auto => auto_step_size(spec)?,
        };
        let step_size = match self.alpha_decay {
            Some(horizon) => StepSize::Decaying { initial: alpha, horizon },
            None => StepSize::Constant(alpha),
        };
        let schedule = Schedule { step_size, bootstrap: self.lambda.clone() };
        schedule.validate(spec.num_states())?;
        Ok(schedule)
    }

    /// Explicit initial weights, else the environment's customary ones, else
    /// zeros.
    pub fn initial_weights(&self, n: usize) -> Result<Vec<f64>> {
        let w = self
            .initial_weights
            .clone()
            .or_else(|| self.environment.default_weights())
            .unwrap_or_else(|| vec![0.0; n]);
        if w.len() != n {
            return Err(Error::config(format!(
                "initial_weights has {} entries, environment has {n} features",
                w.len()
            )));
        }
        Ok(w)
    }
}

pub fn parse_interest(s: &str) -> Result<InterestSchedule> {
    match s.trim() {
        "constant" => Ok(InterestSchedule::Constant(1.0)),
        "first-state" => Ok(InterestSchedule::FirstState),
        "discounted-interest" => Ok(InterestSchedule::DiscountedInterest),
        other => match other.strip_prefix("constant:") {
            Some(c) => c
                .parse()
                .map(InterestSchedule::Constant)
                .map_err(|_| Error::config(format!("bad interest constant {c:?}"))),
            None => Err(Error::config(format!("unknown interest schedule {other:?}"))),
        },
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    environment: RawEnvironment,
    learner: RawLearner,
    run: RawRun,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvironment {
    name: String,
    num_interior: Option<usize>,
    reward_right: Option<f64>,
    payoff_left: Option<f64>,
    payoff_right: Option<f64>,
    discount: Option<f64>,
    path: Option<PathBuf>,
    interest: Option<String>,
    #[serde(default)]
    step: Vec<RawStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    alpha: f64,
    interest: f64,
    lambda: f64,
    features: Vec<f64>,
    rho: f64,
    cumulant: f64,
    next_features: Vec<f64>,
    next_discount: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumOrWord {
    Num(f64),
    Word(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLambda {
    Num(f64),
    Table(Vec<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLearner {
    kind: String,
    alpha: Option<RawNumOrWord>,
    alpha_decay: Option<f64>,
    lambda: Option<RawLambda>,
    initial_weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    steps: Option<u64>,
    episodes: Option<u64>,
    seeds: Option<Vec<u64>>,
    eval_every: Option<u64>,
    output: Option<PathBuf>,
    divergence_threshold: Option<f64>,
    stop_on_divergence: Option<bool>,
    rmse_weighting: Option<String>,
    parallel: Option<bool>,
}

impl RawConfig {
    fn into_config(self) -> Result<ExperimentConfig> {
        let e = self.environment;
        let environment = match e.name.as_str() {
            "chain" => EnvironmentConfig::Chain {
                num_interior: e.num_interior.unwrap_or(5),
                reward_right: e.reward_right.unwrap_or(1.0),
                payoff_left: e.payoff_left.unwrap_or(0.0),
                payoff_right: e.payoff_right.unwrap_or(0.0),
            },
            "baird" => EnvironmentConfig::Baird { discount: e.discount.unwrap_or(BAIRD_DISCOUNT) },
            "file" => EnvironmentConfig::File {
                path: e.path.ok_or_else(|| Error::config("file environment needs `path`"))?,
            },
            "steps" => EnvironmentConfig::Steps {
                steps: e
                    .step
                    .into_iter()
                    .map(|s| GvfStep {
                        step_size: s.alpha,
                        interest: s.interest,
                        bootstrap: s.lambda,
                        features: s.features,
                        importance_ratio: s.rho,
                        cumulant: s.cumulant,
                        next_features: s.next_features,
                        next_discount: s.next_discount,
                    })
                    .collect(),
            },
            other => return Err(Error::config(format!("unknown environment {other:?}"))),
        };
        let interest = e.interest.as_deref().map(parse_interest).transpose()?;

        let l = self.learner;
        let alpha = match l.alpha {
            None => AlphaConfig::Auto,
            Some(RawNumOrWord::Num(a)) => AlphaConfig::Fixed(a),
            Some(RawNumOrWord::Word(w)) => w.parse()?,
        };
        let lambda = match l.lambda {
            None => Bootstrap::Constant(0.0),
            Some(RawLambda::Num(x)) => Bootstrap::Constant(x),
            Some(RawLambda::Table(t)) => Bootstrap::PerState(t),
        };

        let r = self.run;
        let length = match (r.steps, r.episodes) {
            (Some(s), None) => RunLength::Steps(s),
            (None, Some(e)) => RunLength::Episodes(e),
            _ => return Err(Error::config("exactly one of run.steps and run.episodes must be set")),
        };
        let rmse_weighting = match r.rmse_weighting.as_deref() {
            None | Some("interest") => RmseWeighting::Interest,
            Some("uniform") => RmseWeighting::Uniform,
            Some(other) => return Err(Error::config(format!("unknown rmse_weighting {other:?}"))),
        };
        let config = ExperimentConfig {
            environment,
            interest,
            learner: l.kind.parse()?,
            alpha,
            alpha_decay: l.alpha_decay,
            lambda,
            initial_weights: l.initial_weights,
            length,
            seeds: r.seeds.unwrap_or_else(|| vec![0]),
            eval_every: r.eval_every.unwrap_or(1),
            output: r.output,
            divergence_threshold: r.divergence_threshold.unwrap_or(DEFAULT_DIVERGENCE_THRESHOLD),
            stop_on_divergence: r.stop_on_divergence.unwrap_or(false),
            rmse_weighting,
            parallel: r.parallel.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}
