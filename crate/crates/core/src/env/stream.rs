use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{InterestSchedule, MrpSpec};
use crate::error::{Error, Result};
use crate::learner::GvfStep;

/// Step-size sequence α_t.
#[derive(Clone, Debug, PartialEq)]
pub enum StepSize {
    Constant(f64),
    /// α_t = initial · horizon / (horizon + t)
    Decaying { initial: f64, horizon: f64 },
}

impl StepSize {
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            StepSize::Constant(a) => a,
            StepSize::Decaying { initial, horizon } => initial * horizon / (horizon + t as f64),
        }
    }
}

/// Bootstrapping sequence λ_t.
#[derive(Clone, Debug, PartialEq)]
pub enum Bootstrap {
    Constant(f64),
    /// λ_t = table[S_t]
    PerState(Vec<f64>),
}

impl Bootstrap {
    pub fn at(&self, state: usize) -> f64 {
        match self {
            Bootstrap::Constant(l) => *l,
            Bootstrap::PerState(table) => table[state],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub step_size: StepSize,
    pub bootstrap: Bootstrap,
}

impl Schedule {
    pub fn constant(step_size: f64, bootstrap: f64) -> Self {
        Self { step_size: StepSize::Constant(step_size), bootstrap: Bootstrap::Constant(bootstrap) }
    }

    pub fn validate(&self, num_states: usize) -> Result<()> {
        match self.step_size {
            StepSize::Constant(a) if !(a.is_finite() && a >= 0.0) => {
                return Err(Error::input(format!("step size {a} must be finite and >= 0")))
            }
            StepSize::Decaying { initial, horizon }
                if !(initial.is_finite() && initial >= 0.0 && horizon.is_finite() && horizon > 0.0) =>
            {
                return Err(Error::input("decaying step size needs initial >= 0 and horizon > 0"))
            }
            _ => {}
        }
        let unit = |l: f64| (0.0..=1.0).contains(&l);
        match &self.bootstrap {
            Bootstrap::Constant(l) if !unit(*l) => {
                Err(Error::input(format!("lambda {l} outside [0, 1]")))
            }
            Bootstrap::PerState(t) if t.len() != num_states || !t.iter().all(|&l| unit(l)) => {
                Err(Error::input(format!("per-state lambda needs {num_states} entries in [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// Position in a seeded stream over one [`MrpSpec`].
///
/// Randomness comes from ChaCha8 seeded with `ChaCha8Rng::seed_from_u64`;
/// each transition draws one `u64` and maps its top 53 bits to a uniform
/// in `[0, 1)`, which is then inverted through the row's cumulative
/// distribution. The same `(spec, schedule, seed)` always yields the same
/// step sequence on every platform.
#[derive(Clone, Debug)]
pub struct StreamCursor<'a> {
    spec: &'a MrpSpec,
    schedule: Schedule,
    rng: ChaCha8Rng,
    state: usize,
    step_index: u64,
    episode_index: u64,
    episode_time: u64,
    discount_product: f64,
}

impl<'a> StreamCursor<'a> {
    pub fn new(spec: &'a MrpSpec, schedule: Schedule, seed: u64) -> Result<Self> {
        schedule.validate(spec.num_states())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = sample(&mut rng, spec.start_distribution());
        Ok(Self {
            spec,
            schedule,
            rng,
            state,
            step_index: 0,
            episode_index: 0,
            episode_time: 0,
            discount_product: 1.0,
        })
    }

    pub fn spec(&self) -> &'a MrpSpec {
        self.spec
    }

    pub fn state(&self) -> usize {
        self.state
    }

    /// Number of steps emitted so far.
    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    /// Number of completed episodes (transitions into a terminal state).
    pub fn episode_index(&self) -> u64 {
        self.episode_index
    }

    fn interest(&self, s: usize) -> f64 {
        if self.spec.is_terminal(s) {
            return 0.0;
        }
        match self.spec.interest() {
            InterestSchedule::Constant(c) => *c,
            InterestSchedule::FirstState => {
                if self.episode_time == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            InterestSchedule::PerState(t) => t[s],
            InterestSchedule::DiscountedInterest => self.discount_product,
        }
    }

    /// Samples S_{t+1} ~ μ(S_t, ·) and emits the step for time t.
    pub fn next_step(&mut self) -> GvfStep {
        let spec = self.spec;
        let s = self.state;
        let next = sample(&mut self.rng, &spec.behavior()[s]);
        let step = GvfStep {
            step_size: self.schedule.step_size.at(self.step_index),
            interest: self.interest(s),
            bootstrap: self.schedule.bootstrap.at(s),
            features: spec.feature_row(s).to_vec(),
            importance_ratio: spec.importance_ratio(s, next),
            cumulant: spec.cumulant()[s][next],
            next_features: spec.feature_row(next).to_vec(),
            next_discount: spec.discount()[next],
        };
        if spec.is_terminal(s) {
            self.episode_time = 0;
            self.discount_product = 1.0;
        } else {
            self.episode_time += 1;
            self.discount_product *= spec.discount()[next];
        }
        if spec.is_terminal(next) {
            self.episode_index += 1;
        }
        self.state = next;
        self.step_index += 1;
        step
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u = uniform(rng);
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}
