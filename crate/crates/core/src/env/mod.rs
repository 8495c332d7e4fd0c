//! Small Markov reward processes that emit [`GvfStep`](crate::GvfStep)
//! streams.
//!
//! An [`MrpSpec`] is a finite-state process with separate behavior and target
//! transition matrices, per-transition cumulants, per-state discounts and
//! feature vectors, an interest schedule, and a start distribution.
//!
//! Episodic problems follow the single-sequence convention: a terminal
//! pseudo-state has discount 0, an all-zero feature row, and transitions to
//! the start distribution. A stream never stops at episode boundaries.

mod builders;
mod format;
mod stream;

pub use builders::{
    make_baird_star, make_baird_star_with, make_chain, ChainFeatures, BAIRD_DISCOUNT,
    BAIRD_INITIAL_WEIGHTS,
};
pub use format::{read_spec, write_spec};
pub use stream::{Bootstrap, Schedule, StepSize, StreamCursor};

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// How interest I_t is assigned.
#[derive(Clone, Debug, PartialEq)]
pub enum InterestSchedule {
    /// I_t = c at every non-terminal state.
    Constant(f64),
    /// I_t = 1 on the first step of each episode, 0 otherwise.
    FirstState,
    /// I_t = table[s].
    PerState(Vec<f64>),
    /// I_t = γ_1·γ_2···γ_k, the product of discounts since the episode
    /// started (γ^k for a constant discount).
    DiscountedInterest,
}

impl InterestSchedule {
    /// Static per-state weight used when scoring predictions: the schedule's
    /// value for per-state and constant schedules, the start distribution for
    /// first-state interest, and uniform for discounted interest.
    /// Terminal pseudo-states always get weight 0.
    pub fn state_weights(&self, spec: &MrpSpec) -> Vec<f64> {
        (0..spec.num_states())
            .map(|s| {
                if spec.is_terminal(s) {
                    return 0.0;
                }
                match self {
                    InterestSchedule::Constant(c) => *c,
                    InterestSchedule::FirstState => spec.start_distribution()[s],
                    InterestSchedule::PerState(table) => table[s],
                    InterestSchedule::DiscountedInterest => 1.0,
                }
            })
            .collect()
    }
}

/// Raw parts of an [`MrpSpec`]; call [`MrpSpec::new`] to validate.
#[derive(Clone, Debug, PartialEq)]
pub struct MrpParts {
    /// μ(s, s′), row-stochastic.
    pub behavior: Vec<Vec<f64>>,
    /// π(s, s′), row-stochastic.
    pub target: Vec<Vec<f64>>,
    /// R(s, s′).
    pub cumulant: Vec<Vec<f64>>,
    /// γ(s): the discount applied on arriving in `s`.
    pub discount: Vec<f64>,
    /// φ(s), one row per state.
    pub features: Vec<Vec<f64>>,
    pub terminal: Vec<bool>,
    pub interest: InterestSchedule,
    pub start: Vec<f64>,
}

/// A validated Markov reward process. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct MrpSpec {
    parts: MrpParts,
    num_features: usize,
}

impl MrpSpec {
    pub fn new(parts: MrpParts) -> Result<Self> {
        let num_features = validate(&parts)?;
        Ok(Self { parts, num_features })
    }

    pub fn num_states(&self) -> usize {
        self.parts.discount.len()
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn behavior(&self) -> &[Vec<f64>] {
        &self.parts.behavior
    }

    pub fn target(&self) -> &[Vec<f64>] {
        &self.parts.target
    }

    pub fn cumulant(&self) -> &[Vec<f64>] {
        &self.parts.cumulant
    }

    pub fn discount(&self) -> &[f64] {
        &self.parts.discount
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.parts.features
    }

    pub fn feature_row(&self, s: usize) -> &[f64] {
        &self.parts.features[s]
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.parts.terminal[s]
    }

    pub fn terminal(&self) -> &[bool] {
        &self.parts.terminal
    }

    pub fn interest(&self) -> &InterestSchedule {
        &self.parts.interest
    }

    pub fn start_distribution(&self) -> &[f64] {
        &self.parts.start
    }

    pub fn parts(&self) -> &MrpParts {
        &self.parts
    }

    pub fn into_parts(self) -> MrpParts {
        self.parts
    }

    /// Same process with a different interest schedule.
    pub fn with_interest(self, interest: InterestSchedule) -> Result<Self> {
        Self::new(MrpParts { interest, ..self.parts })
    }

    /// π(s, s′) / μ(s, s′); zero where the behavior never moves.
    pub fn importance_ratio(&self, s: usize, next: usize) -> f64 {
        let mu = self.parts.behavior[s][next];
        if mu > 0.0 {
            self.parts.target[s][next] / mu
        } else {
            0.0
        }
    }

    /// True when behavior and target transitions coincide, so every ρ is 1.
    pub fn is_on_policy(&self) -> bool {
        self.parts.behavior == self.parts.target
    }

    /// max_s φ(s)ᵀφ(s) over the feature table.
    pub fn max_feature_sq_norm(&self) -> f64 {
        self.parts
            .features
            .iter()
            .map(|row| row.iter().map(|x| x * x).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Folds a terminal payoff Z(s′) into the cumulant: every transition into
    /// `s′` gains (1 − γ(s′))·Z(s′). `payoffs` is indexed by state.
    pub fn with_terminal_payoffs(self, payoffs: &[f64]) -> Result<Self> {
        if payoffs.len() != self.num_states() {
            return Err(Error::DimensionMismatch {
                what: "terminal payoffs",
                expected: self.num_states(),
                actual: payoffs.len(),
            });
        }
        let mut parts = self.parts;
        for row in parts.cumulant.iter_mut() {
            for (next, r) in row.iter_mut().enumerate() {
                *r += (1.0 - parts.discount[next]) * payoffs[next];
            }
        }
        Self::new(parts)
    }
}

fn validate(p: &MrpParts) -> Result<usize> {
    let n = p.discount.len();
    if n == 0 {
        return Err(Error::spec("at least one state is required"));
    }
    let square = |name: &str, m: &[Vec<f64>]| -> Result<()> {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::spec(format!("{name} must be {n}x{n}")));
        }
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::spec(format!("{name} has non-finite entries")));
        }
        Ok(())
    };
    square("behavior", &p.behavior)?;
    square("target", &p.target)?;
    square("cumulant", &p.cumulant)?;
    for (name, m) in [("behavior", &p.behavior), ("target", &p.target)] {
        for (s, row) in m.iter().enumerate() {
            if row.iter().any(|&x| x < 0.0) {
                return Err(Error::spec(format!("{name} row {s} has negative entries")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::spec(format!("{name} row {s} sums to {sum}")));
            }
        }
    }
    for s in 0..n {
        for next in 0..n {
            if p.target[s][next] > 0.0 && p.behavior[s][next] == 0.0 {
                return Err(Error::spec(format!(
                    "behavior does not cover target transition {s} -> {next}"
                )));
            }
        }
    }
    if p.discount.iter().any(|g| !(0.0..=1.0).contains(g)) {
        return Err(Error::spec("discounts must lie in [0, 1]"));
    }
    if p.features.len() != n {
        return Err(Error::spec(format!("features must have {n} rows")));
    }
    let num_features = p.features[0].len();
    if num_features == 0 || p.features.iter().any(|row| row.len() != num_features) {
        return Err(Error::spec("feature rows must share a positive length"));
    }
    if p.features.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::spec("features have non-finite entries"));
    }
    if p.terminal.len() != n {
        return Err(Error::spec(format!("terminal flags must have {n} entries")));
    }
    if p.start.len() != n || p.start.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::spec("start distribution must be a probability vector over states"));
    }
    let start_sum: f64 = p.start.iter().sum();
    if (start_sum - 1.0).abs() > ROW_SUM_TOL {
        return Err(Error::spec(format!("start distribution sums to {start_sum}")));
    }
    for s in (0..n).filter(|&s| p.terminal[s]) {
        if p.discount[s] != 0.0 {
            return Err(Error::spec(format!("terminal state {s} must have discount 0")));
        }
        if p.features[s].iter().any(|&x| x != 0.0) {
            return Err(Error::spec(format!("terminal state {s} must have a zero feature row")));
        }
        if p.behavior[s] != p.start || p.target[s] != p.start {
            return Err(Error::spec(format!(
                "terminal state {s} must transition to the start distribution"
            )));
        }
        if p.start[s] > 0.0 && p.terminal.iter().any(|t| !t) {
            return Err(Error::spec(format!("terminal state {s} cannot be a start state")));
        }
    }
    match &p.interest {
        InterestSchedule::Constant(c) if !(c.is_finite() && *c >= 0.0) => {
            return Err(Error::spec("constant interest must be finite and nonnegative"));
        }
        InterestSchedule::PerState(t)
            if t.len() != n || t.iter().any(|x| !(x.is_finite() && *x >= 0.0)) =>
        {
            return Err(Error::spec(format!(
                "per-state interest needs {n} finite nonnegative entries"
            )));
        }
        _ => {}
    }
    if !discounting_terminates(&p.target, &p.discount) {
        return Err(Error::spec(
            "discounted target dynamics do not terminate (spectral radius of P_pi*Gamma is 1)",
        ));
    }
    Ok(num_features)
}

/// For the nonnegative substochastic matrix A(s, s′) = π(s, s′)γ(s′), the
/// spectral radius is below one iff every state can reach a row whose sum is
/// below one.
fn discounting_terminates(target: &[Vec<f64>], discount: &[f64]) -> bool {
    let n = discount.len();
    let mut leaks: Vec<bool> = (0..n)
        .map(|s| {
            let sum: f64 = (0..n).map(|j| target[s][j] * discount[j]).sum();
            sum < 1.0 - ROW_SUM_TOL
        })
        .collect();
    // backward closure over edges s -> j with positive weight
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if !leaks[s] && (0..n).any(|j| leaks[j] && target[s][j] * discount[j] > 0.0) {
                leaks[s] = true;
                changed = true;
            }
        }
    }
    leaks.into_iter().all(|x| x)
}
