//! Incremental true online emphatic TD(λ).
//!
//! A [`Learner`] holds the weight vector θ, the dutch-style eligibility trace
//! `e`, and three scalars carried between calls: the follow-on trace `F`, the
//! last update projected onto the next feature vector `D`, and the discount
//! `γ` of the current time step. Each call to [`Learner::learn`] consumes one
//! [`GvfStep`] and applies, in order:
//!
//! ```text
//! δ ← R + γ′θᵀφ′ − θᵀφ
//! F ← F + I
//! M ← λI + (1 − λ)F
//! S ← ραM(1 − ργλφᵀe)
//! e ← ργλe + Sφ
//! Δ ← δe + D(e − ραMφ)
//! θ ← θ + Δ
//! D ← Δᵀφ′
//! F ← ργ′F
//! γ ← γ′
//! ```
//!
//! `D` starts at zero, which amounts to taking θ₋₁ = θ₀.

use crate::error::{Error, Result};

/// One time step of input: quantities at time `t` (α, I, λ, φ, ρ) together
/// with the outcome at `t + 1` (R, φ′, γ′).
#[derive(Clone, Debug, PartialEq)]
pub struct GvfStep {
    pub step_size: f64,
    pub interest: f64,
    pub bootstrap: f64,
    pub features: Vec<f64>,
    pub importance_ratio: f64,
    pub cumulant: f64,
    pub next_features: Vec<f64>,
    pub next_discount: f64,
}

impl GvfStep {
    /// Checks finiteness, scalar ranges, and that both feature vectors have
    /// length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        check_len("features", n, self.features.len())?;
        check_len("next_features", n, self.next_features.len())?;
        let scalars = [
            ("step_size", self.step_size),
            ("interest", self.interest),
            ("bootstrap", self.bootstrap),
            ("importance_ratio", self.importance_ratio),
            ("cumulant", self.cumulant),
            ("next_discount", self.next_discount),
        ];
        for (name, v) in scalars {
            if !v.is_finite() {
                return Err(Error::input(format!("{name} is not finite ({v})")));
            }
        }
        if self.step_size < 0.0 {
            return Err(Error::input(format!("step_size {} < 0", self.step_size)));
        }
        if self.interest < 0.0 {
            return Err(Error::input(format!("interest {} < 0", self.interest)));
        }
        if self.importance_ratio < 0.0 {
            return Err(Error::input(format!(
                "importance_ratio {} < 0",
                self.importance_ratio
            )));
        }
        check_unit("bootstrap", self.bootstrap)?;
        check_unit("next_discount", self.next_discount)?;
        check_finite("features", &self.features)?;
        check_finite("next_features", &self.next_features)?;
        Ok(())
    }
}

/// Temporaries of one `learn` call, exposed for hand checks and monitoring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepDiagnostics {
    /// δ
    pub td_error: f64,
    /// M = λI + (1 − λ)F_t
    pub emphasis: f64,
    /// F_t: the follow-on value after adding I and before the ργ′ decay.
    pub followon: f64,
    /// S, the scalar multiplying φ in the trace update.
    pub trace_scalar: f64,
    /// Set when any component of the state is non-finite after the update.
    pub diverged: bool,
}

/// True online emphatic TD(λ) learner state.
///
/// Learning requires `&mut self`; prediction borrows immutably, so the
/// borrow checker enforces the one-writer rule on a single instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Learner {
    weights: Vec<f64>,
    trace: Vec<f64>,
    followon: f64,
    update_dot: f64,
    stored_discount: f64,
    diverged: bool,
}

impl Learner {
    /// A learner over `n` features with zero weights.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("feature dimension must be at least 1".into()));
        }
        Ok(Self::from_parts(vec![0.0; n]))
    }

    /// A learner starting from arbitrary (finite) weights.
    pub fn with_weights(initial_weights: Vec<f64>) -> Result<Self> {
        if initial_weights.is_empty() {
            return Err(Error::InvalidDimension("feature dimension must be at least 1".into()));
        }
        check_finite("initial_weights", &initial_weights)?;
        Ok(Self::from_parts(initial_weights))
    }

    fn from_parts(weights: Vec<f64>) -> Self {
        let n = weights.len();
        Self {
            weights,
            trace: vec![0.0; n],
            followon: 0.0,
            update_dot: 0.0,
            stored_discount: 0.0,
            diverged: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn trace_copy(&self) -> Vec<f64> {
        self.trace.clone()
    }

    /// Between calls this is ρ_{t−1}γ_tF_{t−1}, i.e. the follow-on trace
    /// before the next interest is added.
    pub fn followon_value(&self) -> f64 {
        self.followon
    }

    /// (θ_t − θ_{t−1})ᵀφ_t for the upcoming step.
    pub fn update_dot(&self) -> f64 {
        self.update_dot
    }

    /// γ_t, carried over from the previous step's γ′.
    pub fn stored_discount(&self) -> f64 {
        self.stored_discount
    }

    /// True once any learn call has left a non-finite component behind.
    pub fn is_diverged(&self) -> bool {
        self.diverged
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        check_len("features", self.dim(), features.len())?;
        check_finite("features", features)?;
        Ok(dot(&self.weights, features))
    }

    pub fn learn(&mut self, step: &GvfStep) -> Result<StepDiagnostics> {
        step.validate(self.dim())?;
        let GvfStep {
            step_size: alpha,
            interest,
            bootstrap: lambda,
            importance_ratio: rho,
            cumulant,
            next_discount,
            ..
        } = *step;
        let phi = &step.features;
        let next_phi = &step.next_features;

        let (mut v, mut v_next, mut phi_e) = (0.0, 0.0, 0.0);
        for i in 0..self.dim() {
            v += self.weights[i] * phi[i];
            v_next += self.weights[i] * next_phi[i];
            phi_e += phi[i] * self.trace[i];
        }
        let delta = cumulant + next_discount * v_next - v;

        self.followon += interest;
        let followon = self.followon;
        let emphasis = lambda * interest + (1.0 - lambda) * followon;
        let decay = rho * self.stored_discount * lambda;
        let scaled = rho * alpha * emphasis;
        let s = scaled * (1.0 - decay * phi_e);

        let d = self.update_dot;
        let mut update_dot = 0.0;
        for i in 0..self.dim() {
            let e = decay * self.trace[i] + s * phi[i];
            let change = delta * e + d * (e - scaled * phi[i]);
            self.trace[i] = e;
            self.weights[i] += change;
            update_dot += change * next_phi[i];
        }
        self.update_dot = update_dot;
        self.followon *= rho * next_discount;
        self.stored_discount = next_discount;

        let finite = self.weights.iter().chain(&self.trace).all(|x| x.is_finite())
            && self.followon.is_finite()
            && self.update_dot.is_finite();
        if !finite {
            self.diverged = true;
        }
        Ok(StepDiagnostics {
            td_error: delta,
            emphasis,
            followon,
            trace_scalar: s,
            diverged: !finite,
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { what, expected, actual });
    }
    Ok(())
}

pub(crate) fn check_finite(what: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::input(format!("{what}[{i}] is not finite ({})", xs[i]))),
        None => Ok(()),
    }
}

fn check_unit(what: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::input(format!("{what} {x} outside [0, 1]")));
    }
    Ok(())
}
