use super::StepHistory;
use crate::error::Result;
use crate::learner::GvfStep;

/// Conventional off-policy TD(λ) with accumulating traces and no emphasis:
/// `e ← ρ(γλe + φ)`, `θ ← θ + αδe`. This is the baseline that is known to
/// diverge on adversarial off-policy problems.
#[derive(Clone, Debug)]
pub struct OffPolicyTd {
    weights: Vec<f64>,
    trace: Vec<f64>,
    discount: f64,
    diverged: bool,
}

impl OffPolicyTd {
    pub fn new(initial_weights: Vec<f64>) -> Self {
        let n = initial_weights.len();
        Self { weights: initial_weights, trace: vec![0.0; n], discount: 0.0, diverged: false }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged
    }

    pub fn update(&mut self, step: &GvfStep) -> Result<()> {
        step.validate(self.weights.len())?;
        let v: f64 = self.weights.iter().zip(&step.features).map(|(w, p)| w * p).sum();
        let v_next: f64 = self.weights.iter().zip(&step.next_features).map(|(w, p)| w * p).sum();
        let delta = step.cumulant + step.next_discount * v_next - v;
        let decay = self.discount * step.bootstrap;
        for (e, &p) in self.trace.iter_mut().zip(&step.features) {
            *e = step.importance_ratio * (decay * *e + p);
        }
        for (w, e) in self.weights.iter_mut().zip(&self.trace) {
            *w += step.step_size * delta * e;
        }
        self.discount = step.next_discount;
        if self.weights.iter().chain(&self.trace).any(|x| !x.is_finite()) {
            self.diverged = true;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OffPolicyTrajectory {
    /// θ_0..θ_T
    pub weights: Vec<Vec<f64>>,
    /// Index t of the first θ_t with a non-finite component.
    pub first_non_finite: Option<usize>,
}

pub fn offpolicy_td_lambda(history: &StepHistory) -> Result<OffPolicyTrajectory> {
    history.validate()?;
    let mut learner = OffPolicyTd::new(history.initial_weights.clone());
    let mut weights = vec![learner.weights().to_vec()];
    let mut first_non_finite = None;
    for step in &history.steps {
        learner.update(step)?;
        if first_non_finite.is_none() && learner.is_diverged() {
            first_non_finite = Some(weights.len());
        }
        weights.push(learner.weights().to_vec());
    }
    Ok(OffPolicyTrajectory { weights, first_non_finite })
}
