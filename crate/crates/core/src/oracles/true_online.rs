use super::StepHistory;
use crate::error::{Error, Result};
use crate::learner::GvfStep;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// On-policy true online TD(λ) with dutch traces and no emphasis, written
/// in the value-tracking form (van Seijen & Sutton, 2014):
///
/// ```text
/// V  = θᵀφ,   V′ = θᵀφ′,   δ = R + γ′V′ − V
/// e ← γλe + α(1 − γλ eᵀφ)φ
/// θ ← θ + (δ + V − V_old)e − α(V − V_old)φ
/// V_old ← V′
/// ```
///
/// The trace holds α so a time-varying step size is supported. Steps must be
/// on-policy with unit interest wherever the features are non-zero.
#[derive(Clone, Debug)]
pub struct TrueOnlineTd {
    weights: Vec<f64>,
    trace: Vec<f64>,
    old_value: Option<f64>,
    discount: f64,
}

impl TrueOnlineTd {
    pub fn new(initial_weights: Vec<f64>) -> Self {
        let n = initial_weights.len();
        Self {
            weights: initial_weights,
            trace: vec![0.0; n],
            old_value: None,
            discount: 0.0,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn update(&mut self, step: &GvfStep) -> Result<()> {
        step.validate(self.weights.len())?;
        if step.importance_ratio != 1.0 {
            return Err(Error::input(format!(
                "true online TD requires importance ratio 1, got {}",
                step.importance_ratio
            )));
        }
        // interest is irrelevant where the features vanish (terminal pseudo-states)
        if step.interest != 1.0 && step.features.iter().any(|&x| x != 0.0) {
            return Err(Error::input(format!(
                "true online TD requires interest 1, got {}",
                step.interest
            )));
        }
        let alpha = step.step_size;
        let phi = &step.features;
        let value = dot(&self.weights, phi);
        let next_value = dot(&self.weights, &step.next_features);
        let delta = step.cumulant + step.next_discount * next_value - value;
        let old_value = self.old_value.unwrap_or(value);

        let gl = self.discount * step.bootstrap;
        let e_phi = dot(&self.trace, phi);
        for (e, &p) in self.trace.iter_mut().zip(phi) {
            *e = gl * *e + alpha * (1.0 - gl * e_phi) * p;
        }
        let lead = delta + value - old_value;
        for i in 0..self.weights.len() {
            self.weights[i] += lead * self.trace[i] - alpha * (value - old_value) * phi[i];
        }
        self.old_value = Some(next_value);
        self.discount = step.next_discount;
        Ok(())
    }
}

/// Runs [`TrueOnlineTd`] over a history, returning θ_0..θ_T. Histories with
/// any ρ ≠ 1 or I ≠ 1 are rejected.
pub fn true_online_td(history: &StepHistory) -> Result<Vec<Vec<f64>>> {
    history.validate()?;
    let mut learner = TrueOnlineTd::new(history.initial_weights.clone());
    let mut out = vec![learner.weights().to_vec()];
    for step in &history.steps {
        learner.update(step)?;
        out.push(learner.weights().to_vec());
    }
    Ok(out)
}
