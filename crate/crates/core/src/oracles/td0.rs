use crate::error::Result;
use crate::learner::GvfStep;

/// Inputs to a single emphatic TD(0) update. `discount` is γ_t (the
/// discount of the current time step); `prev_followon` and `prev_ratio` are
/// F_{t−1} and ρ_{t−1}.
#[derive(Clone, Copy, Debug)]
pub struct Td0Inputs<'a> {
    pub weights: &'a [f64],
    pub features: &'a [f64],
    pub next_features: &'a [f64],
    pub cumulant: f64,
    pub next_discount: f64,
    pub discount: f64,
    pub importance_ratio: f64,
    pub step_size: f64,
    pub interest: f64,
    pub prev_followon: f64,
    pub prev_ratio: f64,
}

/// Emphatic TD(0): `F = ρ_{t−1}γ_tF_{t−1} + I` and `θ′ = θ + αFρδφ`.
/// Returns `(θ′, F)`.
pub fn emphatic_td0_step(x: Td0Inputs<'_>) -> (Vec<f64>, f64) {
    let v: f64 = x.weights.iter().zip(x.features).map(|(w, p)| w * p).sum();
    let v_next: f64 = x.weights.iter().zip(x.next_features).map(|(w, p)| w * p).sum();
    let delta = x.cumulant + x.next_discount * v_next - v;
    let followon = x.prev_ratio * x.discount * x.prev_followon + x.interest;
    let theta = x
        .weights
        .iter()
        .zip(x.features)
        .map(|(w, p)| w + x.step_size * followon * x.importance_ratio * delta * p)
        .collect();
    (theta, followon)
}

/// Stepwise wrapper around [`emphatic_td0_step`] that carries F, ρ and γ.
#[derive(Clone, Debug)]
pub struct EmphaticTd0 {
    weights: Vec<f64>,
    followon: f64,
    prev_ratio: f64,
    discount: f64,
}

impl EmphaticTd0 {
    pub fn new(initial_weights: Vec<f64>) -> Self {
        Self { weights: initial_weights, followon: 0.0, prev_ratio: 0.0, discount: 0.0 }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The most recent F_t.
    pub fn followon(&self) -> f64 {
        self.followon
    }

    pub fn update(&mut self, step: &GvfStep) -> Result<()> {
        step.validate(self.weights.len())?;
        let (theta, followon) = emphatic_td0_step(Td0Inputs {
            weights: &self.weights,
            features: &step.features,
            next_features: &step.next_features,
            cumulant: step.cumulant,
            next_discount: step.next_discount,
            discount: self.discount,
            importance_ratio: step.importance_ratio,
            step_size: step.step_size,
            interest: step.interest,
            prev_followon: self.followon,
            prev_ratio: self.prev_ratio,
        });
        self.weights = theta;
        self.followon = followon;
        self.prev_ratio = step.importance_ratio;
        self.discount = step.next_discount;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base<'a>(w: &'a [f64], phi: &'a [f64]) -> Td0Inputs<'a> {
        Td0Inputs {
            weights: w,
            features: phi,
            next_features: phi,
            cumulant: 1.0,
            next_discount: 0.5,
            discount: 0.0,
            importance_ratio: 1.0,
            step_size: 0.5,
            interest: 1.0,
            prev_followon: 0.0,
            prev_ratio: 0.0,
        }
    }

    #[test]
    fn matches_first_hand_step() {
        let (theta, f) = emphatic_td0_step(base(&[0.0], &[1.0]));
        assert_eq!(theta, vec![0.5]);
        assert_eq!(f, 1.0);
    }

    #[test]
    fn zero_emphasis_or_ratio_is_a_no_op() {
        let w = [0.3, -1.2];
        let phi = [1.0, 2.0];
        let (theta, f) = emphatic_td0_step(Td0Inputs { interest: 0.0, ..base(&w, &phi) });
        assert_eq!(f, 0.0);
        assert_eq!(theta, w.to_vec());
        let (theta, _) = emphatic_td0_step(Td0Inputs { importance_ratio: 0.0, ..base(&w, &phi) });
        assert_eq!(theta, w.to_vec());
    }
}
