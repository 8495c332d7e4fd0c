#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toetd::oracles::StepHistory;
use toetd::{GvfStep, Learner};

/// Fixed values override the sampled ones.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pins {
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub interest: Option<f64>,
    pub discount: Option<f64>,
}

/// A consistent time series: step t's `next_features` is step t+1's
/// `features`. α ∈ [0,1], I ∈ {0,1}, λ ∈ [0,1], ρ ∈ [0,2], γ ∈ [0,1], φ
/// dense in [-1,1]ⁿ.
pub fn random_history(seed: u64, n: usize, len: usize, pins: Pins) -> StepHistory {
    let mut rng = StdRng::seed_from_u64(seed);
    let phis: Vec<Vec<f64>> = (0..=len)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    let mut history = StepHistory::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    for t in 0..len {
        let step = GvfStep {
            step_size: rng.gen_range(0.0..=1.0),
            interest: pins.interest.unwrap_or_else(|| rng.gen_range(0..=1) as f64),
            bootstrap: pins.lambda.unwrap_or_else(|| rng.gen_range(0.0..=1.0)),
            features: phis[t].clone(),
            importance_ratio: pins.rho.unwrap_or_else(|| rng.gen_range(0.0..=2.0)),
            cumulant: rng.gen_range(-1.0..=1.0),
            next_features: phis[t + 1].clone(),
            next_discount: pins.discount.unwrap_or_else(|| rng.gen_range(0.0..=1.0)),
        };
        history.steps.push(step);
    }
    history
}

/// θ_0..θ_T from the incremental learner.
pub fn learner_trajectory(history: &StepHistory) -> Vec<Vec<f64>> {
    let mut learner = Learner::with_weights(history.initial_weights.clone()).unwrap();
    let mut out = vec![learner.weights().to_vec()];
    for step in &history.steps {
        learner.learn(step).unwrap();
        out.push(learner.weights().to_vec());
    }
    out
}

/// max over t of ‖a_t − b_t‖∞ / max(1, ‖b_t‖∞).
pub fn max_rel_dev(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            x.iter()
                .zip(y)
                .map(|(p, q)| if p == q { 0.0 } else { (p - q).abs() })
                .map(|d| if d.is_nan() { f64::INFINITY } else { d })
                .fold(0.0, f64::max)
                / scale
        })
        .fold(0.0, f64::max)
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
