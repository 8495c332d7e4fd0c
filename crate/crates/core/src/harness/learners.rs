use super::config::LearnerKind;
use crate::error::Result;
use crate::learner::{GvfStep, Learner};
use crate::oracles::{EmphaticTd0, OffPolicyTd, TrueOnlineTd};

/// Any of the learners the harness can drive.
#[derive(Clone, Debug)]
pub enum AnyLearner {
    Toetd(Learner),
    Totd(TrueOnlineTd),
    Etd0(EmphaticTd0),
    OffpolicyTd(OffPolicyTd),
}

impl AnyLearner {
    pub fn new(kind: LearnerKind, initial_weights: Vec<f64>) -> Result<Self> {
        Ok(match kind {
            LearnerKind::Toetd => AnyLearner::Toetd(Learner::with_weights(initial_weights)?),
            LearnerKind::Totd => AnyLearner::Totd(TrueOnlineTd::new(initial_weights)),
            LearnerKind::Etd0 => AnyLearner::Etd0(EmphaticTd0::new(initial_weights)),
            LearnerKind::OffpolicyTd => AnyLearner::OffpolicyTd(OffPolicyTd::new(initial_weights)),
        })
    }

    pub fn learn(&mut self, step: &GvfStep) -> Result<()> {
        match self {
            AnyLearner::Toetd(l) => l.learn(step).map(|_| ()),
            AnyLearner::Totd(l) => l.update(step),
            AnyLearner::Etd0(l) => l.update(step),
            AnyLearner::OffpolicyTd(l) => l.update(step),
        }
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            AnyLearner::Toetd(l) => l.weights(),
            AnyLearner::Totd(l) => l.weights(),
            AnyLearner::Etd0(l) => l.weights(),
            AnyLearner::OffpolicyTd(l) => l.weights(),
        }
    }

    /// The follow-on trace where the learner has one, else 0.
    pub fn followon(&self) -> f64 {
        match self {
            AnyLearner::Toetd(l) => l.followon_value(),
            AnyLearner::Etd0(l) => l.followon(),
            AnyLearner::Totd(_) | AnyLearner::OffpolicyTd(_) => 0.0,
        }
    }

    pub fn predict(&self, features: &[f64]) -> f64 {
        self.weights().iter().zip(features).map(|(w, p)| w * p).sum()
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights().iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn is_non_finite(&self) -> bool {
        self.weights().iter().any(|w| !w.is_finite())
            || !self.followon().is_finite()
            || match self {
                AnyLearner::Toetd(l) => l.is_diverged(),
                AnyLearner::OffpolicyTd(l) => l.is_diverged(),
                _ => false,
            }
    }
}
