//! Deliberately naive reference implementations.
//!
//! None of these route through [`crate::learner::Learner`]; they exist so the
//! incremental learner can be checked against independently written code.

mod direct;
mod offpolicy;
mod solve;
mod td0;
mod true_online;

pub use direct::direct_recursion;
pub use offpolicy::{offpolicy_td_lambda, OffPolicyTd, OffPolicyTrajectory};
pub use solve::{solve_true_values, MrpSolution};
pub use td0::{emphatic_td0_step, EmphaticTd0, Td0Inputs};
pub use true_online::{true_online_td, TrueOnlineTd};

use crate::error::{Error, Result};
use crate::learner::{check_finite, GvfStep};

/// A recorded stream of steps together with the starting weights.
#[derive(Clone, Debug, PartialEq)]
pub struct StepHistory {
    pub steps: Vec<GvfStep>,
    pub initial_weights: Vec<f64>,
}

impl StepHistory {
    pub fn new(initial_weights: Vec<f64>) -> Self {
        Self { steps: Vec::new(), initial_weights }
    }

    pub fn dim(&self) -> usize {
        self.initial_weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_weights.is_empty() {
            return Err(Error::InvalidDimension("feature dimension must be at least 1".into()));
        }
        check_finite("initial_weights", &self.initial_weights)?;
        for (t, step) in self.steps.iter().enumerate() {
            step.validate(self.dim())
                .map_err(|e| Error::input(format!("step {t}: {e}")))?;
        }
        Ok(())
    }
}
