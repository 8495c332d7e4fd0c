use nalgebra::{DMatrix, DVector};

use crate::env::MrpSpec;
use crate::error::{Error, Result};

const MAX_STATES: usize = 1000;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MrpSolution {
    /// v(s): expected discounted cumulant sum from `s` under the target
    /// policy.
    pub values: Vec<f64>,
    /// r_π(s) = Σ_{s′} π(s, s′)R(s, s′)
    pub expected_cumulant: Vec<f64>,
    /// ‖v − r_π − P_πΓv‖_∞
    pub residual: f64,
}

/// Exact GVF values of an MRP.
///
/// The discount applies on arrival, matching γ′ = γ(S_{t+1}) in the emitted
/// steps, so `v = r_π + P_πΓv` is solved as `(I − P_πΓ)v = r_π` by LU with
/// partial pivoting. `P_πΓ` and `ΓP_π` share their spectrum, so the
/// terminating-discount condition is the same either way. Terminal
/// pseudo-states carry the value of the next episode's start; their zero
/// feature rows cannot represent it, so scoring ignores them.
pub fn solve_true_values(spec: &MrpSpec) -> Result<MrpSolution> {
    let n = spec.num_states();
    if n > MAX_STATES {
        return Err(Error::spec(format!("{n} states exceeds the {MAX_STATES}-state solver limit")));
    }
    let target = spec.target();
    let discount = spec.discount();
    let transition = DMatrix::from_fn(n, n, |s, j| target[s][j] * discount[j]);
    let expected_cumulant: Vec<f64> = (0..n)
        .map(|s| (0..n).map(|j| target[s][j] * spec.cumulant()[s][j]).sum())
        .collect();
    solve_linear(transition, expected_cumulant)
}

fn solve_linear(transition: DMatrix<f64>, expected_cumulant: Vec<f64>) -> Result<MrpSolution> {
    let n = transition.nrows();
    let system = DMatrix::<f64>::identity(n, n) - &transition;
    let r = DVector::from_vec(expected_cumulant.clone());
    let v = system
        .lu()
        .solve(&r)
        .ok_or_else(|| Error::Singular("I - P_pi*Gamma is singular; discounting never terminates".into()))?;
    let residual = (&v - &r - &transition * &v).amax();
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Singular(format!(
            "linear solve residual {residual:e} exceeds {RESIDUAL_TOL:e}"
        )));
    }
    Ok(MrpSolution { values: v.iter().copied().collect(), expected_cumulant, residual })
}
