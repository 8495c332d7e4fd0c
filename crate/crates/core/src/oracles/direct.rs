use super::StepHistory;
use crate::error::Result;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluates the five defining recursions literally, keeping every sequence:
///
/// ```text
/// δ_t = R_{t+1} + γ_{t+1}θ_tᵀφ_{t+1} − θ_tᵀφ_t
/// F_t = ρ_{t−1}γ_tF_{t−1} + I_t                       F_{−1} = 0
/// M_t = λ_tI_t + (1 − λ_t)F_t
/// e_t = ρ_tγ_tλ_te_{t−1} + ρ_tα_tM_t(1 − ρ_tγ_tλ_tφ_tᵀe_{t−1})φ_t   e_{−1} = 0
/// θ_{t+1} = θ_t + δ_te_t + (e_t − α_tM_tρ_tφ_t)(θ_t − θ_{t−1})ᵀφ_t
/// ```
///
/// Step `t` supplies φ_t, α_t, I_t, λ_t, ρ_t and the t+1 quantities R, φ′, γ′.
/// γ_t is read from step `t−1` (γ_0 is irrelevant since e_{−1} = 0 and
/// F_{−1} = 0). θ_{−1} is taken equal to θ_0. Returns θ_0..θ_T.
pub fn direct_recursion(history: &StepHistory) -> Result<Vec<Vec<f64>>> {
    history.validate()?;
    let steps = &history.steps;
    let n = history.dim();

    let mut thetas: Vec<Vec<f64>> = vec![history.initial_weights.clone()];
    let mut followons: Vec<f64> = Vec::with_capacity(steps.len());
    let mut traces: Vec<Vec<f64>> = Vec::with_capacity(steps.len());

    for (t, step) in steps.iter().enumerate() {
        let theta = &thetas[t];
        let theta_prev = if t == 0 { &thetas[0] } else { &thetas[t - 1] };
        let gamma_t = if t == 0 { 0.0 } else { steps[t - 1].next_discount };
        let rho_prev = if t == 0 { 0.0 } else { steps[t - 1].importance_ratio };
        let f_prev = if t == 0 { 0.0 } else { followons[t - 1] };
        let zero = vec![0.0; n];
        let e_prev = if t == 0 { &zero } else { &traces[t - 1] };

        let delta = step.cumulant + step.next_discount * dot(theta, &step.next_features)
            - dot(theta, &step.features);
        let f = rho_prev * gamma_t * f_prev + step.interest;
        let m = step.bootstrap * step.interest + (1.0 - step.bootstrap) * f;

        let carry = step.importance_ratio * gamma_t * step.bootstrap;
        let coef = step.importance_ratio
            * step.step_size
            * m
            * (1.0 - carry * dot(&step.features, e_prev));
        let e: Vec<f64> = (0..n)
            .map(|i| carry * e_prev[i] + coef * step.features[i])
            .collect();

        let diff: Vec<f64> = theta.iter().zip(theta_prev).map(|(a, b)| a - b).collect();
        let correction = dot(&diff, &step.features);
        let next: Vec<f64> = (0..n)
            .map(|i| {
                theta[i]
                    + delta * e[i]
                    + (e[i] - step.step_size * m * step.importance_ratio * step.features[i])
                        * correction
            })
            .collect();

        followons.push(f);
        traces.push(e);
        thetas.push(next);
    }
    Ok(thetas)
}
