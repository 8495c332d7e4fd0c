//! Two hand-checkable steps with dyadic values, printing every intermediate.
//!
//!     cargo run --example hand_trace

use toetd::{GvfStep, Learner};

fn main() -> toetd::Result<()> {
    let steps = [
        GvfStep {
            step_size: 0.5,
            interest: 1.0,
            bootstrap: 0.0,
            features: vec![1.0],
            importance_ratio: 1.0,
            cumulant: 1.0,
            next_features: vec![1.0],
            next_discount: 0.5,
        },
        GvfStep {
            step_size: 0.5,
            interest: 1.0,
            bootstrap: 0.5,
            features: vec![1.0],
            importance_ratio: 1.0,
            cumulant: 0.0,
            next_features: vec![0.0],
            next_discount: 0.0,
        },
    ];
    let mut learner = Learner::new(1)?;
    for (t, step) in steps.iter().enumerate() {
        let d = learner.learn(step)?;
        println!(
            "t={t}: delta={} F_t={} M={} S={} theta={:?} e={:?} D={} F={}",
            d.td_error,
            d.followon,
            d.emphasis,
            d.trace_scalar,
            learner.weights(),
            learner.trace(),
            learner.update_dot(),
            learner.followon_value()
        );
    }
    assert_eq!(learner.weights(), &[0.1875]);
    Ok(())
}
