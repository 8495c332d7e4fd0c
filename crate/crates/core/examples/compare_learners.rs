//! Feeds identical seeded streams to every learner and prints the learning
//! curves as one CSV with a learner column.
//!
//!     cargo run --release --example compare_learners

use toetd::harness::{compare, compare_csv, AlphaConfig, EnvironmentConfig, ExperimentConfig, LearnerKind, RunLength};

fn main() -> toetd::Result<()> {
    let mut config = ExperimentConfig::new(EnvironmentConfig::from_name("baird")?, LearnerKind::Toetd, RunLength::Steps(5000));
    config.alpha = AlphaConfig::Fixed(0.001);
    config.seeds = vec![1, 2];
    config.eval_every = 1000;
    config.divergence_threshold = 1e3;
    let rows = compare(&config, &[LearnerKind::Toetd, LearnerKind::Etd0, LearnerKind::OffpolicyTd])?;
    print!("{}", compare_csv(&rows));
    Ok(())
}
