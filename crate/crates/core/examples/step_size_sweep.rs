//! Step-size × bootstrapping grid on the nineteen-state random walk,
//! printed as CSV.
//!
//!     cargo run --release --example step_size_sweep

use toetd::env::InterestSchedule;
use toetd::harness::{sweep, sweep_csv, AlphaConfig, EnvironmentConfig, ExperimentConfig, LearnerKind, RmseWeighting, RunLength};

fn main() -> toetd::Result<()> {
    let mut config = ExperimentConfig::new(EnvironmentConfig::from_name("chain:19")?, LearnerKind::Toetd, RunLength::Episodes(100));
    config.interest = Some(InterestSchedule::FirstState);
    config.seeds = (1..=5).collect();
    config.rmse_weighting = RmseWeighting::Uniform;
    config.parallel = true;
    let alphas: Vec<AlphaConfig> = [0.05, 0.1, 0.2, 0.4].into_iter().map(AlphaConfig::Fixed).collect();
    let cells = sweep(&config, &alphas, &[0.0, 0.5, 0.9, 1.0])?;
    print!("{}", sweep_csv(&cells));
    Ok(())
}
