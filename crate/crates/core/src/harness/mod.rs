//! Configuration-driven experiments: seeded runs, grid sweeps, learner
//! comparisons, and hand-check traces, all emitting CSV.
//!
//! Floats in every CSV are written in Rust's shortest round-trip decimal
//! form (`{}` formatting of `f64`), so output files are byte-identical for
//! identical configs regardless of platform or thread count.

pub mod cli;
pub mod config;
mod learners;
mod run;

pub use config::{
    auto_step_size, parse_interest, AlphaConfig, EnvironmentConfig, ExperimentConfig, LearnerKind,
    RmseWeighting, RunLength, DEFAULT_DIVERGENCE_THRESHOLD,
};
pub use learners::AnyLearner;
pub use run::{
    compare, compare_csv, curve_csv, run, run_records, solve_csv, sweep, sweep_csv, trace,
    trace_csv, write_file, CurveRecord, Evaluator, SweepCell, TraceRow, CURVE_HEADER, SWEEP_HEADER,
};
