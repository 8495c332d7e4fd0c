//! True online emphatic TD(λ) for linear general value function prediction.
//!
//! * [`learner`] — the incremental learner ([`Learner`]).
//! * [`oracles`] — independent reference implementations and an exact
//!   value solver used to check the learner.
//! * [`env`] — seeded Markov reward processes that emit [`GvfStep`] streams.
//! * [`harness`] — configuration-driven experiments writing CSV curves.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod env;
pub mod error;
pub mod harness;
pub mod learner;
pub mod oracles;

pub use error::{Error, Result};
pub use learner::{GvfStep, Learner, StepDiagnostics};
