//! Learns the five-state random walk on-policy and compares the learned
//! values with the exact solution.
//!
//!     cargo run --example random_walk

use toetd::env::{make_chain, ChainFeatures, InterestSchedule, Schedule, StreamCursor};
use toetd::oracles::solve_true_values;
use toetd::Learner;

fn main() -> toetd::Result<()> {
    let spec = make_chain(5, 1.0, ChainFeatures::Tabular)?.with_interest(InterestSchedule::FirstState)?;
    let exact = solve_true_values(&spec)?.values;
    let mut cursor = StreamCursor::new(&spec, Schedule::constant(0.05, 0.9), 1)?;
    let mut learner = Learner::new(spec.num_features())?;
    while cursor.episode_index() < 1000 {
        learner.learn(&cursor.next_step())?;
    }
    println!("state  learned   exact");
    for s in (0..spec.num_states()).filter(|&s| !spec.is_terminal(s)) {
        println!("{s:>5}  {:.4}    {:.4}", learner.predict(spec.feature_row(s))?, exact[s]);
    }
    Ok(())
}
