//! A payoff Z delivered on termination, folded into the cumulant as
//! R = (1 − γ′)Z: left exit pays −1, right exit pays +1.
//!
//!     cargo run --example terminal_payoff

use toetd::env::{make_chain, ChainFeatures, InterestSchedule, Schedule, StreamCursor};
use toetd::oracles::solve_true_values;
use toetd::Learner;

fn main() -> toetd::Result<()> {
    let chain = make_chain(5, 0.0, ChainFeatures::Tabular)?.with_interest(InterestSchedule::FirstState)?;
    let mut payoffs = vec![0.0; chain.num_states()];
    payoffs[0] = -1.0;
    payoffs[6] = 1.0;
    let spec = chain.with_terminal_payoffs(&payoffs)?;
    let exact = solve_true_values(&spec)?.values;

    let mut cursor = StreamCursor::new(&spec, Schedule::constant(0.02, 0.5), 11)?;
    let mut learner = Learner::new(spec.num_features())?;
    while cursor.episode_index() < 2000 {
        learner.learn(&cursor.next_step())?;
    }
    for s in 1..=5 {
        println!("state {s}: learned {:+.3}  exact {:+.3}", learner.predict(spec.feature_row(s))?, exact[s]);
    }
    Ok(())
}
