//! Baird's star: off-policy TD(0) diverges while the emphatic learner
//! stays bounded on the same transitions.
//!
//!     cargo run --release --example baird_contrast

use toetd::env::{make_baird_star, Schedule, StreamCursor, BAIRD_INITIAL_WEIGHTS};
use toetd::oracles::OffPolicyTd;
use toetd::Learner;

fn norm(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn main() -> toetd::Result<()> {
    let spec = make_baird_star();
    let mut cursor = StreamCursor::new(&spec, Schedule::constant(0.001, 0.0), 1)?;
    let mut emphatic = Learner::with_weights(BAIRD_INITIAL_WEIGHTS.to_vec())?;
    let mut plain = OffPolicyTd::new(BAIRD_INITIAL_WEIGHTS.to_vec());
    println!("{:>6}  {:>12}  {:>12}", "step", "emphatic", "off-policy");
    for t in 1..=20_000 {
        let step = cursor.next_step();
        emphatic.learn(&step)?;
        plain.update(&step)?;
        if t % 2_000 == 0 {
            println!("{t:>6}  {:>12.3}  {:>12.3}", norm(emphatic.weights()), norm(plain.weights()));
        }
    }
    Ok(())
}
