//! Defines a small MRP in the text format, solves it exactly, and learns it
//! with two coarse features.
//!
//!     cargo run --example custom_mrp

use toetd::env::{read_spec, write_spec, Schedule, StreamCursor};
use toetd::oracles::solve_true_values;
use toetd::Learner;

const SPEC: &str = "\
# a three-state ring, continuing, with states 0 and 1 sharing a feature
states = 3
features = 2
interest = constant 1
terminal =
start = 1 0 0
discount = 0.9 0.9 0.9

[behavior]
1/20 9/10 1/20
1/20 1/20 9/10
9/10 1/20 1/20

[target]
0 1 0
0 0 1
1 0 0

[cumulant]
0 1 0
0 0 2
-1 0 0

[features]
1 0
1 0
0 1
";

fn main() -> toetd::Result<()> {
    let spec = read_spec(SPEC)?;
    assert_eq!(read_spec(&write_spec(&spec))?, spec);
    let exact = solve_true_values(&spec)?;
    println!("exact values {:?} (residual {:e})", exact.values, exact.residual);

    let mut cursor = StreamCursor::new(&spec, Schedule::constant(0.005, 0.5), 4)?;
    let mut learner = Learner::new(spec.num_features())?;
    for _ in 0..200_000 {
        learner.learn(&cursor.next_step())?;
    }
    let learned: Vec<f64> = (0..3).map(|s| learner.predict(spec.feature_row(s))).collect::<toetd::Result<_>>()?;
    println!("learned      {learned:?}");
    Ok(())
}
