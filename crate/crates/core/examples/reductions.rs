//! The learner's special cases: λ = 1 on-policy with unit interest is true
//! online TD(λ); λ = 0 is emphatic TD(0).
//!
//!     cargo run --example reductions

use toetd::env::{make_baird_star, make_chain, ChainFeatures, Schedule, StreamCursor, BAIRD_INITIAL_WEIGHTS};
use toetd::oracles::{EmphaticTd0, TrueOnlineTd};
use toetd::Learner;

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> toetd::Result<()> {
    let chain = make_chain(5, 1.0, ChainFeatures::Tabular)?;
    let mut cursor = StreamCursor::new(&chain, Schedule::constant(0.1, 1.0), 3)?;
    let (mut core, mut totd) = (Learner::new(5)?, TrueOnlineTd::new(vec![0.0; 5]));
    let mut gap = 0.0f64;
    for _ in 0..1000 {
        let step = cursor.next_step();
        core.learn(&step)?;
        totd.update(&step)?;
        gap = gap.max(max_gap(core.weights(), totd.weights()));
    }
    println!("lambda = 1 vs true online TD:  max |diff| = {gap:e}");

    let star = make_baird_star();
    let mut cursor = StreamCursor::new(&star, Schedule::constant(0.001, 0.0), 3)?;
    let mut core = Learner::with_weights(BAIRD_INITIAL_WEIGHTS.to_vec())?;
    let mut etd0 = EmphaticTd0::new(BAIRD_INITIAL_WEIGHTS.to_vec());
    let mut gap = 0.0f64;
    for _ in 0..1000 {
        let step = cursor.next_step();
        core.learn(&step)?;
        etd0.update(&step)?;
        gap = gap.max(max_gap(core.weights(), etd0.weights()));
    }
    println!("lambda = 0 vs emphatic TD(0):  max |diff| = {gap:e}");
    Ok(())
}
