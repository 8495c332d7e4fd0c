use super::{InterestSchedule, MrpParts, MrpSpec};
use crate::error::{Error, Result};

/// Feature table for the interior states of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainFeatures {
    /// One-hot per interior state.
    Tabular,
    /// One row per interior state.
    Custom(Vec<Vec<f64>>),
}

/// Symmetric random walk over `num_interior` states with terminal
/// pseudo-states at both ends.
///
/// State 0 and state `num_interior + 1` are terminal; episodes start in the
/// middle interior state (`(num_interior + 1) / 2`). Each interior step moves
/// left or right with probability ½. Entering the right terminal yields
/// cumulant `reward_right`; every other transition yields 0. Interest
/// defaults to a constant 1; interior discounts are 1. On-policy.
pub fn make_chain(num_interior: usize, reward_right: f64, features: ChainFeatures) -> Result<MrpSpec> {
    if num_interior == 0 {
        return Err(Error::spec("a chain needs at least one interior state"));
    }
    if !reward_right.is_finite() {
        return Err(Error::spec("reward_right must be finite"));
    }
    let n = num_interior + 2;
    let right = n - 1;
    let interior_rows = match features {
        ChainFeatures::Tabular => (0..num_interior)
            .map(|i| {
                let mut row = vec![0.0; num_interior];
                row[i] = 1.0;
                row
            })
            .collect(),
        ChainFeatures::Custom(rows) => {
            if rows.len() != num_interior {
                return Err(Error::spec(format!(
                    "custom chain features need {num_interior} rows, got {}",
                    rows.len()
                )));
            }
            rows
        }
    };
    let width = interior_rows.first().map_or(0, Vec::len);
    let mut feature_rows = Vec::with_capacity(n);
    feature_rows.push(vec![0.0; width]);
    feature_rows.extend(interior_rows);
    feature_rows.push(vec![0.0; width]);

    let mut start = vec![0.0; n];
    start[(num_interior + 1) / 2] = 1.0;

    let mut transitions = vec![vec![0.0; n]; n];
    transitions[0] = start.clone();
    transitions[right] = start.clone();
    for s in 1..right {
        transitions[s][s - 1] = 0.5;
        transitions[s][s + 1] = 0.5;
    }
    let mut cumulant = vec![vec![0.0; n]; n];
    cumulant[right - 1][right] = reward_right;

    let mut discount = vec![1.0; n];
    discount[0] = 0.0;
    discount[right] = 0.0;
    let mut terminal = vec![false; n];
    terminal[0] = true;
    terminal[right] = true;

    MrpSpec::new(MrpParts {
        behavior: transitions.clone(),
        target: transitions,
        cumulant,
        discount,
        features: feature_rows,
        terminal,
        interest: InterestSchedule::Constant(1.0),
        start,
    })
}

pub const BAIRD_DISCOUNT: f64 = 0.99;

/// The customary starting point for the star problem.
pub const BAIRD_INITIAL_WEIGHTS: [f64; 8] = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 10.0, 1.0];

/// Baird's seven-state star with discount 0.99.
pub fn make_baird_star() -> MrpSpec {
    make_baird_star_with(BAIRD_DISCOUNT).expect("default star parameters are valid")
}

/// Baird's seven-state star.
///
/// States 0..=5 are the outer states and state 6 is the hub. The behavior
/// policy moves to each of the seven states with probability 1/7; the target
/// policy always moves to the hub, so ρ = 7 on hub-bound transitions and 0
/// elsewhere. Outer state `i` has feature 2 at index `i` and 1 at index 7;
/// the hub has 1 at index 6 and 2 at index 7. Cumulants are zero, so every
/// true value is zero and representable. Interest is a constant 1.
pub fn make_baird_star_with(discount: f64) -> Result<MrpSpec> {
    const N: usize = 7;
    const HUB: usize = 6;
    let behavior = vec![vec![1.0 / N as f64; N]; N];
    let mut target = vec![vec![0.0; N]; N];
    for row in target.iter_mut() {
        row[HUB] = 1.0;
    }
    let features = (0..N)
        .map(|s| {
            let mut row = vec![0.0; 8];
            if s == HUB {
                row[6] = 1.0;
                row[7] = 2.0;
            } else {
                row[s] = 2.0;
                row[7] = 1.0;
            }
            row
        })
        .collect();
    MrpSpec::new(MrpParts {
        behavior: behavior.clone(),
        target,
        cumulant: vec![vec![0.0; N]; N],
        discount: vec![discount; N],
        features,
        terminal: vec![false; N],
        interest: InterestSchedule::Constant(1.0),
        start: behavior[0].clone(),
    })
}
