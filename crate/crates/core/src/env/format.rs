//! Plain-text MRP format.
//!
//! ```text
//! # comment
//! states = 3
//! features = 2
//! interest = constant 1        # or: first-state | discounted-interest | per-state v0 v1 ...
//! terminal = 0 2               # indices of terminal pseudo-states (may be empty)
//! start = 0 1 0
//! discount = 0 1 0
//!
//! [behavior]
//! <states rows of states numbers>
//! [target]
//! ...
//! [cumulant]
//! ...
//! [features]
//! <states rows of `features` numbers>
//! ```
//!
//! Numbers are written in shortest round-trip decimal form, so a written
//! spec reads back bit-identically. On input a number may also be a ratio
//! `p/q`, evaluated as `p / q` in double precision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{InterestSchedule, MrpParts, MrpSpec};
use crate::error::{Error, Result};

const BLOCKS: [&str; 4] = ["behavior", "target", "cumulant", "features"];

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_spec(spec: &MrpSpec) -> String {
    let p = spec.parts();
    let mut out = String::new();
    let interest = match &p.interest {
        InterestSchedule::Constant(c) => format!("constant {c}"),
        InterestSchedule::FirstState => "first-state".to_string(),
        InterestSchedule::PerState(t) => format!("per-state {}", join(t)),
        InterestSchedule::DiscountedInterest => "discounted-interest".to_string(),
    };
    let terminal: Vec<String> = (0..spec.num_states())
        .filter(|&s| p.terminal[s])
        .map(|s| s.to_string())
        .collect();
    let _ = writeln!(out, "states = {}", spec.num_states());
    let _ = writeln!(out, "features = {}", spec.num_features());
    let _ = writeln!(out, "interest = {interest}");
    let _ = writeln!(out, "terminal = {}", terminal.join(" "));
    let _ = writeln!(out, "start = {}", join(&p.start));
    let _ = writeln!(out, "discount = {}", join(&p.discount));
    for (name, m) in BLOCKS.iter().zip([&p.behavior, &p.target, &p.cumulant, &p.features]) {
        let _ = writeln!(out, "\n[{name}]");
        for row in m {
            let _ = writeln!(out, "{}", join(row));
        }
    }
    out
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    let err = || Error::Parse { line, msg: format!("bad number {tok:?}") };
    let x = match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| err())?;
            let q: f64 = q.parse().map_err(|_| err())?;
            p / q
        }
        None => tok.parse().map_err(|_| err())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(err())
    }
}

fn parse_row(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split_whitespace().map(|t| parse_number(t, line)).collect()
}

fn parse_count(text: &str, line: usize) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("bad count {text:?}") })
}

pub fn read_spec(text: &str) -> Result<MrpSpec> {
    let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut blocks: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    let mut current: Option<String> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !BLOCKS.contains(&name.as_str()) {
                return Err(Error::Parse { line: line_no, msg: format!("unknown block [{name}]") });
            }
            if blocks.insert(name.clone(), Vec::new()).is_some() {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate block [{name}]") });
            }
            current = Some(name);
            continue;
        }
        match &current {
            Some(block) => {
                let row = parse_row(line, line_no)?;
                blocks.get_mut(block).expect("block registered").push(row);
            }
            None => {
                let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: "expected `key = value`".into(),
                })?;
                let k = k.trim().to_string();
                if keys.insert(k.clone(), (line_no, v.trim().to_string())).is_some() {
                    return Err(Error::Parse { line: line_no, msg: format!("duplicate key {k}") });
                }
            }
        }
    }

    let key = |name: &str| -> Result<&(usize, String)> {
        keys.get(name)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("missing key {name}") })
    };
    let (l, v) = key("states")?;
    let states = parse_count(v, *l)?;
    let (l, v) = key("features")?;
    let width = parse_count(v, *l)?;
    let (l, v) = key("start")?;
    let start = parse_row(v, *l)?;
    let (l, v) = key("discount")?;
    let discount = parse_row(v, *l)?;
    if discount.len() != states {
        return Err(Error::Parse { line: *l, msg: format!("discount needs {states} entries") });
    }
    let mut terminal = vec![false; states];
    if let Some((l, v)) = keys.get("terminal") {
        for tok in v.split_whitespace() {
            let s = parse_count(tok, *l)?;
            if s >= states {
                return Err(Error::Parse { line: *l, msg: format!("terminal index {s} out of range") });
            }
            terminal[s] = true;
        }
    }
    let interest = match keys.get("interest") {
        None => InterestSchedule::Constant(1.0),
        Some((l, v)) => {
            let mut it = v.splitn(2, char::is_whitespace);
            let kind = it.next().unwrap_or("");
            let rest = it.next().unwrap_or("").trim();
            match kind {
                "constant" => InterestSchedule::Constant(parse_number(rest, *l)?),
                "first-state" => InterestSchedule::FirstState,
                "discounted-interest" => InterestSchedule::DiscountedInterest,
                "per-state" => InterestSchedule::PerState(parse_row(rest, *l)?),
                other => {
                    return Err(Error::Parse { line: *l, msg: format!("unknown interest {other:?}") })
                }
            }
        }
    };
    for k in keys.keys() {
        if !["states", "features", "interest", "terminal", "start", "discount"].contains(&k.as_str()) {
            return Err(Error::Parse { line: keys[k].0, msg: format!("unknown key {k}") });
        }
    }
    let mut take = |name: &str, cols: usize| -> Result<Vec<Vec<f64>>> {
        let m = blocks
            .remove(name)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("missing block [{name}]") })?;
        if m.len() != states || m.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("block [{name}] must be {states}x{cols}"),
            });
        }
        Ok(m)
    };
    let parts = MrpParts {
        behavior: take("behavior", states)?,
        target: take("target", states)?,
        cumulant: take("cumulant", states)?,
        features: take("features", width)?,
        discount,
        terminal,
        interest,
        start,
    };
    MrpSpec::new(parts)
}
