use std::path::PathBuf;
use std::process::Command;

use toetd::env::{Bootstrap, InterestSchedule};
use toetd::harness::{
    compare, curve_csv, run_records, sweep, sweep_csv, AlphaConfig, CurveRecord, EnvironmentConfig,
    ExperimentConfig, LearnerKind, RmseWeighting, RunLength, CURVE_HEADER, SWEEP_HEADER,
};

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn chain_config(learner: LearnerKind, lambda: f64, interest: InterestSchedule) -> ExperimentConfig {
    let env = EnvironmentConfig::from_name("chain").unwrap();
    let mut c = ExperimentConfig::new(env, learner, RunLength::Steps(3000));
    c.alpha = AlphaConfig::Fixed(0.05);
    c.lambda = Bootstrap::Constant(lambda);
    c.interest = Some(interest);
    c.seeds = vec![1, 2, 3];
    c.eval_every = 100;
    c
}

fn close(a: &CurveRecord, b: &CurveRecord, tol: f64) -> bool {
    let rel = |x: f64, y: f64| (x - y).abs() / 1f64.max(y.abs());
    a.seed == b.seed && a.step == b.step && rel(a.rmse, b.rmse) <= tol && rel(a.weight_norm, b.weight_norm) <= tol
}

fn assert_learners_agree(config: &ExperimentConfig, a: LearnerKind, b: LearnerKind) {
    let rows = compare(config, &[a, b]).unwrap();
    let (ra, rb): (Vec<_>, Vec<_>) = rows.iter().partition(|(k, _)| *k == a);
    assert_eq!(ra.len(), rb.len());
    for ((_, x), (_, y)) in ra.iter().zip(&rb) {
        assert!(close(x, y, 1e-12), "{x:?} vs {y:?}");
    }
}

#[test]
fn runs_are_reproducible_and_thread_independent() {
    let mut c = chain_config(LearnerKind::Toetd, 0.9, InterestSchedule::Constant(1.0));
    let first = curve_csv(&run_records(&c).unwrap());
    assert_eq!(first, curve_csv(&run_records(&c).unwrap()));
    c.parallel = true;
    assert_eq!(first, curve_csv(&run_records(&c).unwrap()));
    assert!(first.starts_with(CURVE_HEADER));
}

#[test]
fn compare_core_and_emphatic_td0_at_lambda_zero() {
    let c = chain_config(LearnerKind::Toetd, 0.0, InterestSchedule::Constant(1.0));
    assert_learners_agree(&c, LearnerKind::Toetd, LearnerKind::Etd0);
}

#[test]
fn compare_core_and_true_online_td_at_lambda_one() {
    let c = chain_config(LearnerKind::Toetd, 1.0, InterestSchedule::Constant(1.0));
    assert_learners_agree(&c, LearnerKind::Toetd, LearnerKind::Totd);
}

#[test]
fn compare_on_star_separates_emphatic_from_offpolicy_td() {
    let mut c = ExperimentConfig::load(&config_path("baird.toml")).unwrap();
    c.alpha = AlphaConfig::Fixed(0.001);
    c.length = RunLength::Steps(20_000);
    c.divergence_threshold = 1e3;
    c.seeds = vec![1, 2, 3, 4, 5];
    c.output = None;
    let rows = compare(&c, &[LearnerKind::Toetd, LearnerKind::OffpolicyTd]).unwrap();
    for seed in 1..=5 {
        let last = |k: LearnerKind| rows.iter().rev().find(|(kk, r)| *kk == k && r.seed == seed).unwrap().1.clone();
        assert!(!last(LearnerKind::Toetd).diverged, "seed {seed}");
        assert!(last(LearnerKind::OffpolicyTd).diverged, "seed {seed}");
    }
}

#[test]
fn offpolicy_td_diverges_on_star() {
    let mut c = ExperimentConfig::load(&config_path("baird.toml")).unwrap();
    c.output = None;
    c.divergence_threshold = 1e3;
    let records = run_records(&c).unwrap();
    assert!(records.last().unwrap().diverged);
}

#[test]
fn single_cell_sweep_matches_run() {
    let c = chain_config(LearnerKind::Toetd, 0.5, InterestSchedule::FirstState);
    let cells = sweep(&c, &[AlphaConfig::Fixed(0.05)], &[0.5]).unwrap();
    let records = run_records(&c).unwrap();
    let finals: Vec<f64> = c.seeds.iter().map(|s| records.iter().rev().find(|r| r.seed == *s).unwrap().rmse).collect();
    let mean = finals.iter().sum::<f64>() / finals.len() as f64;
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0].mean_rmse, mean);
    assert_eq!(cells[0].frac_diverged, 0.0);
}

#[test]
fn sweep_lambda_one_column_matches_true_online_td() {
    let mut c = chain_config(LearnerKind::Toetd, 1.0, InterestSchedule::Constant(1.0));
    c.rmse_weighting = RmseWeighting::Uniform;
    let alphas = [AlphaConfig::Fixed(0.02), AlphaConfig::Fixed(0.05)];
    let a = sweep(&c, &alphas, &[1.0]).unwrap();
    c.learner = LearnerKind::Totd;
    let b = sweep(&c, &alphas, &[1.0]).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.mean_rmse - y.mean_rmse).abs() <= 1e-12 * x.mean_rmse.max(1.0));
    }
}

#[test]
fn step_size_sweep_on_long_chain_is_finite() {
    let c = ExperimentConfig::load(&config_path("chain19.toml")).unwrap();
    let alphas: Vec<AlphaConfig> = [0.05, 0.1, 0.2, 0.4].iter().map(|&a| AlphaConfig::Fixed(a)).collect();
    let cells = sweep(&c, &alphas, &[0.9]).unwrap();
    assert_eq!(cells.len(), 4);
    for cell in &cells {
        assert!(cell.mean_rmse.is_finite() && cell.error.is_none());
        assert_eq!(cell.frac_diverged, 0.0);
    }
    assert!(sweep_csv(&cells).starts_with(SWEEP_HEADER));
}

#[test]
fn sweep_keeps_going_past_a_bad_cell() {
    let c = chain_config(LearnerKind::Toetd, 0.5, InterestSchedule::FirstState);
    let cells = sweep(&c, &[AlphaConfig::Fixed(0.05)], &[0.5, 1.5]).unwrap();
    assert!(cells[0].error.is_none());
    assert!(cells[1].error.is_some() && cells[1].mean_rmse.is_nan());
}

#[test]
fn unknown_names_are_errors() {
    assert!("sarsa".parse::<LearnerKind>().is_err());
    assert!(EnvironmentConfig::from_name("mountain_car").is_err());
    assert!(ExperimentConfig::from_toml("[environment]\nname = \"chain\"\nbogus = 1\n").is_err());
}

fn toetd(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_toetd")).args(args).output().unwrap()
}

#[test]
fn cli_trace_prints_hand_values() {
    let cfg = config_path("hand_trace.toml");
    let out = toetd(&["trace", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(second[3], "1.5"); // F_t
    assert_eq!(second[4], "0.546875"); // S
    assert_eq!(second[5], "0.1875"); // θ
    assert_eq!(second[6], "0.671875"); // e
    assert_eq!(lines[1].split(',').nth(5), Some("0.5"));
}

#[test]
fn cli_run_writes_csv_and_is_deterministic() {
    let cfg = config_path("chain5.toml");
    let dir = std::env::temp_dir().join(format!("toetd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("curve.csv");
    let args = ["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert!(toetd(&args).status.success());
    let first = std::fs::read(&out).unwrap();
    assert!(toetd(&args).status.success());
    assert_eq!(first, std::fs::read(&out).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_solve_prints_exact_values() {
    let out = toetd(&["solve", "--env", "chain:1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "1,0.5,false"), "{text}");
}

#[test]
fn cli_config_errors_exit_nonzero() {
    let cfg = config_path("chain5.toml");
    let cfg = cfg.to_str().unwrap();
    assert!(!toetd(&["run", "--config", "/nonexistent.toml"]).status.success());
    assert!(!toetd(&["run", "--config", cfg, "--learner", "sarsa"]).status.success());
    assert!(!toetd(&["run", "--config", cfg, "--lambda", "2"]).status.success());
    assert!(!toetd(&["solve", "--env", "nowhere"]).status.success());
}
