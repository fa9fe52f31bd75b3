//! Acceptance suite: one test per criterion, each printing its PASS/FAIL
//! line plus the measured details. Run with
//! `cargo test -p semistable --test acceptance -- --nocapture`.

use semistable::verify::{CriterionResult, VerifyConfig, CRITERIA};

fn run(id: u32) -> CriterionResult {
    let cfg = VerifyConfig::default();
    let (_, _, func) = CRITERIA.iter().find(|(cid, _, _)| *cid == id).expect("criterion id");
    let result = func(&cfg);
    println!(
        "criterion {:2} [{}] {}\n    {}",
        result.id,
        if result.passed { "PASS" } else { "FAIL" },
        result.name,
        result.details
    );
    result
}

#[test]
fn criterion_01_threshold_regression_table() {
    let r = run(1);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_02_tau_estimation() {
    let r = run(2);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_03_h_quadrature_vs_closed_form() {
    let r = run(3);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_04_gelfand_n2_oracle() {
    let r = run(4);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_05_singular_limit() {
    let r = run(5);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_06_semistability_consistency() {
    let r = run(6);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_07_lemma21_sign() {
    let r = run(7);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_08_uniform_bound_property() {
    let r = run(8);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_09_bootstrap_convergence() {
    let r = run(9);
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_10_determinism() {
    let r = run(10);
    assert!(r.passed, "{}", r.details);
}
