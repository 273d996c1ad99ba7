//! Acceptance criteria, one test each. Every test prints a PASS/FAIL line
//! with the measured values before asserting.

use amcf::verify::{run_criterion, CriterionOutcome, VerifyOptions};

fn check(id: u8) {
    let outcome: CriterionOutcome = run_criterion(id, &VerifyOptions::default());
    println!("{outcome}");
    assert!(outcome.passed, "criterion {id} failed: {}", outcome.detail);
}

#[test]
fn criterion_01_volume_preservation() {
    check(1);
}

#[test]
fn criterion_02_area_monotonicity() {
    check(2);
}

#[test]
fn criterion_03_cylinder_spectrum() {
    check(3);
}

#[test]
fn criterion_04_stability_rate() {
    check(4);
}

#[test]
fn criterion_05_instability_rate() {
    check(5);
}

#[test]
fn criterion_06_unduloid_equilibria() {
    check(6);
}

#[test]
fn criterion_07_pitchfork_coefficients() {
    check(7);
}

#[test]
fn criterion_08_second_derivative_anchors() {
    check(8);
}

#[test]
fn criterion_09_branch_unduloid_equivalence() {
    check(9);
}

#[test]
fn criterion_10_branch_instability() {
    check(10);
}

#[test]
fn criterion_11_non_bifurcation() {
    check(11);
}

#[test]
fn criterion_12_oracle_suite() {
    check(12);
}
