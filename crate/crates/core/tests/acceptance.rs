//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p aoi-core --test acceptance -- --nocapture` to see
//! the lines.

use aoi_core::validation::{self, CheckOutcome, ValidationPlan};

fn report(outcome: CheckOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_1_mean_forms_agree() {
    report(validation::check_mean_forms());
}

#[test]
fn criterion_2_pmf_mean_consistency() {
    report(validation::check_pmf_mean(&ValidationPlan::standard()));
}

#[test]
fn criterion_3_chain_oracle_equivalence() {
    report(validation::check_chain_oracle(&ValidationPlan::standard()));
}

#[test]
fn criterion_4_balance_residual() {
    report(validation::check_balance(&ValidationPlan::standard()));
}

#[test]
fn criterion_5_simulation_vs_closed_forms() {
    report(validation::check_simulation(&ValidationPlan::standard()));
}

#[test]
fn criterion_6_mean_curve_shapes() {
    report(validation::check_mean_curves());
}

#[test]
fn criterion_7_continuous_limit() {
    report(validation::check_continuous_limit());
}

#[test]
fn criterion_8_aoi_recursion_exact() {
    report(validation::check_recursion(&ValidationPlan::standard()));
}
