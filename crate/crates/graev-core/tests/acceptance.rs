//! Acceptance battery: every criterion at full sample counts and stated
//! tolerances, one pass/fail line each. Seed fixed at 1 to mirror the CLI
//! default (`graev suite --seed 1`).

use graev_core::suite::criteria::{self, Counts, CriterionResult};

const SEED: u64 = 1;

fn assert_criterion(result: CriterionResult) {
    println!(
        "criterion {:>2} {:<32} {} ({} checks, {} failures{})",
        result.id,
        result.name,
        if result.passed { "PASS" } else { "FAIL" },
        result.checks,
        result.failures,
        result
            .max_abs_err
            .map(|e| format!(", max err {e:.3e}"))
            .unwrap_or_default(),
    );
    assert!(
        result.passed,
        "criterion {} ({}) failed: {} failures out of {} checks — {}",
        result.id, result.name, result.failures, result.checks, result.detail
    );
}

#[test]
fn criterion_01_oracle_equivalence() {
    assert_criterion(criteria::oracle_equivalence(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_02_extension_and_invariance() {
    assert_criterion(criteria::extension_invariance(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_03_prenorm_axioms() {
    assert_criterion(criteria::prenorm_axioms(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_04_maximality_certificate() {
    assert_criterion(criteria::maximality(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_05_ball_to_neighborhood_inclusion() {
    assert_criterion(criteria::ball_inclusion(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_06_refutation_soundness() {
    assert_criterion(criteria::refutation_soundness(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_07_completeness_lab() {
    assert_criterion(criteria::completeness_lab(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_08_incompleteness_detection() {
    assert_criterion(criteria::incompleteness_detection(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_09_filtration_dichotomy() {
    assert_criterion(criteria::dichotomy(SEED, &Counts::full()).unwrap());
}

#[test]
fn criterion_10_determinism() {
    assert_criterion(criteria::determinism(SEED).unwrap());
}
