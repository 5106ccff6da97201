//! Acceptance gate: each criterion runs its proposition suite at full desk
//! scale and prints one pass/fail line. Categories stay within 8 objects /
//! 48 morphisms and bases within 4 objects; every tolerance here is an exact
//! structural check (there is nothing numerical to approximate).

use std::time::Instant;

use fibrifier::corpus::{run_suite, GenConfig, SuiteReport};

const SEED: u64 = 2026;

fn run(suite: &str, count: usize) -> SuiteReport {
    let cfg = GenConfig { seed: SEED, instance_count: count, ..Default::default() };
    run_suite(&cfg, suite).expect("known suite")
}

fn report_line(criterion: &str, report: &SuiteReport) {
    let passed = report.results.iter().filter(|r| r.passed).count();
    println!(
        "criterion {criterion}: {} [{}/{} instances]",
        if report.passed { "PASS" } else { "FAIL" },
        passed,
        report.results.len()
    );
    for r in report.results.iter().filter(|r| !r.passed).take(5) {
        println!("    instance {}: {}", r.index, r.detail);
        if let Some(w) = &r.minimized {
            println!("    minimized witness: {w}");
        }
    }
}

#[test]
fn criterion_1_chevalley_equivalence() {
    // Three fibration criteria agree on ≥300 mixed instances, both for
    // fibrations (right adjoints, identity counits) and opfibrations (left
    // adjoints, identity units), in under 60 seconds.
    let t = Instant::now();
    let report = run("chevalley-agreement", 300);
    let elapsed = t.elapsed();
    report_line("1 (chevalley equivalence)", &report);
    assert!(report.passed);
    assert!(report.results.len() >= 300);
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget is 60s");
}

#[test]
fn criterion_2_example_2_3() {
    let report = run("example-2.3", 1);
    report_line("2 (curated example-2.3 verdict vector)", &report);
    assert!(report.passed);
}

#[test]
fn criterion_3_comprehensive_factorization() {
    let report = run("comprehensive", 60);
    report_line("3 (comprehensive factorization)", &report);
    assert!(report.passed);
}

#[test]
fn criterion_4_groupoid_fibre_factorization() {
    let report = run("groupoid-factorization", 60);
    report_line("4 (groupoid-fibre factorization)", &report);
    assert!(report.passed);
}

#[test]
fn criterion_5_isofibration_conservative_iff_groupoidal() {
    let report = run("isofib-cons-gpd", 100);
    report_line("5 (isofibrations: conservative ⇔ groupoidal)", &report);
    assert!(report.passed);
    // ≥100 generated isofibrations plus the curated violation.
    assert!(report.results.len() >= 101);
}

#[test]
fn criterion_6_structural_lemmas() {
    for suite in [
        "pullback-stability",
        "comma-projections",
        "pseudo-to-fib",
        "r-preserves-identees",
        "dagger",
    ] {
        let report = run(suite, 50);
        report_line(&format!("6 ({suite})"), &report);
        assert!(report.passed, "suite {suite} failed");
        assert!(report.results.len() >= 50);
    }
}

#[test]
fn criterion_7_fibrewise_layer() {
    let report = run("fibb-factorization", 50);
    report_line("7 (Fib(B) factorizations)", &report);
    assert!(report.passed);
    assert!(report.results.len() >= 50);
}

#[test]
fn criterion_8_engine_honesty() {
    let report = run("engine-honesty", 1);
    report_line("8 (engine honesty)", &report);
    assert!(report.passed);
}
