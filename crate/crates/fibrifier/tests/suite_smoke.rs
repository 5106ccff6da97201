//! Every named suite runs clean at moderate count on a seed distinct from
//! the acceptance one, including the suites that are module invariants
//! rather than acceptance criteria (monad laws).

use fibrifier::corpus::{run_suite, GenConfig, SUITE_NAMES};

#[test]
fn every_suite_passes() {
    for &suite in SUITE_NAMES {
        let cfg = GenConfig { seed: 90210, instance_count: 25, ..Default::default() };
        let report = run_suite(&cfg, suite).expect("known suite");
        for r in &report.results {
            assert!(r.passed, "suite {suite} instance {}: {}", r.index, r.detail);
        }
    }
}

#[test]
fn monad_laws_hold_at_full_count() {
    let cfg = GenConfig { seed: 4242, instance_count: 50, ..Default::default() };
    let report = run_suite(&cfg, "monad-laws").unwrap();
    assert!(report.passed, "{:?}", report.results.iter().find(|r| !r.passed));
}
