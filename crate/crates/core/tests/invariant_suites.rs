use jblab::verify::{run_all, run_suite, Suite, VerifyConfig};

fn assert_suite(suite: Suite) {
    let report = run_suite(suite, &VerifyConfig::default());
    assert!(report.ok(), "{}: {:?}", suite, report.first_failure);
}

#[test]
fn spectral_invariants() {
    assert_suite(Suite::SpectralInvariants);
}

#[test]
fn orthogonality_equivalences() {
    assert_suite(Suite::Orthogonality);
}

#[test]
fn extreme_point_characterisation() {
    assert_suite(Suite::ExtremePoints);
}

#[test]
fn quasi_invertibility_characterisation() {
    assert_suite(Suite::QuasiInvertibility);
}

#[test]
fn other_seeds_and_larger_shapes() {
    let cfg = VerifyConfig { seed: 7, trials: Some(40), max_rows: 6, max_cols: 8, tol: None };
    let summary = run_all(&cfg);
    for report in &summary.suites {
        assert!(report.ok(), "{}: {:?}", report.suite, report.first_failure);
    }
}

#[test]
fn forced_failure_is_reported() {
    let cfg = VerifyConfig { trials: Some(5), tol: Some(1e-30), ..Default::default() };
    let summary = run_all(&cfg);
    assert!(!summary.all_passed());
    let failing = summary.suites.iter().find(|r| !r.ok()).unwrap();
    let failure = failing.first_failure.as_ref().unwrap();
    assert_eq!(failure.seed, 0);
    assert!(failure.residual > 1e-30);
}
