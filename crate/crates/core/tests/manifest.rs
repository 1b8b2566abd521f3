use cs_algebra::color::GradingContext;
use cs_algebra::verify::catalog::CATALOG;
use cs_algebra::verify::manifest::Manifest;
use cs_algebra::verify::{run_suite, RunConfig, Verdict, SCHEMA_VERSION};

#[test]
fn embedded_manifest_is_well_formed() {
    let m = Manifest::embedded();
    assert_eq!(m.schema_version, SCHEMA_VERSION);
    let mut seen = std::collections::HashSet::new();
    for e in &m.expectations {
        assert!(CATALOG.iter().any(|c| c.id == e.id), "unknown case {}", e.id);
        assert!(GradingContext::new(e.n, e.m, e.sites).is_ok());
        assert!(seen.insert((e.id.as_str(), e.n, e.m, e.sites)), "duplicate {}", e.id);
        assert_ne!(e.verdict, Verdict::Pass, "pass is the default and is not listed");
        if e.verdict == Verdict::Fail {
            assert!(e.residual_term_count.is_some_and(|t| t > 0));
            assert!(e.reason.is_some());
        }
    }
}

#[test]
fn pinned_failures_reproduce_at_minimal_graded_context() {
    let m = Manifest::embedded();
    let ids: Vec<String> = m.expectations.iter().filter(|e| (e.n, e.m, e.sites) == (1, 1, 2)).map(|e| e.id.clone()).collect();
    assert!(!ids.is_empty());
    let cfg = RunConfig { contexts: vec![GradingContext::new(1, 1, 2).unwrap()], cases: ids, ..RunConfig::default() };
    let reports = run_suite(&cfg).unwrap();
    assert!(reports.iter().all(|r| r.verdict == Verdict::Fail));
    assert!(m.compare(&reports).is_empty());
}

#[test]
fn unexpected_pass_is_a_mismatch() {
    let m = Manifest::parse(
        r#"{"schema_version": 1, "expectations": [
            {"id": "eq2.10", "n": 2, "m": 0, "N": 2, "verdict": "fail", "residual_term_count": 1}
        ]}"#,
    )
    .unwrap();
    let cfg = RunConfig {
        contexts: vec![GradingContext::new(2, 0, 2).unwrap()],
        cases: vec!["eq2.10".into()],
        ..RunConfig::default()
    };
    let reports = run_suite(&cfg).unwrap();
    let mismatches = m.compare(&reports);
    assert_eq!(mismatches.len(), 1);
    assert_eq!(mismatches[0].expected, Verdict::Fail);
    assert_eq!(mismatches[0].actual, Verdict::Pass);
}
