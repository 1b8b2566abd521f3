//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria 3, 4 and 7 name relations that do not hold as stated; they
//! report FAIL, and the gate checks that the failures are exactly the pinned
//! ones (manifest verdicts and residual term counts). Everything else must
//! pass outright.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cs_algebra::color::GradingContext;
use cs_algebra::verify::manifest::Manifest;
use cs_algebra::verify::{run_suite, timing_free, IdentityReport, RunConfig, Verdict};

/// Coherence gaps that are findings, not regressions: the reading of the
/// J/K unification relation without the `λ[J0, J0}` term holds only when
/// n = m.
const EXPECTED_COHERENCE_GAPS: &[(&str, (u8, u8, u8))] = &[("eq3.21-variant", (2, 0, 2))];

fn ctx(n: u8, m: u8, sites: u8) -> GradingContext {
    GradingContext::new(n, m, sites).unwrap()
}

fn run(cases: &[&str], contexts: &[GradingContext]) -> Vec<IdentityReport> {
    let cfg = RunConfig {
        contexts: contexts.to_vec(),
        cases: cases.iter().map(|s| s.to_string()).collect(),
        ..RunConfig::default()
    };
    run_suite(&cfg).expect("suite runs")
}

fn describe(r: &IdentityReport) -> String {
    format!("{} ({}|{}) N={}: {} [{}/{} instances, {} residual terms]", r.id, r.n, r.m, r.sites, r.verdict, r.failing_instances, r.instances, r.residual_term_count)
}

struct Gate {
    manifest: Manifest,
    all: Vec<IdentityReport>,
    lines: Vec<(u8, String)>,
    hard_failures: Vec<String>,
}

impl Gate {
    fn criterion(&mut self, k: u8, title: &str, budget: Duration, hard: bool, f: impl FnOnce(&mut Self) -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = f(self);
        let took = start.elapsed();
        let status = if ok { "PASS" } else { "FAIL" };
        let line = format!("{status} criterion {k} ({title}): {detail} [{:.1}s, expected < {}s]", took.as_secs_f64(), budget.as_secs());
        self.lines.push((k, line));
        if !ok && hard {
            self.hard_failures.push(format!("criterion {k} failed"));
        }
    }

    /// Records reports, and flags any deviation from the pinned manifest.
    fn collect(&mut self, reports: &[IdentityReport]) {
        for m in self.manifest.compare(reports) {
            self.hard_failures.push(format!(
                "{} ({}|{}) N={}: expected {}, got {}{}",
                m.id,
                m.n,
                m.m,
                m.sites,
                m.expected,
                m.actual,
                m.detail.map(|d| format!(" ({d})")).unwrap_or_default()
            ));
        }
        self.all.extend_from_slice(reports);
    }
}

fn not_passing(reports: &[IdentityReport]) -> Vec<&IdentityReport> {
    reports.iter().filter(|r| r.verdict != Verdict::Pass).collect()
}

fn main() -> ExitCode {
    let mut gate = Gate { manifest: Manifest::embedded(), all: Vec::new(), lines: Vec::new(), hard_failures: Vec::new() };
    let secs = Duration::from_secs;

    gate.criterion(1, "structural suite", secs(10), true, |g| {
        let contexts: Vec<_> = [(2, 0), (1, 1), (2, 1)].iter().flat_map(|&(n, m)| [ctx(n, m, 2), ctx(n, m, 3)]).collect();
        let r = run(&["eq2.7", "eq2.10", "supercommute", "p-conjugation"], &contexts);
        g.collect(&r);
        let bad = not_passing(&r);
        (bad.is_empty(), format!("{} case/context runs, {} not passing", r.len(), bad.len()))
    });

    gate.criterion(2, "integrability suite", secs(120), true, |g| {
        let r = run(
            &["eq2.11-calogero", "eq2.11-sutherland", "eq2.16", "eq2.21", "jp-conservation"],
            &[ctx(1, 1, 2), ctx(2, 0, 2), ctx(1, 1, 3)],
        );
        g.collect(&r);
        let bad = not_passing(&r);
        (bad.is_empty(), format!("{} case/context runs, {} not passing", r.len(), bad.len()))
    });

    gate.criterion(3, "Yangian suite", secs(600), false, |g| {
        let mut r = run(
            &["eq2.17", "eq2.17-variant", "eq3.1", "eq3.2", "eq3.3", "eq3.4", "eq3.5"],
            &[ctx(1, 1, 2), ctx(2, 0, 2)],
        );
        r.extend(run(&["eq3.5"], &[ctx(2, 1, 2)]));
        g.collect(&r);
        let bad = not_passing(&r);
        let variant_ok = r.iter().filter(|x| x.id == "eq2.17-variant").all(|x| x.verdict == Verdict::Pass);
        let detail = if bad.is_empty() {
            format!("{} case/context runs pass", r.len())
        } else {
            format!(
                "{}; graded T_-1 reading {}",
                bad.iter().map(|x| describe(x)).collect::<Vec<_>>().join("; "),
                if variant_ok { "passes" } else { "also fails" }
            )
        };
        (bad.is_empty(), detail)
    });

    gate.criterion(4, "loop/unification suite", secs(900), false, |g| {
        let strict = ["eq3.10", "eq3.11", "eq3.12", "eq3.15", "eq3.17", "eq3.18", "eq3.22", "eq3.23", "eq3.27"];
        let recorded = ["eq3.21", "eq3.21-variant", "eq3.21-sdim", "eq3.23-variant", "eq3.27-variant"];
        let all: Vec<&str> = strict.iter().chain(recorded.iter()).copied().collect();
        let r = run(&all, &[ctx(1, 1, 2)]);
        g.collect(&r);
        let bad: Vec<_> = r.iter().filter(|x| strict.contains(&x.id.as_str()) && x.verdict != Verdict::Pass).collect();
        // The eq3.21 readings must be pinned with their residual sizes.
        let pinned = r.iter().filter(|x| x.id.starts_with("eq3.21") && x.verdict == Verdict::Fail).all(|x| {
            g.manifest.expectation(x).is_some_and(|e| e.residual_term_count == Some(x.residual_term_count))
        });
        let readings = r
            .iter()
            .filter(|x| recorded.contains(&x.id.as_str()))
            .map(|x| format!("{} {}", x.id, x.verdict))
            .collect::<Vec<_>>()
            .join(", ");
        let detail = if bad.is_empty() {
            format!("all stated relations pass; readings: {readings}")
        } else {
            format!("{}; readings: {readings}", bad.iter().map(|x| describe(x)).collect::<Vec<_>>().join("; "))
        };
        (bad.is_empty() && pinned, detail)
    });

    gate.criterion(5, "W-infinity suite", secs(900), true, |g| {
        let r = run(
            &["eq3.31", "eq3.32", "eq3.34-leading", "eq3.35-leading", "eq3.36-leading", "eq3.38"],
            &[ctx(1, 1, 2)],
        );
        g.collect(&r);
        let bad = not_passing(&r);
        let n: usize = r.iter().map(|x| x.instances).sum();
        (bad.is_empty(), format!("{} instances over {} cases, {} cases not passing", n, r.len(), bad.len()))
    });

    gate.criterion(7, "specialization coherence", secs(300), false, |g| {
        let r = run(&["all"], &[ctx(1, 1, 2), ctx(2, 0, 2), ctx(1, 0, 2)]);
        g.collect(&r);
        let mut gaps = BTreeSet::new();
        for graded in r.iter().filter(|x| x.context() == (1, 1, 2) && x.verdict == Verdict::Pass) {
            for even in r.iter().filter(|x| x.id == graded.id && x.m == 0) {
                if !matches!(even.verdict, Verdict::Pass) {
                    gaps.insert((even.id.clone(), even.context()));
                }
            }
        }
        let expected: BTreeSet<_> = EXPECTED_COHERENCE_GAPS.iter().map(|(id, c)| (id.to_string(), *c)).collect();
        if gaps != expected {
            g.hard_failures.push(format!("coherence gaps changed: {gaps:?}"));
        }
        let detail = if gaps.is_empty() {
            "every case passing at (1|1) also passes at (2|0) and (1|0)".to_string()
        } else {
            format!(
                "passes at (1|1) but not at the even restriction: {}",
                gaps.iter().map(|(id, (n, m, s))| format!("{id} ({n}|{m}) N={s}")).collect::<Vec<_>>().join(", ")
            )
        };
        (gaps.is_empty(), detail)
    });

    gate.criterion(8, "determinism", secs(120), true, |g| {
        let base = RunConfig {
            contexts: vec![ctx(2, 1, 2), ctx(1, 1, 2)],
            cases: ["eq2.17", "eq3.5", "eq3.12", "eq3.21", "eq3.27"].iter().map(|s| s.to_string()).collect(),
            ..RunConfig::default()
        };
        let a = run_suite(&base).unwrap();
        let b = run_suite(&RunConfig { workers: 2, ..base }).unwrap();
        g.collect(&a);
        g.collect(&b);
        let ja = serde_json::to_string(&timing_free(&a)).unwrap();
        let jb = serde_json::to_string(&timing_free(&b)).unwrap();
        (ja == jb, format!("{} reports, byte-identical modulo timing across 1 and 2 workers: {}", a.len(), ja == jb))
    });

    // Double-entry covers every report produced above.
    let total = gate.all.len();
    gate.criterion(6, "double-entry", secs(1), true, |g| {
        let disagree: Vec<_> = g.all.iter().filter(|r| !r.oracle_agrees).map(describe).collect();
        (disagree.is_empty(), format!("symbolic and oracle verdicts agree on {}/{} reports{}", total - disagree.len(), total,
            if disagree.is_empty() { String::new() } else { format!(": {}", disagree.join("; ")) }))
    });

    gate.lines.sort_by_key(|(k, _)| *k);
    for (_, line) in &gate.lines {
        println!("{line}");
    }
    if gate.hard_failures.is_empty() {
        println!("acceptance gate: all deviations are the pinned ones");
        ExitCode::SUCCESS
    } else {
        for f in &gate.hard_failures {
            println!("gate violation: {f}");
        }
        ExitCode::FAILURE
    }
}
