//! Identity verification with two independent routes.
//!
//! For each instance `lhs = rhs` the symbolic route compares normal forms.
//! The oracle route applies both sides to every test state
//! `x^α ⊗ v` with `|α| ≤ D` and `v` a color basis vector, where `D` bounds
//! the derivative order of `lhs - rhs` (computed from the leaves).
//!
//! That test space is complete: let `R ≠ 0` be a normal form of order at
//! most `D`, and pick a term whose multi-index `α` has minimal `|α|`. On
//! `x^α` every other derivative word either kills the monomial or would have
//! smaller order, so `R x^α v = α! C(x) v`, where `C` is the color part of
//! the `α` terms. Color words form a basis of the color operators, so
//! `C ≠ 0` and some basis vector `v` has `C v ≠ 0`. Hence `R` vanishes on
//! all test states only if `R = 0`. Amplitudes are exact rational functions,
//! so no evaluation point (and no pole) is involved.

pub mod catalog;
pub mod expr;
pub mod manifest;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{ColorState, GradingContext, KoszulConvention};
use crate::model::{Coupling, Model, ModelContext, ModelError};
use crate::operator::{OperatorError, OperatorSum};
use crate::scalar::{Rat, RatFn, Variable};
use catalog::{CouplingUse, Instance, Mode, Ranges, CATALOG};
use expr::Evaluator;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    EmptyQuantifier,
    Truncated,
    Unsupported,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::EmptyQuantifier => "empty-quantifier",
            Verdict::Truncated => "truncated",
            Verdict::Unsupported => "unsupported",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub n: u8,
    pub m: u8,
    #[serde(rename = "N")]
    pub sites: u8,
    pub mode: String,
    pub lambda: String,
    pub verdict: Verdict,
    pub oracle_agrees: bool,
    pub instances: usize,
    pub failing_instances: usize,
    pub residual_term_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub millis: u64,
}

impl IdentityReport {
    pub fn context(&self) -> (u8, u8, u8) {
        (self.n, self.m, self.sites)
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown case id `{0}`")]
    UnknownCase(String),
    #[error("empty case selection")]
    EmptySelection,
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("could not build the worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub contexts: Vec<GradingContext>,
    pub cases: Vec<String>,
    pub coupling: Coupling,
    /// Raises the oracle's test-space degree above the computed bound.
    pub oracle_degree: Option<u32>,
    pub ranges: Ranges,
    pub term_budget: Option<usize>,
    pub convention: KoszulConvention,
    /// Keep canonical residual text in failing reports.
    pub keep_residuals: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            contexts: default_contexts(),
            cases: CATALOG.iter().map(|c| c.id.to_string()).collect(),
            coupling: Coupling::Symbolic,
            oracle_degree: None,
            ranges: Ranges::default(),
            term_budget: Some(200_000),
            convention: KoszulConvention::Left,
            keep_residuals: false,
            workers: 1,
        }
    }
}

pub fn default_contexts() -> Vec<GradingContext> {
    [(2, 0, 2), (1, 1, 2), (2, 1, 2), (1, 1, 3)]
        .into_iter()
        .map(|(n, m, s)| GradingContext::new(n, m, s).expect("valid default context"))
        .collect()
}

/// Expands `all` and checks every id.
pub fn resolve_cases(selection: &[String]) -> Result<Vec<String>, VerifyError> {
    if selection.is_empty() {
        return Err(VerifyError::EmptySelection);
    }
    let mut out = Vec::new();
    for s in selection {
        if s == "all" {
            out.extend(CATALOG.iter().map(|c| c.id.to_string()));
        } else if catalog::find(s).is_some() {
            out.push(s.clone());
        } else {
            return Err(VerifyError::UnknownCase(s.clone()));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|s| seen.insert(s.clone()));
    Ok(out)
}

/// Shared models for one run, one per (context, coupling).
pub struct ModelPool {
    models: HashMap<(GradingContext, CouplingUse), Arc<Model>>,
}

impl ModelPool {
    pub fn new(contexts: &[GradingContext], coupling: &Coupling, budget: Option<usize>) -> ModelPool {
        let mut models = HashMap::new();
        for g in contexts {
            for (u, c) in [(CouplingUse::Run, coupling.clone()), (CouplingUse::Zero, Coupling::Fixed(Rat::ZERO))] {
                let mut m = Model::new(ModelContext::new(*g, c));
                if let Some(b) = budget {
                    m = m.with_budget(b);
                }
                models.insert((*g, u), Arc::new(m));
            }
        }
        ModelPool { models }
    }

    pub fn get(&self, g: &GradingContext, u: CouplingUse) -> Arc<Model> {
        self.models[&(*g, u)].clone()
    }
}

struct InstanceOutcome {
    symbolic_zero: bool,
    oracle_zero: bool,
    residual: OperatorSum,
}

/// Every monomial of total degree at most `d` in `sites` variables.
fn monomials(sites: u8, d: u32) -> Vec<RatFn> {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..sites {
        let mut next = Vec::new();
        for e in &exps {
            let used: u32 = e.iter().sum();
            for k in 0..=(d - used) {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        exps = next;
    }
    exps.into_iter()
        .map(|e| {
            e.iter().enumerate().fold(RatFn::one(), |acc, (i, k)| &acc * &RatFn::position(i as u8 + 1).pow(*k))
        })
        .collect()
}

/// True iff `residual` annihilates every test state of degree at most `d`.
pub fn oracle_check(residual: &OperatorSum, d: u32, conv: KoszulConvention) -> Result<bool, OperatorError> {
    assert!(residual.max_degree().unwrap_or(0) <= d, "oracle degree below the residual's order");
    let g = *residual.grading();
    for mono in monomials(g.sites, d) {
        for v in g.basis() {
            if !residual.apply(&ColorState::basis_state(g, &v, mono.clone()), conv)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_instance(ev: &mut Evaluator, inst: &Instance, cfg: &RunConfig) -> Result<InstanceOutcome, ModelError> {
    let lhs = ev.normal_form(&inst.lhs)?;
    let rhs = ev.normal_form(&inst.rhs)?;
    let diff = &*lhs - &*rhs;
    // For leading-order statements the part below the threshold is allowed;
    // the oracle checks `lhs - rhs - lower == 0` with `lower` taken from the
    // normal form, and the symbolic route checks that nothing else remains.
    let (residual, lower) = match inst.leading {
        None => (diff, None),
        Some(d) => {
            let lower = diff.below_degree(d.max(0) as u32);
            (&diff - &lower, Some(lower))
        }
    };
    let symbolic_zero = residual.is_zero();

    let mut bound = ev.degree_bound(&inst.lhs)?.max(ev.degree_bound(&inst.rhs)?);
    if let Some(l) = &lower {
        bound = bound.max(l.max_degree().unwrap_or(0));
    }
    let d = bound.max(cfg.oracle_degree.unwrap_or(0));
    let g = ev.model().grading();
    let mut oracle_zero = true;
    'outer: for mono in monomials(g.sites, d) {
        for v in g.basis() {
            let psi = ColorState::basis_state(g, &v, mono.clone());
            let mut out = ev.apply(&inst.lhs, &psi, cfg.convention)?.sub(&ev.apply(&inst.rhs, &psi, cfg.convention)?);
            if let Some(l) = &lower {
                out = out.sub(&l.apply(&psi, cfg.convention)?);
            }
            if !out.is_zero() {
                oracle_zero = false;
                break 'outer;
            }
        }
    }
    Ok(InstanceOutcome { symbolic_zero, oracle_zero, residual })
}

/// Extra check for the `Q_1(x, y)` family: the residual also vanishes at
/// seeded rational points `(x, y)`.
fn parameter_points_vanish(residual: &OperatorSum, seed: u64) -> Result<bool, OperatorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let x = Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let y = Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let r = residual.substitute_parameter(Variable::ParamX, &x)?.substitute_parameter(Variable::ParamY, &y)?;
        if !r.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs one case at one context.
pub fn verify_case(id: &str, model: &Model, cfg: &RunConfig) -> Result<IdentityReport, VerifyError> {
    let info = catalog::find(id).ok_or_else(|| VerifyError::UnknownCase(id.to_string()))?;
    let start = Instant::now();
    let g = model.grading();
    let mut report = IdentityReport {
        id: id.to_string(),
        n: g.n,
        m: g.m,
        sites: g.sites,
        mode: match info.mode {
            Mode::Exact => "exact".into(),
            Mode::LeadingOrder => "leading-order".into(),
        },
        lambda: model.context().coupling.to_string(),
        verdict: Verdict::Pass,
        oracle_agrees: true,
        instances: 0,
        failing_instances: 0,
        residual_term_count: 0,
        first_failure: None,
        note: None,
        residual: None,
        millis: 0,
    };
    let insts = catalog::instances(id, model.context(), &cfg.ranges);
    report.instances = insts.len();
    if insts.is_empty() {
        report.verdict = Verdict::EmptyQuantifier;
        report.millis = start.elapsed().as_millis() as u64;
        return Ok(report);
    }
    let mut ev = Evaluator::new(model);
    for inst in &insts {
        let outcome = match check_instance(&mut ev, inst, cfg) {
            Ok(o) => o,
            Err(e @ (ModelError::TooFewSites(_) | ModelError::SingularCoupling(_))) => {
                report.verdict = Verdict::Unsupported;
                report.note = Some(e.to_string());
                break;
            }
            Err(e @ ModelError::Budget { .. }) => {
                report.verdict = Verdict::Truncated;
                report.note = Some(format!("{}: {e}", inst.label));
                break;
            }
            Err(e) => return Err(e.into()),
        };
        if outcome.symbolic_zero != outcome.oracle_zero {
            report.oracle_agrees = false;
        }
        let mut ok = outcome.symbolic_zero;
        if ok && id.starts_with("eq3.27") {
            let seed = cfg.ranges.seed.wrapping_add(report.instances as u64);
            ok = parameter_points_vanish(&outcome.residual, seed).map_err(ModelError::from)?;
        }
        if !ok {
            report.failing_instances += 1;
            report.residual_term_count += outcome.residual.len();
            if report.first_failure.is_none() {
                report.first_failure = Some(inst.label.clone());
                if cfg.keep_residuals {
                    report.residual = Some(format!("{}\n{}", inst.label, outcome.residual.canonical_text()));
                }
            } else if cfg.keep_residuals {
                if let Some(r) = report.residual.as_mut() {
                    r.push_str(&format!("{}\n{}", inst.label, outcome.residual.canonical_text()));
                }
            }
        }
    }
    if report.verdict == Verdict::Pass && report.failing_instances > 0 {
        report.verdict = Verdict::Fail;
    }
    report.millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs every selected case at every context. Reports come back sorted by
/// catalog order, then by the order of `cfg.contexts`.
pub fn run_suite(cfg: &RunConfig) -> Result<Vec<IdentityReport>, VerifyError> {
    let cases = resolve_cases(&cfg.cases)?;
    let pool = ModelPool::new(&cfg.contexts, &cfg.coupling, cfg.term_budget);
    let mut jobs = Vec::new();
    for id in &cases {
        for (ci, g) in cfg.contexts.iter().enumerate() {
            let order = CATALOG.iter().position(|c| c.id == id).unwrap();
            jobs.push((order, ci, id.clone(), *g));
        }
    }
    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    let mut results: Vec<(usize, usize, IdentityReport)> = threads.install(|| {
        jobs.par_iter()
            .map(|(order, ci, id, g)| {
                let model = pool.get(g, catalog::find(id).unwrap().coupling);
                verify_case(id, &model, cfg).map(|r| (*order, *ci, r))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    results.sort_by_key(|(o, c, _)| (*o, *c));
    Ok(results.into_iter().map(|(_, _, r)| r).collect())
}

/// Serializes reports with the timing fields zeroed.
pub fn timing_free(reports: &[IdentityReport]) -> Vec<IdentityReport> {
    reports.iter().cloned().map(|mut r| {
        r.millis = 0;
        r
    }).collect()
}
