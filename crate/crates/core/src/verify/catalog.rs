//! The identity catalog: every relation as a list of `lhs = rhs` instances
//! over its index ranges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::Expr;
use crate::color::GradingContext;
use crate::model::{Generator, ModelContext, ModelKind, LaxPart, TMinusOne, TensorKind, WForm};
use crate::scalar::RatFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LeadingOrder,
}

/// Which coupling a case runs at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingUse {
    /// The run's coupling.
    Run,
    /// Always `λ = 0`.
    Zero,
}

pub struct CaseInfo {
    pub id: &'static str,
    pub mode: Mode,
    pub coupling: CouplingUse,
    pub summary: &'static str,
}

macro_rules! case {
    ($id:expr, $mode:ident, $summary:expr) => {
        CaseInfo { id: $id, mode: Mode::$mode, coupling: CouplingUse::Run, summary: $summary }
    };
    ($id:expr, $mode:ident, $coupling:ident, $summary:expr) => {
        CaseInfo { id: $id, mode: Mode::$mode, coupling: CouplingUse::$coupling, summary: $summary }
    };
}

pub const CATALOG: &[CaseInfo] = &[
    case!("eq2.7", Exact, "gl(n|m) bracket of matrix units at one site"),
    case!("eq2.10", Exact, "P_ij = P_ji, P_ij^2 = 1, P_ij P_jk = P_ik P_ij"),
    case!("supercommute", Exact, "units at distinct sites supercommute"),
    case!("p-conjugation", Exact, "P_ij E_i P_ij = E_j"),
    case!("eq2.11-calogero", Exact, "[H_c, L] = LM - ML"),
    case!("eq2.11-sutherland", Exact, "[H_s, L] = LM - ML"),
    case!("eq2.16", Exact, "row and column sums of M vanish, both models"),
    case!("eq2.17", Exact, "Yangian relation, s,p in {-1,0,1}, T_-1 = δ/λ"),
    case!("eq2.17-variant", Exact, "Yangian relation, s,p in {-1,0,1}, T_-1 = (-1)^p(a) δ/λ"),
    case!("eq2.21", Exact, "T_0 and T_1 commute with H_s"),
    case!("eq3.1", Exact, "[T0, T0} closes on T0"),
    case!("eq3.2", Exact, "[T0, T1} closes on T1"),
    case!("eq3.3", Exact, "[T1, T1} in terms of T2 and T0 T1"),
    case!("eq3.4", Exact, "T2 from L^2 equals its explicit expansion"),
    case!("eq3.5", Exact, "Serre-like relation with the O tensor"),
    case!("eq3.10", Exact, "[J0, J1} closes on J1"),
    case!("eq3.11", Exact, "[J1, J1} closes on J2"),
    case!("eq3.12", Exact, "Serre relation for J"),
    case!("eq3.15", Exact, "[J_s, J_p} closes on J_{s+p}, s+p <= 3"),
    case!("eq3.17", Exact, "[K_s, K_p} closes on K_{s+p}, s+p <= 3"),
    case!("eq3.18", Exact, "Serre relation for K"),
    case!("jp-conservation", Exact, "J_p commutes with H_c"),
    case!("eq3.21", Exact, "J and K brackets produce T1, with -λ[J0, J0}"),
    case!("eq3.21-variant", Exact, "J and K brackets produce T1, without the λ[J0, J0} term"),
    case!("eq3.21-sdim", Exact, "J and K brackets produce T1, with (n - m)λ[J0, J0}"),
    case!("eq3.22", Exact, "Serre-like relation for J1 + T1 with the M tensor"),
    case!("eq3.23", Exact, "Serre-like relation for K1 + T1 with the N tensor"),
    case!("eq3.23-variant", Exact, "Serre-like relation for K1 + T1 with N = P(0,1)"),
    case!("eq3.27", Exact, "Serre-like relation for Q1(x,y) with the P tensor"),
    case!("eq3.27-variant", Exact, "Serre-like relation for Q1(x,y), λ on the x-tail of P"),
    case!("eq3.31", Exact, "W recursion equals the closed form; leading symbol"),
    case!("eq3.32", Exact, "Q recursion equals the closed form; leading symbol"),
    case!("eq3.34-leading", LeadingOrder, "[W, W] leading order"),
    case!("eq3.35-leading", LeadingOrder, "[W, Q] leading order"),
    case!("eq3.36-leading", LeadingOrder, "[Q, Q} leading order"),
    case!("eq3.38", Exact, Zero, "free colored W algebra at λ = 0"),
];

pub fn find(id: &str) -> Option<&'static CaseInfo> {
    CATALOG.iter().find(|c| c.id == id)
}

/// One `lhs = rhs` statement. With `leading = Some(d)` the statement is
/// that `lhs - rhs` has derivative order below `d`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub leading: Option<i64>,
}

impl Instance {
    fn exact(label: String, lhs: Expr, rhs: Expr) -> Instance {
        Instance { label, lhs, rhs, leading: None }
    }
}

/// Ranges that bound the families.
#[derive(Debug, Clone)]
pub struct Ranges {
    pub max_spin: u8,
    pub max_degree: u8,
    pub seed: u64,
    /// Color sextuples drawn when `n + m >= 3`.
    pub sample: usize,
}

impl Default for Ranges {
    fn default() -> Self {
        Ranges { max_spin: 3, max_degree: 2, seed: 0x5eed, sample: 48 }
    }
}

fn sgn(e: u8) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Ctx<'a> {
    g: GradingContext,
    lam: RatFn,
    ranges: &'a Ranges,
    case_index: u64,
}

impl Ctx<'_> {
    fn p(&self, a: u8) -> u8 {
        self.g.parity(a)
    }

    fn eta(&self, a: u8, b: u8, c: u8, d: u8) -> u8 {
        ((self.p(a) + self.p(b)) * (self.p(c) + self.p(d))) % 2
    }

    fn pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for a in self.g.colors() {
            for b in self.g.colors() {
                out.push((a, b));
            }
        }
        out
    }

    fn quadruples(&self) -> Vec<[u8; 4]> {
        let mut out = Vec::new();
        for (a, b) in self.pairs() {
            for (c, d) in self.pairs() {
                out.push([a, b, c, d]);
            }
        }
        out
    }

    /// All sextuples for two colors; a seeded sample otherwise.
    fn sextuples(&self) -> Vec<[u8; 6]> {
        let k = self.g.dim();
        if k <= 2 {
            let mut out = Vec::new();
            for [a, b, c, d] in self.quadruples() {
                for (e, f) in self.pairs() {
                    out.push([a, b, c, d, e, f]);
                }
            }
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.ranges.seed.wrapping_add(self.case_index));
        let mut out: Vec<[u8; 6]> = Vec::new();
        while out.len() < self.ranges.sample {
            let mut t = [0u8; 6];
            for x in &mut t {
                *x = rng.gen_range(1..=k);
            }
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    fn distinct_pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for i in self.g.site_range() {
            for j in self.g.site_range().filter(|j| *j != i) {
                out.push((i, j));
            }
        }
        out
    }

    /// `δ_bc X^{ad} - (-1)^η δ_da X^{cb}`.
    fn loop_rhs(&self, [a, b, c, d]: [u8; 4], x: impl Fn(u8, u8) -> Expr) -> Expr {
        let mut terms = Vec::new();
        if b == c {
            terms.push(x(a, d));
        }
        if a == d {
            terms.push(Expr::times(-sgn(self.eta(a, b, c, d)), x(c, b)));
        }
        Expr::Sum(terms)
    }

    /// `[A0^{ab}, [G^{cd}, G^{ef}}} - [G^{ab}, [A0^{cd}, G^{ef}}}`.
    fn serre_lhs(&self, [a, b, c, d, e, f]: [u8; 6], a0: impl Fn(u8, u8) -> Expr, g: impl Fn(u8, u8) -> Expr) -> Expr {
        Expr::sub(
            Expr::bracket(a0(a, b), Expr::bracket(g(c, d), g(e, f))),
            Expr::bracket(g(a, b), Expr::bracket(a0(c, d), g(e, f))),
        )
    }

    /// `λ(δ_bc X^{ad}_{ef} - δ_de X^{ab}_{cf} + (-1)^δ δ_cf X^{ab}_{ed}
    ///  + (-1)^η δ_be X^{cd}_{af} - (-1)^η δ_ad X^{cb}_{ef} - (-1)^γ δ_af X^{cd}_{eb})`.
    fn serre_rhs(&self, [a, b, c, d, e, f]: [u8; 6], kind: TensorKind) -> Expr {
        let x = |a, b, c, d| Expr::gen(Generator::Tensor { kind, a, b, c, d });
        let delta = ((self.p(c) + self.p(d)) * (self.p(e) + self.p(f))) % 2;
        let gamma = ((self.p(a) + self.p(b)) * (self.p(c) + self.p(d) + self.p(e) + self.p(f))) % 2;
        let eta = self.eta(a, b, c, d);
        let mut terms = Vec::new();
        if b == c {
            terms.push(x(a, d, e, f));
        }
        if d == e {
            terms.push(Expr::times(-1, x(a, b, c, f)));
        }
        if c == f {
            terms.push(Expr::times(sgn(delta), x(a, b, e, d)));
        }
        if b == e {
            terms.push(Expr::times(sgn(eta), x(c, d, a, f)));
        }
        if a == d {
            terms.push(Expr::times(-sgn(eta), x(c, b, e, f)));
        }
        if a == f {
            terms.push(Expr::times(-sgn(gamma), x(c, d, e, b)));
        }
        if terms.is_empty() {
            return Expr::zero();
        }
        Expr::scaled(self.lam.clone(), Expr::Sum(terms))
    }
}

fn t(p: i8, a: u8, b: u8) -> Expr {
    Expr::gen(Generator::T { p, a, b, minus_one: TMinusOne::Plain })
}

fn j(p: u8, a: u8, b: u8) -> Expr {
    Expr::gen(Generator::J { p, a, b })
}

fn k(p: u8, a: u8, b: u8) -> Expr {
    Expr::gen(Generator::K { p, a, b })
}

fn unit(site: u8, a: u8, b: u8) -> Expr {
    Expr::gen(Generator::Unit { site, a, b })
}

fn perm(i: u8, j: u8) -> Expr {
    Expr::gen(Generator::Permutation { i, j })
}

fn w(s: u8, p: u8) -> Expr {
    Expr::gen(Generator::W { s, p, form: WForm::Recursive })
}

fn q(s: u8, p: u8, a: u8, b: u8) -> Expr {
    Expr::gen(Generator::Q { s, p, a, b, form: WForm::Recursive })
}

fn quad_label([a, b, c, d]: [u8; 4]) -> String {
    format!("a={a} b={b} c={c} d={d}")
}

fn sext_label([a, b, c, d, e, f]: [u8; 6]) -> String {
    format!("a={a} b={b} c={c} d={d} e={e} f={f}")
}

/// Structure constant of the free colored W algebra,
/// `A! B! / (k! (A-k)! (B-k)!)`; zero when `k` exceeds `A` or `B`.
pub fn free_w_coefficient(a: u64, b: u64, k: u64) -> i64 {
    if k > a || k > b {
        return 0;
    }
    let fact = |n: u64| (1..=n).product::<u64>() as i128;
    (fact(a) * fact(b) / (fact(k) * fact(a - k) * fact(b - k))) as i64
}

/// Instances of case `id` at the given context.
pub fn instances(id: &str, ctx: &ModelContext, ranges: &Ranges) -> Vec<Instance> {
    let case_index = CATALOG.iter().position(|c| c.id == id).expect("known case id") as u64;
    let c = Ctx { g: ctx.grading, lam: ctx.lambda(), ranges, case_index };
    let g = c.g;
    let mut out = Vec::new();
    match id {
        "eq2.7" => {
            for site in g.site_range() {
                for q4 in c.quadruples() {
                    let [a, b, cc, d] = q4;
                    out.push(Instance::exact(
                        format!("site={site} {}", quad_label(q4)),
                        Expr::bracket(unit(site, a, b), unit(site, cc, d)),
                        c.loop_rhs(q4, |x, y| unit(site, x, y)),
                    ));
                }
            }
        }
        "eq2.10" => {
            for (i, jj) in c.distinct_pairs() {
                if i < jj {
                    out.push(Instance::exact(format!("P{i}{jj}=P{jj}{i}"), perm(i, jj), perm(jj, i)));
                    out.push(Instance::exact(
                        format!("P{i}{jj}^2=1"),
                        Expr::product(vec![perm(i, jj), perm(i, jj)]),
                        Expr::gen(Generator::Identity),
                    ));
                }
                for kk in g.site_range().filter(|kk| *kk != i && *kk != jj) {
                    out.push(Instance::exact(
                        format!("P{i}{jj}P{jj}{kk}=P{i}{kk}P{i}{jj}"),
                        Expr::product(vec![perm(i, jj), perm(jj, kk)]),
                        Expr::product(vec![perm(i, kk), perm(i, jj)]),
                    ));
                }
            }
        }
        "supercommute" => {
            for (i, jj) in c.distinct_pairs() {
                for q4 in c.quadruples() {
                    let [a, b, cc, d] = q4;
                    out.push(Instance::exact(
                        format!("i={i} j={jj} {}", quad_label(q4)),
                        Expr::product(vec![unit(i, a, b), unit(jj, cc, d)]),
                        Expr::times(sgn(c.eta(a, b, cc, d)), Expr::product(vec![unit(jj, cc, d), unit(i, a, b)])),
                    ));
                }
            }
        }
        "p-conjugation" => {
            for (i, jj) in c.distinct_pairs() {
                for (a, b) in c.pairs() {
                    out.push(Instance::exact(
                        format!("i={i} j={jj} a={a} b={b}"),
                        Expr::product(vec![perm(i, jj), unit(i, a, b), perm(i, jj)]),
                        unit(jj, a, b),
                    ));
                }
            }
        }
        "eq2.11-calogero" | "eq2.11-sutherland" => {
            let kind = if id.ends_with("calogero") { ModelKind::Calogero } else { ModelKind::Sutherland };
            let lax = |part, i, j| Expr::gen(Generator::Lax { kind, part, i, j });
            for i in g.site_range() {
                for jj in g.site_range() {
                    let mut rhs = Vec::new();
                    for kk in g.site_range() {
                        rhs.push(Expr::product(vec![lax(LaxPart::L, i, kk), lax(LaxPart::M, kk, jj)]));
                        rhs.push(Expr::times(-1, Expr::product(vec![lax(LaxPart::M, i, kk), lax(LaxPart::L, kk, jj)])));
                    }
                    out.push(Instance::exact(
                        format!("i={i} j={jj}"),
                        Expr::bracket(Expr::gen(Generator::Hamiltonian(kind)), lax(LaxPart::L, i, jj)),
                        Expr::Sum(rhs),
                    ));
                }
            }
        }
        "eq2.16" => {
            for kind in [ModelKind::Calogero, ModelKind::Sutherland] {
                let m = |i, j| Expr::gen(Generator::Lax { kind, part: LaxPart::M, i, j });
                for i in g.site_range() {
                    out.push(Instance::exact(
                        format!("{kind:?} row {i}"),
                        Expr::Sum(g.site_range().map(|jj| m(i, jj)).collect()),
                        Expr::zero(),
                    ));
                    out.push(Instance::exact(
                        format!("{kind:?} column {i}"),
                        Expr::Sum(g.site_range().map(|jj| m(jj, i)).collect()),
                        Expr::zero(),
                    ));
                }
            }
        }
        "eq2.17" | "eq2.17-variant" => {
            let minus_one = if id == "eq2.17" { TMinusOne::Plain } else { TMinusOne::Graded };
            let tt = |p: i8, a, b| Expr::gen(Generator::T { p, a, b, minus_one });
            for s in -1i8..=1 {
                for p in -1i8..=1 {
                    for q4 in c.quadruples() {
                        let [a, b, cc, d] = q4;
                        let e = (c.p(cc) * c.p(a) + c.p(cc) * c.p(b) + c.p(b) * c.p(a)) % 2;
                        let lhs = Expr::sub(
                            Expr::bracket(tt(s, a, b), tt(p + 1, cc, d)),
                            Expr::bracket(tt(s + 1, a, b), tt(p, cc, d)),
                        );
                        let rhs = Expr::scaled(
                            c.lam.clone(),
                            Expr::times(
                                sgn(e),
                                Expr::sub(
                                    Expr::product(vec![tt(p, cc, b), tt(s, a, d)]),
                                    Expr::product(vec![tt(s, cc, b), tt(p, a, d)]),
                                ),
                            ),
                        );
                        out.push(Instance::exact(format!("s={s} p={p} {}", quad_label(q4)), lhs, rhs));
                    }
                }
            }
        }
        "eq2.21" => {
            let h = Expr::gen(Generator::Hamiltonian(ModelKind::Sutherland));
            for (a, b) in c.pairs() {
                for p in 0..=1 {
                    out.push(Instance::exact(
                        format!("p={p} a={a} b={b}"),
                        Expr::bracket(t(p, a, b), h.clone()),
                        Expr::zero(),
                    ));
                }
            }
        }
        "eq3.1" | "eq3.2" => {
            let p = if id == "eq3.1" { 0 } else { 1 };
            for q4 in c.quadruples() {
                let [a, b, cc, d] = q4;
                out.push(Instance::exact(
                    quad_label(q4),
                    Expr::bracket(t(0, a, b), t(p, cc, d)),
                    c.loop_rhs(q4, |x, y| t(p, x, y)),
                ));
            }
        }
        "eq3.3" => {
            for q4 in c.quadruples() {
                let [a, b, cc, d] = q4;
                let beta = (c.p(b) * c.p(cc) + c.p(cc) * c.p(d) + c.p(b) * c.p(d)) % 2;
                let cross = Expr::sub(
                    Expr::product(vec![t(0, a, d), t(1, cc, b)]),
                    Expr::product(vec![t(1, a, d), t(0, cc, b)]),
                );
                let rhs = Expr::Sum(vec![
                    c.loop_rhs(q4, |x, y| t(2, x, y)),
                    Expr::scaled(c.lam.clone(), Expr::times(-sgn(beta), cross)),
                ]);
                out.push(Instance::exact(quad_label(q4), Expr::bracket(t(1, a, b), t(1, cc, d)), rhs));
            }
        }
        "eq3.4" => {
            for (a, b) in c.pairs() {
                out.push(Instance::exact(
                    format!("a={a} b={b}"),
                    t(2, a, b),
                    Expr::gen(Generator::T2Explicit { a, b }),
                ));
            }
        }
        "eq3.5" => {
            for s6 in c.sextuples() {
                out.push(Instance::exact(
                    sext_label(s6),
                    c.serre_lhs(s6, |x, y| t(0, x, y), |x, y| t(1, x, y)),
                    c.serre_rhs(s6, TensorKind::O),
                ));
            }
        }
        "eq3.10" | "eq3.11" => {
            let (l, r) = if id == "eq3.10" { (0, 1) } else { (1, 1) };
            for q4 in c.quadruples() {
                let [a, b, cc, d] = q4;
                out.push(Instance::exact(
                    quad_label(q4),
                    Expr::bracket(j(l, a, b), j(r, cc, d)),
                    c.loop_rhs(q4, |x, y| j(l + r, x, y)),
                ));
            }
        }
        "eq3.12" | "eq3.18" => {
            let gen = if id == "eq3.12" { j } else { k };
            for s6 in c.sextuples() {
                out.push(Instance::exact(
                    sext_label(s6),
                    c.serre_lhs(s6, |x, y| gen(0, x, y), |x, y| gen(1, x, y)),
                    Expr::zero(),
                ));
            }
        }
        "eq3.15" | "eq3.17" => {
            let gen = if id == "eq3.15" { j } else { k };
            for s in 0..=3u8 {
                for p in 0..=(3 - s) {
                    for q4 in c.quadruples() {
                        let [a, b, cc, d] = q4;
                        out.push(Instance::exact(
                            format!("s={s} p={p} {}", quad_label(q4)),
                            Expr::bracket(gen(s, a, b), gen(p, cc, d)),
                            c.loop_rhs(q4, |x, y| gen(s + p, x, y)),
                        ));
                    }
                }
            }
        }
        "jp-conservation" => {
            let h = Expr::gen(Generator::Hamiltonian(ModelKind::Calogero));
            for p in 0..=ranges.max_degree {
                for (a, b) in c.pairs() {
                    out.push(Instance::exact(
                        format!("p={p} a={a} b={b}"),
                        Expr::bracket(j(p, a, b), h.clone()),
                        Expr::zero(),
                    ));
                }
            }
        }
        "eq3.21" | "eq3.21-variant" | "eq3.21-sdim" => {
            for q4 in c.quadruples() {
                let [a, b, cc, d] = q4;
                let mut lhs = vec![
                    Expr::bracket(j(1, a, b), k(1, cc, d)),
                    Expr::bracket(k(1, a, b), j(1, cc, d)),
                ];
                // The same-site part of (J0 J0)^{cd} is (n - m) J0^{cd}; the
                // `-sdim` reading cancels it exactly.
                let weight = match id {
                    "eq3.21" => Some(c.lam.neg()),
                    "eq3.21-sdim" => Some(&c.lam * &RatFn::int(c.g.m as i64 - c.g.n as i64)),
                    _ => None,
                };
                if let Some(w) = weight {
                    lhs.push(Expr::scaled(w, Expr::bracket(j(0, a, b), j(0, cc, d))));
                }
                lhs.push(Expr::scaled(
                    c.lam.clone(),
                    Expr::bracket(j(0, a, b), Expr::gen(Generator::JJ { a: cc, b: d })),
                ));
                out.push(Instance::exact(
                    quad_label(q4),
                    Expr::Sum(lhs),
                    Expr::times(2, c.loop_rhs(q4, |x, y| t(1, x, y))),
                ));
            }
        }
        "eq3.22" | "eq3.23" | "eq3.23-variant" | "eq3.27" | "eq3.27-variant" => {
            let (kind, gen): (TensorKind, Box<dyn Fn(u8, u8) -> Expr>) = match id {
                "eq3.22" => (TensorKind::M, Box::new(|a, b| Expr::Sum(vec![j(1, a, b), t(1, a, b)]))),
                "eq3.23" => (TensorKind::N, Box::new(|a, b| Expr::Sum(vec![k(1, a, b), t(1, a, b)]))),
                "eq3.23-variant" => {
                    (TensorKind::NDerived, Box::new(|a, b| Expr::Sum(vec![k(1, a, b), t(1, a, b)])))
                }
                "eq3.27" => (TensorKind::P, Box::new(|a, b| Expr::gen(Generator::Q1 { a, b }))),
                _ => (TensorKind::PDerived, Box::new(|a, b| Expr::gen(Generator::Q1 { a, b }))),
            };
            for s6 in c.sextuples() {
                out.push(Instance::exact(
                    sext_label(s6),
                    c.serre_lhs(s6, |x, y| j(0, x, y), &gen),
                    c.serre_rhs(s6, kind),
                ));
            }
        }
        "eq3.31" | "eq3.32" => {
            let colors: Vec<Option<(u8, u8)>> =
                if id == "eq3.31" { vec![None] } else { c.pairs().into_iter().map(Some).collect() };
            for s in 1..=ranges.max_spin {
                for p in 0..=ranges.max_degree {
                    for col in &colors {
                        let (rec, closed, free, label) = match *col {
                            None => (
                                w(s, p),
                                Expr::gen(Generator::W { s, p, form: WForm::Closed }),
                                Expr::gen(Generator::WFree { s, p }),
                                format!("s={s} p={p}"),
                            ),
                            Some((a, b)) => (
                                q(s, p, a, b),
                                Expr::gen(Generator::Q { s, p, a, b, form: WForm::Closed }),
                                Expr::gen(Generator::QFree { s, p, a, b }),
                                format!("s={s} p={p} a={a} b={b}"),
                            ),
                        };
                        out.push(Instance::exact(format!("{label} closed form"), rec.clone(), closed));
                        out.push(Instance {
                            label: format!("{label} leading symbol"),
                            lhs: rec,
                            rhs: Expr::times(sgn(s - 1), free),
                            leading: Some((p + s - 1) as i64),
                        });
                    }
                }
            }
        }
        "eq3.34-leading" | "eq3.35-leading" | "eq3.36-leading" => {
            let spins: Vec<u8> = (1..=ranges.max_spin.min(2)).collect();
            for &s in &spins {
                for &s2 in &spins {
                    for p in 0..=ranges.max_degree {
                        for qq in 0..=ranges.max_degree {
                            let big_a = (p + s - 1) as i64;
                            let big_b = (qq + s2 - 1) as i64;
                            let coeff = (s as i64 - 1) * qq as i64 - (s2 as i64 - 1) * p as i64;
                            let label = format!("s={s} s'={s2} p={p} q={qq}");
                            match id {
                                "eq3.34-leading" => {
                                    let rhs = if coeff != 0 && s + s2 > 2 {
                                        Expr::times(coeff, w(s + s2 - 2, p + qq))
                                    } else {
                                        Expr::zero()
                                    };
                                    out.push(Instance {
                                        label,
                                        lhs: Expr::bracket(w(s, p), w(s2, qq)),
                                        rhs,
                                        leading: Some(big_a + big_b - 1),
                                    });
                                }
                                "eq3.35-leading" => {
                                    for (a, b) in c.pairs() {
                                        let rhs = if coeff != 0 && s + s2 > 2 {
                                            Expr::times(coeff, q(s + s2 - 2, p + qq, a, b))
                                        } else {
                                            Expr::zero()
                                        };
                                        out.push(Instance {
                                            label: format!("{label} a={a} b={b}"),
                                            lhs: Expr::bracket(w(s, p), q(s2, qq, a, b)),
                                            rhs,
                                            leading: Some(big_a + big_b - 1),
                                        });
                                    }
                                }
                                _ => {
                                    for q4 in c.quadruples() {
                                        let [a, b, cc, d] = q4;
                                        out.push(Instance {
                                            label: format!("{label} {}", quad_label(q4)),
                                            lhs: Expr::bracket(q(s, p, a, b), q(s2, qq, cc, d)),
                                            rhs: c.loop_rhs(q4, |x, y| q(s + s2 - 1, p + qq, x, y)),
                                            leading: Some(big_a + big_b),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        "eq3.38" => {
            let free = |s, p, a, b| Expr::gen(Generator::QFree { s, p, a, b });
            for s in 1..=ranges.max_spin {
                for s2 in 1..=ranges.max_spin {
                    for p in 0..=ranges.max_degree {
                        for qq in 0..=ranges.max_degree {
                            for q4 in c.quadruples() {
                                let [a, b, cc, d] = q4;
                                let side = |x: u8, y: u8, big: u8, small: u8| {
                                    let mut terms = Vec::new();
                                    for kk in 0..=big {
                                        let coef = free_w_coefficient(big as u64, small as u64 - 1, kk as u64);
                                        if coef != 0 {
                                            terms.push(Expr::times(coef, free(s + s2 - 1 - kk, p + qq, x, y)));
                                        }
                                    }
                                    Expr::Sum(terms)
                                };
                                let mut rhs = Vec::new();
                                if b == cc {
                                    rhs.push(side(a, d, p + s - 1, s2));
                                }
                                if a == d {
                                    rhs.push(Expr::times(-sgn(c.eta(a, b, cc, d)), side(cc, b, qq + s2 - 1, s)));
                                }
                                out.push(Instance::exact(
                                    format!("s={s} s'={s2} p={p} q={qq} {}", quad_label(q4)),
                                    Expr::bracket(free(s, p, a, b), free(s2, qq, cc, d)),
                                    Expr::Sum(rhs),
                                ));
                            }
                        }
                    }
                }
            }
        }
        other => panic!("unknown case id {other}"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_coefficients() {
        // x ∂² ∘ x² ∂ : A = 2, B = 2 -> k=0: 1, k=1: 2·2 = 4, k=2: 2
        assert_eq!(free_w_coefficient(2, 2, 0), 1);
        assert_eq!(free_w_coefficient(2, 2, 1), 4);
        assert_eq!(free_w_coefficient(2, 2, 2), 2);
        assert_eq!(free_w_coefficient(3, 1, 2), 0);
    }

    #[test]
    fn catalog_ids_are_unique() {
        let mut ids: Vec<&str> = CATALOG.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CATALOG.len());
    }

    #[test]
    fn sextuples_full_for_two_colors_and_sampled_otherwise() {
        let ranges = Ranges::default();
        let two = ModelContext::new(GradingContext::new(1, 1, 2).unwrap(), Default::default());
        assert_eq!(instances("eq3.12", &two, &ranges).len(), 64);
        let three = ModelContext::new(GradingContext::new(2, 1, 2).unwrap(), Default::default());
        let a = instances("eq3.12", &three, &ranges);
        assert_eq!(a.len(), ranges.sample);
        let b: Vec<String> = instances("eq3.12", &three, &ranges).into_iter().map(|i| i.label).collect();
        assert_eq!(a.into_iter().map(|i| i.label).collect::<Vec<_>>(), b);
    }
}
