//! Named operators of the Calogero-type and Sutherland-type models.
//!
//! Everything is expanded at concrete `N`. Powers of the Lax matrix only
//! enter through row sums `Σ_j (L^p)_{ij}`, which satisfy
//! `r^{(p)}_i = Σ_k L_{ik} r^{(p-1)}_k` with `r^{(0)}_i = 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::color::{ColorWord, GradingContext};
use crate::operator::{DerivWord, OperatorError, OperatorSum};
use crate::scalar::{Rat, RatFn, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} needs at least two particles")]
    TooFewSites(String),
    #[error("{0} needs an invertible coupling")]
    SingularCoupling(String),
    #[error("{0}: degree or spin out of range")]
    BadRange(String),
    #[error("term budget of {budget} exceeded while building {name}")]
    Budget { name: String, budget: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl From<crate::color::ColorError> for ModelError {
    fn from(e: crate::color::ColorError) -> Self {
        ModelError::Operator(e.into())
    }
}

/// Coupling: a field variable, or pinned to a rational value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum Coupling {
    #[default]
    Symbolic,
    Fixed(Rat),
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Symbolic => write!(f, "symbolic"),
            Coupling::Fixed(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelContext {
    pub grading: GradingContext,
    pub coupling: Coupling,
}

impl ModelContext {
    pub fn new(grading: GradingContext, coupling: Coupling) -> Self {
        ModelContext { grading, coupling }
    }

    pub fn lambda(&self) -> RatFn {
        match &self.coupling {
            Coupling::Symbolic => RatFn::var(Variable::Lambda),
            Coupling::Fixed(v) => RatFn::constant(v.clone()),
        }
    }

    fn lambda_inverse(&self, what: &str) -> Result<RatFn, ModelError> {
        self.lambda().recip().map_err(|_| ModelError::SingularCoupling(what.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Calogero,
    Sutherland,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LaxPart {
    L,
    M,
}

/// How `T_{-1}^{ab}` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TMinusOne {
    /// `λ^{-1} δ_ab`.
    Plain,
    /// `λ^{-1} (-1)^{p(a)} δ_ab`, the supertrace-compatible choice.
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorKind {
    O,
    M,
    N,
    P,
    /// `O + (-1)^β Σ_{i≠j} E_i^{ad} E_j^{cb} (x_i - x_j)`, which is `P(0, 1)`.
    NDerived,
    /// `P` with `λ` on the `2/(x_i - x_j)` tail, as in `M`.
    PDerived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WForm {
    /// One commutator with `Σx²` per spin step.
    Recursive,
    /// Nested commutators of `J_{p+2s-2}` with the Pochhammer prefactor.
    Closed,
}

/// Every operator the verifier can name. `Display` gives the stable name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Hamiltonian(ModelKind),
    Lax { kind: ModelKind, part: LaxPart, i: u8, j: u8 },
    Unit { site: u8, a: u8, b: u8 },
    Permutation { i: u8, j: u8 },
    Identity,
    SumOfSquares,
    T { p: i8, a: u8, b: u8, minus_one: TMinusOne },
    T2Explicit { a: u8, b: u8 },
    J { p: u8, a: u8, b: u8 },
    K { p: u8, a: u8, b: u8 },
    /// `(J_0 J_0)^{ab}`.
    JJ { a: u8, b: u8 },
    Q1 { a: u8, b: u8 },
    Tensor { kind: TensorKind, a: u8, b: u8, c: u8, d: u8 },
    W { s: u8, p: u8, form: WForm },
    Q { s: u8, p: u8, a: u8, b: u8, form: WForm },
    /// `Σ_i E_i^{ab} x_i^{s-1} ∂_i^{p+s-1}`.
    QFree { s: u8, p: u8, a: u8, b: u8 },
    /// `Σ_i x_i^{s-1} ∂_i^{p+s-1}`.
    WFree { s: u8, p: u8 },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = |kind: &ModelKind| match kind {
            ModelKind::Calogero => "c",
            ModelKind::Sutherland => "s",
        };
        match self {
            Generator::Hamiltonian(kind) => write!(f, "H_{}", k(kind)),
            Generator::Lax { kind, part, i, j } => write!(f, "{:?}_{}[{i},{j}]", part, k(kind)),
            Generator::Unit { site, a, b } => write!(f, "E[{site};{a},{b}]"),
            Generator::Permutation { i, j } => write!(f, "P[{i},{j}]"),
            Generator::Identity => write!(f, "1"),
            Generator::SumOfSquares => write!(f, "X2"),
            Generator::T { p, a, b, minus_one } => match (p, minus_one) {
                (-1, TMinusOne::Graded) => write!(f, "T'[-1,{a},{b}]"),
                _ => write!(f, "T[{p},{a},{b}]"),
            },
            Generator::T2Explicit { a, b } => write!(f, "T2x[{a},{b}]"),
            Generator::J { p, a, b } => write!(f, "J[{p},{a},{b}]"),
            Generator::K { p, a, b } => write!(f, "K[{p},{a},{b}]"),
            Generator::JJ { a, b } => write!(f, "JJ[{a},{b}]"),
            Generator::Q1 { a, b } => write!(f, "Q1[{a},{b}]"),
            Generator::Tensor { kind, a, b, c, d } => write!(f, "{kind:?}[{a},{b},{c},{d}]"),
            Generator::W { s, p, form } => match form {
                WForm::Recursive => write!(f, "W[{s},{p}]"),
                WForm::Closed => write!(f, "Wc[{s},{p}]"),
            },
            Generator::Q { s, p, a, b, form } => match form {
                WForm::Recursive => write!(f, "Q[{s},{p},{a},{b}]"),
                WForm::Closed => write!(f, "Qc[{s},{p},{a},{b}]"),
            },
            Generator::QFree { s, p, a, b } => write!(f, "Q0[{s},{p},{a},{b}]"),
            Generator::WFree { s, p } => write!(f, "W0[{s},{p}]"),
        }
    }
}

fn sign(e: u8) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Builds and memoizes named operators for one context. Safe to share
/// between threads; values are computed outside the lock.
pub struct Model {
    ctx: ModelContext,
    budget: Option<usize>,
    ops: Mutex<HashMap<Generator, Arc<OperatorSum>>>,
    rows: Mutex<HashMap<(ModelKind, u8), Arc<Vec<OperatorSum>>>>,
}

impl Model {
    pub fn new(ctx: ModelContext) -> Model {
        Model { ctx, budget: None, ops: Mutex::new(HashMap::new()), rows: Mutex::new(HashMap::new()) }
    }

    /// Fails any build whose result has more terms than `budget`.
    pub fn with_budget(mut self, budget: usize) -> Model {
        self.budget = Some(budget);
        self
    }

    pub fn context(&self) -> &ModelContext {
        &self.ctx
    }

    pub fn grading(&self) -> GradingContext {
        self.ctx.grading
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    fn lam(&self) -> RatFn {
        self.ctx.lambda()
    }

    fn zero(&self) -> OperatorSum {
        OperatorSum::zero(self.grading())
    }

    fn guard(&self, name: &dyn fmt::Display, op: OperatorSum) -> Result<OperatorSum, ModelError> {
        match self.budget {
            Some(b) if op.len() > b => Err(ModelError::Budget { name: name.to_string(), budget: b }),
            _ => Ok(op),
        }
    }

    fn need_pairs(&self, what: &dyn fmt::Display) -> Result<(), ModelError> {
        if self.grading().sites < 2 {
            return Err(ModelError::TooFewSites(what.to_string()));
        }
        Ok(())
    }

    fn check_colors(&self, colors: &[u8]) -> Result<(), ModelError> {
        for c in colors {
            self.grading().check_color(*c)?;
        }
        Ok(())
    }

    /// Cached generator.
    pub fn get(&self, g: &Generator) -> Result<Arc<OperatorSum>, ModelError> {
        if let Some(op) = self.ops.lock().unwrap().get(g) {
            return Ok(op.clone());
        }
        let op = Arc::new(self.guard(g, self.build(g)?)?);
        self.ops.lock().unwrap().insert(g.clone(), op.clone());
        Ok(op)
    }

    fn build(&self, g: &Generator) -> Result<OperatorSum, ModelError> {
        let gc = self.grading();
        match *g {
            Generator::Hamiltonian(kind) => self.hamiltonian(kind),
            Generator::Lax { kind, part, i, j } => {
                self.need_pairs(g)?;
                gc.check_site(i)?;
                gc.check_site(j)?;
                Ok(self.lax_entry(kind, part, i, j))
            }
            Generator::Unit { site, a, b } => Ok(OperatorSum::unit(gc, site, a, b)?),
            Generator::Permutation { i, j } => Ok(OperatorSum::permutation(gc, i, j)?),
            Generator::Identity => Ok(OperatorSum::identity(gc)),
            Generator::SumOfSquares => {
                let sq: Vec<OperatorSum> =
                    gc.site_range().map(|i| OperatorSum::scalar(gc, RatFn::position(i).pow(2))).collect();
                Ok(OperatorSum::sum(gc, &sq))
            }
            Generator::T { p, a, b, minus_one } => self.yangian_t(p, a, b, minus_one),
            Generator::T2Explicit { a, b } => self.t2_explicit(a, b),
            Generator::J { p, a, b } => {
                self.check_colors(&[a, b])?;
                self.dressed(ModelKind::Calogero, p, a, b)
            }
            Generator::K { p, a, b } => self.loop_k(p, a, b),
            Generator::JJ { a, b } => {
                self.check_colors(&[a, b])?;
                let mut parts = Vec::new();
                for e in gc.colors() {
                    let l = self.get(&Generator::J { p: 0, a, b: e })?;
                    let r = self.get(&Generator::J { p: 0, a: e, b })?;
                    parts.push((&*l * &*r).scale_rat(&Rat::int(sign(gc.parity(e)))));
                }
                Ok(OperatorSum::sum(gc, &parts))
            }
            Generator::Q1 { a, b } => {
                let t = self.get(&Generator::T { p: 1, a, b, minus_one: TMinusOne::Plain })?;
                let j = self.get(&Generator::J { p: 1, a, b })?;
                let k = self.get(&Generator::K { p: 1, a, b })?;
                let x = RatFn::var(Variable::ParamX);
                let y = RatFn::var(Variable::ParamY);
                Ok(&(&*t + &j.scale(&x)) + &k.scale(&y))
            }
            Generator::Tensor { kind, a, b, c, d } => self.tensor(kind, a, b, c, d),
            Generator::W { s, p, form } => self.w_family(s, p, None, form),
            Generator::Q { s, p, a, b, form } => {
                self.check_colors(&[a, b])?;
                self.w_family(s, p, Some((a, b)), form)
            }
            Generator::QFree { s, p, a, b } => {
                self.check_colors(&[a, b])?;
                self.free_w(g, s, p, Some((a, b)))
            }
            Generator::WFree { s, p } => self.free_w(g, s, p, None),
        }
    }

    fn free_w(&self, name: &Generator, s: u8, p: u8, colors: Option<(u8, u8)>) -> Result<OperatorSum, ModelError> {
        let g = self.grading();
        if s == 0 {
            return Err(ModelError::BadRange(name.to_string()));
        }
        let mut parts = Vec::new();
        for i in g.site_range() {
            let xd = OperatorSum::term(
                g,
                RatFn::position(i).pow(s as u32 - 1),
                ColorWord::identity(),
                DerivWord::single(g.sites, i, p + s - 1),
            );
            parts.push(match colors {
                Some((a, b)) => &OperatorSum::unit(g, i, a, b)? * &xd,
                None => xd,
            });
        }
        Ok(OperatorSum::sum(g, &parts))
    }

    /// `H_c` or `H_s`. In `H_c` the pair term `P_ij ∂_i ω_ij` is read as
    /// `P_ij (∂_i ω_ij) = -P_ij ω_ij²`, the derivative acting on `ω_ij` only.
    pub fn hamiltonian(&self, kind: ModelKind) -> Result<OperatorSum, ModelError> {
        self.need_pairs(&Generator::Hamiltonian(kind))?;
        let g = self.grading();
        let lam = self.lam();
        let half = RatFn::constant(Rat::new(1, 2));
        let mut parts = Vec::new();
        for i in g.site_range() {
            let kin = match kind {
                ModelKind::Calogero => OperatorSum::derivative(g, i, 2)?,
                ModelKind::Sutherland => {
                    let xd = &OperatorSum::position(g, i) * &OperatorSum::derivative(g, i, 1)?;
                    &xd * &xd
                }
            };
            parts.push(kin.scale(&half));
        }
        let half_lam = &half * &lam;
        for i in g.site_range() {
            for j in g.site_range().filter(|j| *j != i) {
                let p = OperatorSum::permutation(g, i, j)?;
                let pair = match kind {
                    ModelKind::Calogero => {
                        let w2 = RatFn::omega(i, j).pow(2);
                        // P (∂_i ω_ij) + λ ω_ij ω_ji
                        &p.scale(&w2.neg()) + &OperatorSum::scalar(g, (&lam * &w2).neg())
                    }
                    ModelKind::Sutherland => {
                        let kernel = &RatFn::theta(i, j) * &RatFn::theta(j, i);
                        &p.scale(&kernel) + &OperatorSum::scalar(g, &lam * &kernel)
                    }
                };
                parts.push(pair.scale(&half_lam));
            }
        }
        Ok(OperatorSum::sum(g, &parts))
    }

    /// Full Lax matrix, row-major.
    pub fn lax_matrix(&self, kind: ModelKind, part: LaxPart) -> Result<Vec<Vec<OperatorSum>>, ModelError> {
        self.need_pairs(&Generator::Lax { kind, part, i: 1, j: 1 })?;
        let g = self.grading();
        Ok(g.site_range().map(|i| g.site_range().map(|j| self.lax_entry(kind, part, i, j)).collect()).collect())
    }

    fn pair_kernel(kind: ModelKind, i: u8, j: u8) -> (RatFn, RatFn) {
        match kind {
            ModelKind::Calogero => (RatFn::omega(i, j), &RatFn::omega(i, j) * &RatFn::omega(j, i)),
            ModelKind::Sutherland => (RatFn::theta(i, j), &RatFn::theta(i, j) * &RatFn::theta(j, i)),
        }
    }

    fn lax_entry(&self, kind: ModelKind, part: LaxPart, i: u8, j: u8) -> OperatorSum {
        let g = self.grading();
        let lam = self.lam();
        let perm = |a: u8, b: u8| OperatorSum::permutation(g, a, b).expect("distinct sites");
        match (part, i == j) {
            (LaxPart::L, true) => {
                let d = OperatorSum::derivative(g, i, 1).expect("site checked");
                match kind {
                    ModelKind::Calogero => d,
                    ModelKind::Sutherland => {
                        &(&OperatorSum::position(g, i) * &d) + &OperatorSum::scalar(g, RatFn::constant(Rat::new(1, 2)))
                    }
                }
            }
            (LaxPart::L, false) => perm(i, j).scale(&(&lam * &Self::pair_kernel(kind, i, j).0)),
            (LaxPart::M, true) => {
                let parts: Vec<OperatorSum> = g
                    .site_range()
                    .filter(|k| *k != i)
                    .map(|k| perm(i, k).scale(&(&lam * &Self::pair_kernel(kind, i, k).1).neg()))
                    .collect();
                OperatorSum::sum(g, &parts)
            }
            (LaxPart::M, false) => perm(i, j).scale(&(&lam * &Self::pair_kernel(kind, i, j).1)),
        }
    }

    /// Row sums `Σ_j (L^p)_{ij}`, indexed by `i - 1`.
    pub fn lax_row_sums(&self, kind: ModelKind, p: u8) -> Result<Arc<Vec<OperatorSum>>, ModelError> {
        if let Some(r) = self.rows.lock().unwrap().get(&(kind, p)) {
            return Ok(r.clone());
        }
        let g = self.grading();
        let rows = if p == 0 {
            vec![OperatorSum::identity(g); g.sites as usize]
        } else {
            let prev = self.lax_row_sums(kind, p - 1)?;
            let mut rows = Vec::with_capacity(g.sites as usize);
            for i in g.site_range() {
                let parts: Vec<OperatorSum> = g
                    .site_range()
                    .map(|k| &self.lax_entry(kind, LaxPart::L, i, k) * &prev[k as usize - 1])
                    .collect();
                let name = format!("(L^{p}) row {i}");
                rows.push(self.guard(&name, OperatorSum::sum(g, &parts))?);
            }
            rows
        };
        let rows = Arc::new(rows);
        self.rows.lock().unwrap().insert((kind, p), rows.clone());
        Ok(rows)
    }

    /// `Σ_{ij} E_i^{ab} (L^p)_{ij}`.
    fn dressed(&self, kind: ModelKind, p: u8, a: u8, b: u8) -> Result<OperatorSum, ModelError> {
        let g = self.grading();
        let rows = self.lax_row_sums(kind, p)?;
        let parts: Vec<OperatorSum> = g
            .site_range()
            .map(|i| Ok(&OperatorSum::unit(g, i, a, b)? * &rows[i as usize - 1]))
            .collect::<Result<_, ModelError>>()?;
        Ok(OperatorSum::sum(g, &parts))
    }

    fn yangian_t(&self, p: i8, a: u8, b: u8, minus_one: TMinusOne) -> Result<OperatorSum, ModelError> {
        self.check_colors(&[a, b])?;
        let g = self.grading();
        match p {
            -1 => {
                let name = Generator::T { p, a, b, minus_one };
                let inv = self.ctx.lambda_inverse(&name.to_string())?;
                if a != b {
                    return Ok(self.zero());
                }
                let s = match minus_one {
                    TMinusOne::Plain => 1,
                    TMinusOne::Graded => sign(g.parity(a)),
                };
                Ok(OperatorSum::scalar(g, inv.scale(&Rat::int(s))))
            }
            p if p >= 0 => self.dressed(ModelKind::Sutherland, p as u8, a, b),
            _ => Err(ModelError::BadRange(format!("T[{p},{a},{b}]"))),
        }
    }

    fn loop_k(&self, p: u8, a: u8, b: u8) -> Result<OperatorSum, ModelError> {
        self.check_colors(&[a, b])?;
        let g = self.grading();
        let parts: Vec<OperatorSum> = g
            .site_range()
            .map(|i| Ok(OperatorSum::unit(g, i, a, b)?.scale(&RatFn::position(i).pow(p as u32))))
            .collect::<Result<_, ModelError>>()?;
        Ok(OperatorSum::sum(g, &parts))
    }

    /// `(E_i E_j)^{ab} = Σ_c (-1)^{p(c)} E_i^{ac} E_j^{cb}`.
    pub fn pair_contraction(&self, i: u8, j: u8, a: u8, b: u8) -> Result<OperatorSum, ModelError> {
        let g = self.grading();
        let mut parts = Vec::new();
        for c in g.colors() {
            let t = &OperatorSum::unit(g, i, a, c)? * &OperatorSum::unit(g, j, c, b)?;
            parts.push(t.scale_rat(&Rat::int(sign(g.parity(c)))));
        }
        Ok(OperatorSum::sum(g, &parts))
    }

    /// `(E_i E_j E_k)^{ab} = Σ_{c,d} (-1)^{p(c)+p(d)} E_i^{ac} E_j^{cd} E_k^{db}`.
    pub fn triple_contraction(&self, i: u8, j: u8, k: u8, a: u8, b: u8) -> Result<OperatorSum, ModelError> {
        let g = self.grading();
        let mut parts = Vec::new();
        for c in g.colors() {
            for d in g.colors() {
                let t = &(&OperatorSum::unit(g, i, a, c)? * &OperatorSum::unit(g, j, c, d)?)
                    * &OperatorSum::unit(g, k, d, b)?;
                parts.push(t.scale_rat(&Rat::int(sign(g.parity(c) + g.parity(d)))));
            }
        }
        Ok(OperatorSum::sum(g, &parts))
    }

    /// `T_2^{ab}` written out term by term instead of through `L²`.
    fn t2_explicit(&self, a: u8, b: u8) -> Result<OperatorSum, ModelError> {
        self.check_colors(&[a, b])?;
        let g = self.grading();
        let lam = self.lam();
        let half = OperatorSum::scalar(g, RatFn::constant(Rat::new(1, 2)));
        let euler = |i: u8| -> Result<OperatorSum, ModelError> {
            Ok(&OperatorSum::position(g, i) * &OperatorSum::derivative(g, i, 1)?)
        };
        let mut parts = Vec::new();
        for i in g.site_range() {
            let shifted = &euler(i)? + &half;
            parts.push(&OperatorSum::unit(g, i, a, b)? * &(&shifted * &shifted));
        }
        for i in g.site_range() {
            for j in g.site_range().filter(|j| *j != i) {
                // x_i ∂_i θ_ij is the function x_i (∂_i θ_ij), as in H_c.
                let th = OperatorSum::scalar(g, RatFn::theta(i, j));
                let dth = OperatorSum::scalar(g, &RatFn::position(i) * &RatFn::theta(i, j).partial(i));
                let inner = &dth + &(&th * &(&(&euler(i)? + &euler(j)?) + &OperatorSum::identity(g)));
                parts.push((&self.pair_contraction(i, j, a, b)? * &inner).scale(&lam));
            }
        }
        let lam2 = lam.pow(2);
        for i in g.site_range() {
            for j in g.site_range().filter(|j| *j != i) {
                for k in g.site_range().filter(|k| *k != j) {
                    let c = &(&RatFn::theta(i, j) * &RatFn::theta(j, k)) * &lam2;
                    parts.push(self.triple_contraction(i, j, k, a, b)?.scale(&c));
                }
            }
        }
        Ok(OperatorSum::sum(g, &parts))
    }

    /// `O`, `M`, `N` and `P(x, y)` tensors; indices in the order
    /// `X^{ab}_{cd}` ↦ `(a, b, c, d)`.
    fn tensor(&self, kind: TensorKind, a: u8, b: u8, c: u8, d: u8) -> Result<OperatorSum, ModelError> {
        self.check_colors(&[a, b, c, d])?;
        let g = self.grading();
        let beta = sign(g.parity(b) * g.parity(c) + g.parity(c) * g.parity(d) + g.parity(b) * g.parity(d));
        let lam = self.lam();
        if kind == TensorKind::O {
            let t = |p: i8, x: u8, y: u8| self.get(&Generator::T { p, a: x, b: y, minus_one: TMinusOne::Plain });
            let diff = &(&*t(0, a, d)? * &*t(1, c, b)?) - &(&*t(1, a, d)? * &*t(0, c, b)?);
            return Ok(diff.scale_rat(&Rat::int(-beta)));
        }
        self.need_pairs(&Generator::Tensor { kind, a, b, c, d })?;
        let sites: Vec<u8> = g.site_range().collect();
        let one = RatFn::one();
        let x = |i: u8| RatFn::position(i);
        let dx = |i: u8| OperatorSum::derivative(g, i, 1).expect("site in range");

        // Bracketed block: Σ_{i≠j} E_i^{ad} E_j^{cb} D_ij + λ Σ' f_ij (E_iE_j)^{ad} E_k^{cb}
        //                  - λ Σ' h_jk E_i^{ad} (E_jE_k)^{cb}
        let block = |pair_op: &dyn Fn(u8, u8) -> OperatorSum,
                     f: &dyn Fn(u8, u8) -> RatFn,
                     with_triples: bool|
         -> Result<OperatorSum, ModelError> {
            let mut parts = Vec::new();
            for &i in &sites {
                for &j in sites.iter().filter(|j| **j != i) {
                    let ee = &OperatorSum::unit(g, i, a, d)? * &OperatorSum::unit(g, j, c, b)?;
                    parts.push(&ee * &pair_op(i, j));
                    if !with_triples {
                        continue;
                    }
                    for &k in sites.iter().filter(|k| **k != i && **k != j) {
                        let first = &self.pair_contraction(i, j, a, d)? * &OperatorSum::unit(g, k, c, b)?;
                        parts.push(first.scale(&(&lam * &f(i, j))));
                        let second = &OperatorSum::unit(g, i, a, d)? * &self.pair_contraction(j, k, c, b)?;
                        parts.push(second.scale(&(&lam * &f(j, k)).neg()));
                    }
                }
            }
            Ok(OperatorSum::sum(g, &parts).scale_rat(&Rat::int(beta)))
        };
        // Σ_{i≠j} f_ij E_i^{ab} E_j^{cd}
        let tail = |f: &dyn Fn(u8, u8) -> RatFn| -> Result<OperatorSum, ModelError> {
            let mut parts = Vec::new();
            for &i in &sites {
                for &j in sites.iter().filter(|j| **j != i) {
                    let ee = &OperatorSum::unit(g, i, a, b)? * &OperatorSum::unit(g, j, c, d)?;
                    parts.push(ee.scale(&f(i, j)));
                }
            }
            Ok(OperatorSum::sum(g, &parts))
        };
        let omega = |i: u8, j: u8| RatFn::omega(i, j);
        match kind {
            TensorKind::O => unreachable!(),
            TensorKind::M => {
                let shifted = |i: u8| &OperatorSum::scalar(g, &x(i) + &one) * &dx(i);
                let main = block(
                    &|i, j| &shifted(i) - &shifted(j),
                    &|i, j| &(&x(i) + &one) * &RatFn::omega(i, j),
                    true,
                )?;
                let t = tail(&|i, j| &(&(&(&x(i) + &x(j)) + &RatFn::int(2)) * &omega(i, j)) * &lam)?;
                Ok(&main + &t)
            }
            TensorKind::N => {
                let main = block(
                    &|i, j| &(&dx(i) - &dx(j)) + &OperatorSum::scalar(g, &x(i) - &x(j)),
                    &omega,
                    true,
                )?;
                let t = tail(&|i, j| &omega(i, j).scale(&Rat::int(2)) * &lam)?;
                Ok(&main + &t)
            }
            TensorKind::NDerived => {
                let o = self.get(&Generator::Tensor { kind: TensorKind::O, a, b, c, d })?;
                Ok(&*o + &block(&|i, j| OperatorSum::scalar(g, &x(i) - &x(j)), &omega, false)?)
            }
            TensorKind::P | TensorKind::PDerived => {
                let o = self.get(&Generator::Tensor { kind: TensorKind::O, a, b, c, d })?;
                let tail_coeff = if kind == TensorKind::P { RatFn::int(2) } else { &lam * &RatFn::int(2) };
                let xpart = &block(&|i, j| &dx(i) - &dx(j), &omega, true)?
                    + &tail(&|i, j| &omega(i, j) * &tail_coeff)?;
                let ypart = block(&|i, j| OperatorSum::scalar(g, &x(i) - &x(j)), &omega, false)?;
                Ok(&(&*o + &xpart.scale(&RatFn::var(Variable::ParamX)))
                    + &ypart.scale(&RatFn::var(Variable::ParamY)))
            }
        }
    }

    /// `W_p^{(s)}` (scalar) or `Q_p^{(s)ab}` (colored).
    fn w_family(&self, s: u8, p: u8, colors: Option<(u8, u8)>, form: WForm) -> Result<OperatorSum, ModelError> {
        let g = self.grading();
        let base = |p: u8| -> Result<Arc<OperatorSum>, ModelError> {
            match colors {
                Some((a, b)) => self.get(&Generator::J { p, a, b }),
                None => {
                    let rows = self.lax_row_sums(ModelKind::Calogero, p)?;
                    Ok(Arc::new(OperatorSum::sum(g, rows.iter())))
                }
            }
        };
        let name = match colors {
            Some((a, b)) => Generator::Q { s, p, a, b, form },
            None => Generator::W { s, p, form },
        };
        if s == 0 {
            return Err(ModelError::BadRange(name.to_string()));
        }
        if s == 1 {
            return Ok((*base(p)?).clone());
        }
        let x2 = self.get(&Generator::SumOfSquares)?;
        match form {
            WForm::Recursive => {
                let prev = match colors {
                    Some((a, b)) => self.get(&Generator::Q { s: s - 1, p: p + 2, a, b, form })?,
                    None => self.get(&Generator::W { s: s - 1, p: p + 2, form })?,
                };
                let br = x2.graded_bracket(&prev)?;
                Ok(br.scale_rat(&Rat::new(1, 2 * (p as i64 + s as i64))))
            }
            WForm::Closed => {
                let mut acc = (*base(p + 2 * s - 2)?).clone();
                for _ in 1..s {
                    acc = self.guard(&name, x2.graded_bracket(&acc)?)?;
                }
                Ok(acc.scale_rat(&Rat::new(1, w_prefactor_denominator(s, p))))
            }
        }
    }
}

/// `(p)_s = p (p+1) ⋯ (p+s-1)`.
pub fn pochhammer(p: i64, s: u32) -> i64 {
    (0..s as i64).map(|k| p + k).product()
}

/// `2^{s-1} (p+s)_{s-1}`.
pub fn w_prefactor_denominator(s: u8, p: u8) -> i64 {
    (1i64 << (s - 1)) * pochhammer(p as i64 + s as i64, s as u32 - 1)
}

#[cfg(test)]
mod tests;
