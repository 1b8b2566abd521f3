//! Operator expressions and their two evaluation routes.
//!
//! The symbolic route multiplies normal forms. The oracle route never forms a
//! product of operators: it applies leaves to a state one after another, so
//! brackets become `A(Bψ) ∓ B(Aψ)`. The two routes share only the leaves.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::color::{ColorState, KoszulConvention};
use crate::model::{Generator, Model, ModelError};
use crate::operator::{OperatorError, OperatorSum};
use crate::scalar::RatFn;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Gen(Generator),
    Scale(RatFn, Box<Expr>),
    Sum(Vec<Expr>),
    /// Left to right.
    Product(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Sum(Vec::new())
    }

    pub fn gen(g: Generator) -> Expr {
        Expr::Gen(g)
    }

    pub fn scaled(c: RatFn, e: Expr) -> Expr {
        Expr::Scale(c, Box::new(e))
    }

    pub fn times(k: i64, e: Expr) -> Expr {
        if k == 1 {
            e
        } else {
            Expr::Scale(RatFn::int(k), Box::new(e))
        }
    }

    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn product(items: Vec<Expr>) -> Expr {
        Expr::Product(items)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::times(-1, b)])
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Scale(c, e) => write!(f, "({c})*{e}"),
            Expr::Sum(items) if items.is_empty() => write!(f, "0"),
            Expr::Sum(items) => {
                write!(f, "(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Expr::Product(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            Expr::Bracket(a, b) => write!(f, "[{a}, {b}}}"),
        }
    }
}

/// Leaf applications kept before the cache is flushed.
const APPLY_CACHE_LIMIT: usize = 20_000;

type ApplyKey = (Generator, ColorState, KoszulConvention);

/// Evaluates expressions against one model. Composite normal forms are
/// memoized; so are leaf applications, which the two routes never share.
pub struct Evaluator<'a> {
    model: &'a Model,
    memo: HashMap<Expr, Arc<OperatorSum>>,
    applied: RefCell<HashMap<ApplyKey, ColorState>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a Model) -> Self {
        Evaluator { model, memo: HashMap::new(), applied: RefCell::new(HashMap::new()) }
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    fn guard(&self, e: &Expr, op: OperatorSum) -> Result<OperatorSum, ModelError> {
        match self.model.budget() {
            Some(b) if op.len() > b => Err(ModelError::Budget { name: e.to_string(), budget: b }),
            _ => Ok(op),
        }
    }

    /// Normal form of `e`.
    pub fn normal_form(&mut self, e: &Expr) -> Result<Arc<OperatorSum>, ModelError> {
        if let Expr::Gen(g) = e {
            return self.model.get(g);
        }
        if let Some(v) = self.memo.get(e) {
            return Ok(v.clone());
        }
        let g = self.model.grading();
        let out = match e {
            Expr::Gen(_) => unreachable!(),
            Expr::Scale(c, inner) => self.normal_form(inner)?.scale(c),
            Expr::Sum(items) => {
                let parts = items.iter().map(|x| self.normal_form(x)).collect::<Result<Vec<_>, _>>()?;
                OperatorSum::sum(g, parts.iter().map(|p| &**p))
            }
            Expr::Product(items) => {
                let mut acc = OperatorSum::identity(g);
                for x in items {
                    let rhs = self.normal_form(x)?;
                    acc = self.guard(e, acc.try_mul(&rhs)?)?;
                }
                acc
            }
            Expr::Bracket(a, b) => {
                let a = self.normal_form(a)?;
                let b = self.normal_form(b)?;
                a.graded_bracket(&b)?
            }
        };
        let out = Arc::new(self.guard(e, out)?);
        self.memo.insert(e.clone(), out.clone());
        Ok(out)
    }

    /// Parity read off the leaves; `None` when every leaf is zero.
    pub fn parity(&self, e: &Expr) -> Result<Option<u8>, ModelError> {
        Ok(match e {
            Expr::Gen(g) => {
                let op = self.model.get(g)?;
                if op.is_zero() {
                    None
                } else {
                    Some(op.parity().ok_or(OperatorError::MixedParity)?)
                }
            }
            Expr::Scale(_, inner) => self.parity(inner)?,
            Expr::Sum(items) => {
                let mut p = None;
                for x in items {
                    match (p, self.parity(x)?) {
                        (_, None) => {}
                        (None, q) => p = q,
                        (Some(a), Some(b)) if a != b => return Err(OperatorError::MixedParity.into()),
                        _ => {}
                    }
                }
                p
            }
            Expr::Product(items) => {
                let mut p = Some(0);
                for x in items {
                    match self.parity(x)? {
                        None => return Ok(None),
                        Some(q) => p = p.map(|v| (v + q) % 2),
                    }
                }
                p
            }
            Expr::Bracket(a, b) => match (self.parity(a)?, self.parity(b)?) {
                (Some(x), Some(y)) => Some((x + y) % 2),
                _ => None,
            },
        })
    }

    /// Upper bound on the derivative order, from the leaves alone.
    pub fn degree_bound(&self, e: &Expr) -> Result<u32, ModelError> {
        Ok(match e {
            Expr::Gen(g) => self.model.get(g)?.max_degree().unwrap_or(0),
            Expr::Scale(_, inner) => self.degree_bound(inner)?,
            Expr::Sum(items) => {
                items.iter().map(|x| self.degree_bound(x)).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(0)
            }
            Expr::Product(items) => items.iter().map(|x| self.degree_bound(x)).sum::<Result<u32, _>>()?,
            Expr::Bracket(a, b) => self.degree_bound(a)? + self.degree_bound(b)?,
        })
    }

    /// `e ψ`, computed by successive application of the leaves.
    pub fn apply(&self, e: &Expr, psi: &ColorState, conv: KoszulConvention) -> Result<ColorState, ModelError> {
        if psi.is_zero() {
            return Ok(psi.clone());
        }
        Ok(match e {
            Expr::Gen(g) => {
                let key = (g.clone(), psi.clone(), conv);
                if let Some(v) = self.applied.borrow().get(&key) {
                    return Ok(v.clone());
                }
                let out = self.model.get(g)?.apply(psi, conv)?;
                let mut cache = self.applied.borrow_mut();
                if cache.len() >= APPLY_CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, out.clone());
                out
            }
            Expr::Scale(c, inner) => self.apply(inner, psi, conv)?.scale(c),
            Expr::Sum(items) => {
                let mut acc = ColorState::zero(*psi.grading());
                for x in items {
                    acc = acc.add(&self.apply(x, psi, conv)?);
                }
                acc
            }
            Expr::Product(items) => {
                let mut acc = psi.clone();
                for x in items.iter().rev() {
                    acc = self.apply(x, &acc, conv)?;
                }
                acc
            }
            Expr::Bracket(a, b) => {
                let ab = self.apply(a, &self.apply(b, psi, conv)?, conv)?;
                let ba = self.apply(b, &self.apply(a, psi, conv)?, conv)?;
                let odd = matches!((self.parity(a)?, self.parity(b)?), (Some(1), Some(1)));
                if odd {
                    ab.add(&ba)
                } else {
                    ab.sub(&ba)
                }
            }
        })
    }
}
