//! Normal-ordered differential operators with color-word coefficients.
//!
//! A term is `coefficient · color word · ∂^α` with every derivative pushed to
//! the right. Colors commute with positions and derivatives, so products only
//! need the graded word product and the Leibniz rule
//! `∂^α ∘ c = Σ_{β≤α} C(α,β) (∂^β c) ∂^{α-β}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;
use thiserror::Error;

use crate::color::{
    build_permutation, Basis, ColorError, ColorState, ColorSum, ColorWord, GradingContext, KoszulConvention,
};
use crate::scalar::{Rat, RatFn, ScalarError, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("operands belong to different grading contexts")]
    ContextMismatch,
    #[error("graded bracket needs operands of definite parity")]
    MixedParity,
    #[error("the zero operator has no leading symbol")]
    ZeroOperator,
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Multi-index of derivative orders, one entry per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivWord(SmallVec<[u8; 4]>);

impl DerivWord {
    pub fn zero(sites: u8) -> DerivWord {
        DerivWord(smallvec::smallvec![0; sites as usize])
    }

    /// `∂_site^k`.
    pub fn single(sites: u8, site: u8, k: u8) -> DerivWord {
        let mut d = DerivWord::zero(sites);
        d.0[site as usize - 1] = k;
        d
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|e| *e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    fn add(&self, other: &DerivWord) -> DerivWord {
        DerivWord(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &DerivWord) -> DerivWord {
        DerivWord(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Every `β ≤ self`, with `Π C(self_i, β_i)`.
    fn below(&self) -> Vec<(DerivWord, u64)> {
        let mut out = vec![(DerivWord(SmallVec::new()), 1u64)];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for (w, c) in &out {
                for b in 0..=e {
                    let mut nw = w.clone();
                    nw.0.push(b);
                    next.push((nw, c * binomial(e as u64, b as u64)));
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for DerivWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub color: ColorWord,
    pub deriv: DerivWord,
}

/// `∂^α c`, memoized over `α`.
fn deriv_cached(cache: &mut HashMap<DerivWord, RatFn>, c: &RatFn, alpha: &DerivWord) -> RatFn {
    if alpha.is_zero() {
        return c.clone();
    }
    if let Some(v) = cache.get(alpha) {
        return v.clone();
    }
    let i = alpha.0.iter().position(|e| *e > 0).unwrap();
    let mut prev = alpha.clone();
    prev.0[i] -= 1;
    let base = deriv_cached(cache, c, &prev);
    let out = base.partial(i as u8 + 1);
    cache.insert(alpha.clone(), out.clone());
    out
}

/// Finite sum of normal-ordered terms over one grading context.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorSum {
    grading: GradingContext,
    terms: BTreeMap<TermKey, RatFn>,
}

impl OperatorSum {
    pub fn zero(g: GradingContext) -> OperatorSum {
        OperatorSum { grading: g, terms: BTreeMap::new() }
    }

    pub fn scalar(g: GradingContext, c: RatFn) -> OperatorSum {
        OperatorSum::term(g, c, ColorWord::identity(), DerivWord::zero(g.sites))
    }

    pub fn identity(g: GradingContext) -> OperatorSum {
        OperatorSum::scalar(g, RatFn::one())
    }

    pub fn term(g: GradingContext, c: RatFn, color: ColorWord, deriv: DerivWord) -> OperatorSum {
        let mut out = OperatorSum::zero(g);
        if !c.is_zero() {
            out.terms.insert(TermKey { color, deriv }, c);
        }
        out
    }

    /// Multiplication by `x_i`.
    pub fn position(g: GradingContext, site: u8) -> OperatorSum {
        OperatorSum::scalar(g, RatFn::position(site))
    }

    /// `∂_i^k`.
    pub fn derivative(g: GradingContext, site: u8, k: u8) -> Result<OperatorSum, OperatorError> {
        g.check_site(site)?;
        Ok(OperatorSum::term(g, RatFn::one(), ColorWord::identity(), DerivWord::single(g.sites, site, k)))
    }

    pub fn from_colors(g: GradingContext, colors: &ColorSum) -> OperatorSum {
        let mut out = OperatorSum::zero(g);
        for (w, c) in &colors.terms {
            out.terms.insert(TermKey { color: w.clone(), deriv: DerivWord::zero(g.sites) }, RatFn::int(*c));
        }
        out
    }

    /// `E_i^{ab}`.
    pub fn unit(g: GradingContext, site: u8, a: u8, b: u8) -> Result<OperatorSum, OperatorError> {
        Ok(OperatorSum::from_colors(g, &ColorWord::unit(&g, site, a, b)?))
    }

    /// Graded permutation `P_ij`.
    pub fn permutation(g: GradingContext, i: u8, j: u8) -> Result<OperatorSum, OperatorError> {
        Ok(OperatorSum::from_colors(g, &build_permutation(&g, i, j)?))
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RatFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &OperatorSum) -> Result<(), OperatorError> {
        if self.grading != other.grading {
            return Err(OperatorError::ContextMismatch);
        }
        Ok(())
    }

    fn from_parts(g: GradingContext, parts: HashMap<TermKey, Vec<RatFn>>) -> OperatorSum {
        let mut terms = BTreeMap::new();
        for (k, items) in parts {
            let s = RatFn::sum(items);
            if !s.is_zero() {
                terms.insert(k, s);
            }
        }
        OperatorSum { grading: g, terms }
    }

    pub fn try_add(&self, other: &OperatorSum) -> Result<OperatorSum, OperatorError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    fn add_term(&mut self, key: TermKey, c: &RatFn) {
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(key, c.clone());
                }
            }
        }
    }

    /// Sum of many operators with one accumulation pass.
    pub fn sum<'a, I: IntoIterator<Item = &'a OperatorSum>>(g: GradingContext, items: I) -> OperatorSum {
        let mut parts: HashMap<TermKey, Vec<RatFn>> = HashMap::new();
        for op in items {
            assert_eq!(op.grading, g, "grading contexts differ");
            for (k, c) in &op.terms {
                parts.entry(k.clone()).or_default().push(c.clone());
            }
        }
        OperatorSum::from_parts(g, parts)
    }

    pub fn scale(&self, c: &RatFn) -> OperatorSum {
        if c.is_zero() {
            return OperatorSum::zero(self.grading);
        }
        if c.is_one() {
            return self.clone();
        }
        OperatorSum { grading: self.grading, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn scale_rat(&self, c: &Rat) -> OperatorSum {
        self.scale(&RatFn::constant(c.clone()))
    }

    /// Normal-ordered product `self ∘ other`.
    pub fn try_mul(&self, other: &OperatorSum) -> Result<OperatorSum, OperatorError> {
        self.check(other)?;
        let g = self.grading;
        let mut parts: HashMap<TermKey, Vec<RatFn>> = HashMap::new();
        let mut caches: Vec<HashMap<DerivWord, RatFn>> = vec![HashMap::new(); other.terms.len()];
        let mut below_cache: HashMap<DerivWord, Vec<(DerivWord, u64)>> = HashMap::new();
        for (ka, ca) in &self.terms {
            let below = below_cache.entry(ka.deriv.clone()).or_insert_with(|| ka.deriv.below());
            for (idx, (kb, cb)) in other.terms.iter().enumerate() {
                let colors = ka.color.compose(&g, &kb.color);
                if colors.is_empty() {
                    continue;
                }
                let constant = cb.as_constant().is_some();
                for (beta, binom) in below.iter() {
                    if constant && !beta.is_zero() {
                        continue;
                    }
                    if beta.0.iter().enumerate().any(|(i, e)| *e > 0 && !cb.depends_on(Variable::Position(i as u8 + 1)))
                    {
                        continue;
                    }
                    let dcb = deriv_cached(&mut caches[idx], cb, beta);
                    if dcb.is_zero() {
                        continue;
                    }
                    let coeff = (ca * &dcb).scale(&Rat::int(*binom as i64));
                    let deriv = ka.deriv.sub(beta).add(&kb.deriv);
                    for (sign, w) in &colors {
                        let c = if *sign == 1 { coeff.clone() } else { coeff.scale(&Rat::int(*sign)) };
                        parts.entry(TermKey { color: w.clone(), deriv: deriv.clone() }).or_default().push(c);
                    }
                }
            }
        }
        Ok(OperatorSum::from_parts(g, parts))
    }

    /// Parity when every term agrees; the zero operator is even.
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for k in self.terms.keys() {
            let q = k.color.parity(&self.grading);
            match p {
                None => p = Some(q),
                Some(x) if x != q => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    /// `[A, B} = AB - (-1)^{|A||B|} BA`.
    pub fn graded_bracket(&self, other: &OperatorSum) -> Result<OperatorSum, OperatorError> {
        self.check(other)?;
        let pa = self.parity().ok_or(OperatorError::MixedParity)?;
        let pb = other.parity().ok_or(OperatorError::MixedParity)?;
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        if pa * pb == 1 {
            ab.try_add(&ba)
        } else {
            ab.try_add(&-&ba)
        }
    }

    /// Highest total derivative order, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.deriv.degree()).max()
    }

    pub fn leading_symbol(&self) -> Result<OperatorSum, OperatorError> {
        let d = self.max_degree().ok_or(OperatorError::ZeroOperator)?;
        Ok(self.filter(|k| k.deriv.degree() == d))
    }

    /// Terms of total derivative order below `d`.
    pub fn below_degree(&self, d: u32) -> OperatorSum {
        self.filter(|k| k.deriv.degree() < d)
    }

    fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> OperatorSum {
        OperatorSum {
            grading: self.grading,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Exact specialization of a parameter in every coefficient.
    pub fn substitute_parameter(&self, v: Variable, value: &Rat) -> Result<OperatorSum, OperatorError> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let s = c.substitute(v, value)?;
            if !s.is_zero() {
                terms.insert(k.clone(), s);
            }
        }
        Ok(OperatorSum { grading: self.grading, terms })
    }

    /// Acts on a color-vector-valued function.
    pub fn apply(&self, state: &ColorState, convention: KoszulConvention) -> Result<ColorState, OperatorError> {
        if *state.grading() != self.grading {
            return Err(OperatorError::ContextMismatch);
        }
        let g = self.grading;
        let comps: Vec<(&Basis, &RatFn)> = state.components().collect();
        let mut caches: Vec<HashMap<DerivWord, RatFn>> = vec![HashMap::new(); comps.len()];
        let mut parts: BTreeMap<Basis, Vec<RatFn>> = BTreeMap::new();
        for (k, c) in &self.terms {
            for (idx, (basis, amp)) in comps.iter().enumerate() {
                let Some((sign, nb)) = k.color.apply_to_basis(&g, basis, convention) else {
                    continue;
                };
                let d = deriv_cached(&mut caches[idx], amp, &k.deriv);
                if d.is_zero() {
                    continue;
                }
                let v = c * &d;
                parts.entry(nb).or_default().push(if sign == 1 { v } else { v.neg() });
            }
        }
        Ok(ColorState::from_parts(g, parts))
    }

    /// One line per term, `numerator | denominator | color word | derivative`,
    /// in canonical key order.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (k, c) in &self.terms {
            let (n, d) = c.parts();
            out.push_str(&format!("{n} | {d} | {} | {}\n", k.color, k.deriv));
        }
        out
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !k.color.is_identity() {
                write!(f, "·E{}", k.color)?;
            }
            if !k.deriv.is_zero() {
                write!(f, "·D{}", k.deriv)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorSum{}[{self}]", self.grading)
    }
}

impl Add for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_add(rhs).expect("grading contexts differ")
    }
}

impl Sub for &OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_add(&-rhs).expect("grading contexts differ")
    }
}

impl Neg for &OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        OperatorSum { grading: self.grading, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect() }
    }
}

impl Mul for &OperatorSum {
    type Output = OperatorSum;
    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_mul(rhs).expect("grading contexts differ")
    }
}

#[cfg(test)]
mod tests;
