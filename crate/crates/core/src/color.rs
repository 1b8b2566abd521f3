//! The Z₂-graded color sector.
//!
//! Colors `1..=n` are even and `n+1..=n+m` are odd. A [`ColorWord`] is a
//! site-sorted product of matrix units, at most one per site. Because the
//! identity at a site equals `Σ_a E^{aa}`, the unit `E^{KK}` for the last
//! color `K = n+m` is never stored: it is rewritten as `1 - Σ_{a<K} E^{aa}`.
//! With that choice the words form a basis of the operators on the color
//! space, so a linear combination of words is zero only if every
//! coefficient is.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::RatFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("invalid context: n + m must be at least 1 and N at least 1 (got n={n}, m={m}, N={sites})")]
    InvalidContext { n: u8, m: u8, sites: u8 },
    #[error("color index {0} out of range")]
    BadColor(u8),
    #[error("site index {0} out of range")]
    BadSite(u8),
    #[error("permutation needs two distinct sites, got {0} and {0}")]
    SameSite(u8),
    #[error("grading contexts differ")]
    ContextMismatch,
}

/// Grading data for `gl(n|m)` acting on `N` particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingContext {
    pub n: u8,
    pub m: u8,
    #[serde(rename = "N")]
    pub sites: u8,
}

impl GradingContext {
    pub fn new(n: u8, m: u8, sites: u8) -> Result<Self, ColorError> {
        if n as u16 + m as u16 == 0 || sites == 0 || n as u16 + m as u16 > 16 || sites > 16 {
            return Err(ColorError::InvalidContext { n, m, sites });
        }
        Ok(GradingContext { n, m, sites })
    }

    /// Number of colors, `n + m`.
    pub fn dim(&self) -> u8 {
        self.n + self.m
    }

    /// `p(a)` for a 1-based color.
    pub fn parity(&self, a: u8) -> u8 {
        u8::from(a > self.n)
    }

    /// Parity of `E^{ab}`.
    pub fn unit_parity(&self, a: u8, b: u8) -> u8 {
        (self.parity(a) + self.parity(b)) & 1
    }

    pub fn colors(&self) -> impl Iterator<Item = u8> + Clone {
        1..=self.dim()
    }

    pub fn site_range(&self) -> impl Iterator<Item = u8> + Clone {
        1..=self.sites
    }

    pub fn check_color(&self, a: u8) -> Result<(), ColorError> {
        if a == 0 || a > self.dim() {
            return Err(ColorError::BadColor(a));
        }
        Ok(())
    }

    pub fn check_site(&self, i: u8) -> Result<(), ColorError> {
        if i == 0 || i > self.sites {
            return Err(ColorError::BadSite(i));
        }
        Ok(())
    }

    /// Every color basis tuple `(c_1, …, c_N)` in lexicographic order.
    pub fn basis(&self) -> Vec<Basis> {
        let mut out = vec![Basis::new()];
        for _ in 0..self.sites {
            let mut next = Vec::with_capacity(out.len() * self.dim() as usize);
            for b in &out {
                for c in self.colors() {
                    let mut nb = b.clone();
                    nb.push(c);
                    next.push(nb);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for GradingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.sites)
    }
}

/// Which tensor factors an odd unit's sign passes over when it acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KoszulConvention {
    /// Sign from the factors to the left of the acted-on site.
    #[default]
    Left,
    /// Sign from the factors to the right.
    Right,
}

/// `E^{ab}` acting at `site`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unit {
    pub site: u8,
    pub a: u8,
    pub b: u8,
}

pub type Basis = SmallVec<[u8; 4]>;

/// Site-sorted product of matrix units; sites without a unit carry the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColorWord {
    units: SmallVec<[Unit; 4]>,
}

/// Integer combination of words, merged and free of zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorSum {
    pub terms: BTreeMap<ColorWord, i64>,
}

impl ColorSum {
    pub fn add_word(&mut self, w: ColorWord, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product of two combinations.
    pub fn compose(&self, g: &GradingContext, other: &ColorSum) -> ColorSum {
        let mut out = ColorSum::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                for (s, w) in w1.compose(g, w2) {
                    out.add_word(w, c1 * c2 * s);
                }
            }
        }
        out
    }
}

impl ColorWord {
    pub fn identity() -> ColorWord {
        ColorWord::default()
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn is_identity(&self) -> bool {
        self.units.is_empty()
    }

    /// Grading parity of the word.
    pub fn parity(&self, g: &GradingContext) -> u8 {
        self.units.iter().map(|u| g.unit_parity(u.a, u.b)).sum::<u8>() & 1
    }

    /// `E_site^{ab}` in the reduced basis.
    pub fn unit(g: &GradingContext, site: u8, a: u8, b: u8) -> Result<ColorSum, ColorError> {
        g.check_site(site)?;
        g.check_color(a)?;
        g.check_color(b)?;
        let mut sum = ColorSum::default();
        for (c, w) in expand_sites(g, vec![(site, a, b)]) {
            sum.add_word(w, c);
        }
        Ok(sum)
    }

    /// Product `self · other` as a signed combination of reduced words.
    pub fn compose(&self, g: &GradingContext, other: &ColorWord) -> SmallVec<[(i64, ColorWord); 2]> {
        if other.units.is_empty() {
            return smallvec::smallvec![(1, self.clone())];
        }
        if self.units.is_empty() {
            return smallvec::smallvec![(1, other.clone())];
        }
        // Each unit v of `other` moves left past the units of `self` at
        // larger sites.
        let mut odd = 0u32;
        for v in &other.units {
            if g.unit_parity(v.a, v.b) == 1 {
                odd += self
                    .units
                    .iter()
                    .filter(|u| u.site > v.site)
                    .map(|u| g.unit_parity(u.a, u.b) as u32)
                    .sum::<u32>();
            }
        }
        let sign = if odd % 2 == 0 { 1 } else { -1 };
        let mut merged: Vec<(u8, u8, u8)> = Vec::with_capacity(self.units.len() + other.units.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.units, &other.units);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(u), Some(v)) if u.site == v.site => {
                    if u.b != v.a {
                        return SmallVec::new();
                    }
                    merged.push((u.site, u.a, v.b));
                    i += 1;
                    j += 1;
                }
                (Some(u), Some(v)) if u.site < v.site => {
                    merged.push((u.site, u.a, u.b));
                    i += 1;
                }
                (Some(u), None) => {
                    merged.push((u.site, u.a, u.b));
                    i += 1;
                }
                (_, Some(v)) => {
                    merged.push((v.site, v.a, v.b));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        expand_sites(g, merged).into_iter().map(|(c, w)| (c * sign, w)).collect()
    }

    /// Acts on one basis tuple; `None` when the result vanishes.
    pub fn apply_to_basis(
        &self,
        g: &GradingContext,
        basis: &[u8],
        convention: KoszulConvention,
    ) -> Option<(i64, Basis)> {
        let mut out: Basis = basis.iter().copied().collect();
        let mut odd = 0u32;
        for u in self.units.iter().rev() {
            let idx = (u.site - 1) as usize;
            if out[idx] != u.b {
                return None;
            }
            if g.unit_parity(u.a, u.b) == 1 {
                let passed = match convention {
                    KoszulConvention::Left => &out[..idx],
                    KoszulConvention::Right => &out[idx + 1..],
                };
                odd += passed.iter().map(|c| g.parity(*c) as u32).sum::<u32>();
            }
            out[idx] = u.a;
        }
        Some((if odd % 2 == 0 { 1 } else { -1 }, out))
    }
}

/// Builds reduced words from site-sorted units, rewriting `E^{KK}`.
fn expand_sites(g: &GradingContext, units: Vec<(u8, u8, u8)>) -> Vec<(i64, ColorWord)> {
    let k = g.dim();
    let mut partial: Vec<(i64, SmallVec<[Unit; 4]>)> = vec![(1, SmallVec::new())];
    for (site, a, b) in units {
        if a == k && b == k {
            let mut next = Vec::with_capacity(partial.len() * k as usize);
            for (c, w) in &partial {
                next.push((*c, w.clone()));
                for d in 1..k {
                    let mut nw = w.clone();
                    nw.push(Unit { site, a: d, b: d });
                    next.push((-c, nw));
                }
            }
            partial = next;
        } else {
            for (_, w) in partial.iter_mut() {
                w.push(Unit { site, a, b });
            }
        }
    }
    partial.into_iter().map(|(c, units)| (c, ColorWord { units })).collect()
}

/// Graded permutation `P_ij = Σ_{a,b} (-1)^{p(b)} E_i^{ab} E_j^{ba}`.
pub fn build_permutation(g: &GradingContext, i: u8, j: u8) -> Result<ColorSum, ColorError> {
    g.check_site(i)?;
    g.check_site(j)?;
    if i == j {
        return Err(ColorError::SameSite(i));
    }
    let mut out = ColorSum::default();
    for a in g.colors() {
        for b in g.colors() {
            let sign = if g.parity(b) == 1 { -1 } else { 1 };
            let ei = ColorWord::unit(g, i, a, b)?;
            let ej = ColorWord::unit(g, j, b, a)?;
            for (w, c) in ei.compose(g, &ej).terms {
                out.add_word(w, sign * c);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for ColorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, u) in self.units.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:({},{})", u.site, u.a, u.b)?;
        }
        write!(f, "]")
    }
}

/// Linear combination of color basis vectors with rational-function
/// amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorState {
    grading: GradingContext,
    comps: BTreeMap<Basis, RatFn>,
}

impl ColorState {
    pub fn zero(g: GradingContext) -> ColorState {
        ColorState { grading: g, comps: BTreeMap::new() }
    }

    pub fn basis_state(g: GradingContext, basis: &[u8], amplitude: RatFn) -> ColorState {
        let mut s = ColorState::zero(g);
        s.add_component(basis.iter().copied().collect(), amplitude);
        s
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn components(&self) -> impl Iterator<Item = (&Basis, &RatFn)> {
        self.comps.iter()
    }

    pub fn component(&self, basis: &[u8]) -> RatFn {
        self.comps.get(basis).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, basis: Basis, amplitude: RatFn) {
        if amplitude.is_zero() {
            return;
        }
        match self.comps.get_mut(&basis) {
            Some(a) => {
                let s = a.add(&amplitude);
                if s.is_zero() {
                    self.comps.remove(&basis);
                } else {
                    *a = s;
                }
            }
            None => {
                self.comps.insert(basis, amplitude);
            }
        }
    }

    pub(crate) fn from_parts(g: GradingContext, parts: BTreeMap<Basis, Vec<RatFn>>) -> ColorState {
        let mut comps = BTreeMap::new();
        for (b, items) in parts {
            let s = RatFn::sum(items);
            if !s.is_zero() {
                comps.insert(b, s);
            }
        }
        ColorState { grading: g, comps }
    }

    pub fn add(&self, other: &ColorState) -> ColorState {
        let mut out = self.clone();
        for (b, a) in &other.comps {
            out.add_component(b.clone(), a.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFn) -> ColorState {
        if c.is_zero() {
            return ColorState::zero(self.grading);
        }
        ColorState {
            grading: self.grading,
            comps: self.comps.iter().map(|(b, a)| (b.clone(), a * c)).collect(),
        }
    }

    pub fn sub(&self, other: &ColorState) -> ColorState {
        self.add(&other.scale(&RatFn::int(-1)))
    }
}

/// `E`-word action on a state (the graded-color part of the oracle).
pub fn apply_color_word(
    w: &ColorWord,
    s: &ColorState,
    g: &GradingContext,
    convention: KoszulConvention,
) -> Result<ColorState, ColorError> {
    if s.grading != *g {
        return Err(ColorError::ContextMismatch);
    }
    let mut out = ColorState::zero(*g);
    for (b, amp) in &s.comps {
        if let Some((sign, nb)) = w.apply_to_basis(g, b, convention) {
            out.add_component(nb, amp.scale(&crate::scalar::Rat::int(sign)));
        }
    }
    Ok(out)
}
