//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order over the
//! fixed variable order `λ, x, y, x_1, x_2, …`, with no zero coefficients.
//! That makes the term vector itself a canonical key.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::rat::{mul_mod, Rat, MOD_P};
use super::Variable;

/// Fixed pseudo-random coordinate for variable `v`, used by quick
/// non-divisibility tests.
fn probe_value(v: usize) -> u64 {
    let mut z = (v as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % MOD_P
}

/// Exponent vector with trailing zeros trimmed. Ordered by total degree,
/// then lexicographically from the first variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono {
    deg: u32,
    exps: SmallVec<[u16; 6]>,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(index: usize, power: u16) -> Mono {
        let mut m = Mono::one();
        m.set(index, power);
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, index: usize) -> u16 {
        self.exps.get(index).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn set(&mut self, index: usize, power: u16) {
        if index >= self.exps.len() {
            if power == 0 {
                return;
            }
            self.exps.resize(index + 1, 0);
        }
        self.deg = self.deg - self.exps[index] as u32 + power as u32;
        self.exps[index] = power;
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(short.exps.iter()) {
            *e += *s;
        }
        Mono { deg: self.deg + other.deg, exps }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if other.exps.len() > self.exps.len() || other.deg > self.deg {
            return None;
        }
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            if *e < *o {
                return None;
            }
            *e -= *o;
        }
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Some(Mono { deg: self.deg - other.deg, exps })
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut exps: SmallVec<[u16; 6]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let deg = exps.iter().map(|e| *e as u32).sum();
        Mono { deg, exps }
    }

    pub fn vars(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (i, *e))
    }

    pub fn max_var(&self) -> Option<usize> {
        if self.exps.is_empty() {
            None
        } else {
            Some(self.exps.len() - 1)
        }
    }
}

/// Sparse polynomial, terms in strictly descending monomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: Vec<(Mono, Rat)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::ONE)
    }

    pub fn constant(c: Rat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(v: Variable) -> Poly {
        Poly::var_index(v.index())
    }

    pub fn var_index(index: usize) -> Poly {
        Poly { terms: vec![(Mono::var(index, 1), Rat::ONE)] }
    }

    pub fn monomial(m: Mono, c: Rat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// `x_vi - x_vj` by variable index.
    pub fn binomial_difference(vi: usize, vj: usize) -> Poly {
        Poly::from_terms(vec![
            (Mono::var(vi, 1), Rat::ONE),
            (Mono::var(vj, 1), Rat::int(-1)),
        ])
    }

    /// Builds from arbitrary terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, Rat)>) -> Poly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, index: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(index)).max().unwrap_or(0)
    }

    pub fn depends_on(&self, index: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(index) > 0)
    }

    /// Highest variable index present.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(m, _)| m.max_var()).max()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return Poly { terms: self.terms.iter().map(|(tm, a)| (tm.mul(m), a.clone())).collect() };
        }
        if (-c).is_one() {
            return Poly { terms: self.terms.iter().map(|(tm, a)| (tm.mul(m), -a)).collect() };
        }
        Poly { terms: self.terms.iter().map(|(tm, a)| (tm.mul(m), a * c)).collect() }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect() }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate_other { -c } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_mono(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_mono(m, c);
        }
        let (long, short) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        if short.terms.len() <= 4 {
            // Multiplying by a monomial preserves the order, so a few merges
            // beat sorting the full product.
            let mut acc = long.mul_mono(&short.terms[0].0, &short.terms[0].1);
            for (m, c) in &short.terms[1..] {
                acc = acc.add(&long.mul_mono(m, c));
            }
            return acc;
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(terms)
    }

    /// Sum of many polynomials by pairwise merging.
    pub fn sum_all(mut items: Vec<Poly>) -> Poly {
        items.retain(|p| !p.is_zero());
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            let mut it = items.into_iter();
            while let Some(a) = it.next() {
                next.push(match it.next() {
                    Some(b) => a.add(&b),
                    None => a,
                });
            }
            items = next;
        }
        items.pop().unwrap_or_else(Poly::zero)
    }

    /// Whether the value at `point` is nonzero modulo [`MOD_P`]; `None`
    /// when a coefficient denominator vanishes there.
    pub fn nonzero_mod(&self, point: &dyn Fn(usize) -> u64) -> Option<bool> {
        // Accumulate num/den without inverses.
        let (mut an, mut ad) = (0u64, 1u64);
        let mut powers: Vec<Vec<u64>> = Vec::new();
        for (m, c) in &self.terms {
            let (mut tn, td) = c.residues();
            if td == 0 {
                return None;
            }
            for (v, e) in m.exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if powers.len() <= v {
                    powers.resize(v + 1, Vec::new());
                }
                let pw = &mut powers[v];
                if pw.is_empty() {
                    pw.push(1);
                }
                while pw.len() <= *e as usize {
                    let last = *pw.last().unwrap();
                    pw.push(mul_mod(last, point(v) % MOD_P));
                }
                tn = mul_mod(tn, pw[*e as usize]);
            }
            an = (mul_mod(an, td) + mul_mod(tn, ad)) % MOD_P;
            ad = mul_mod(ad, td);
        }
        Some(an != 0)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, index: usize) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(index);
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.set(index, e - 1);
            terms.push((nm, c * &Rat::int(e as i64)));
        }
        // Lowering one exponent can reorder terms of different total degree.
        Poly::from_terms(terms)
    }

    /// Evaluates with `values[index]` for each variable; missing variables
    /// are an error reported as `Err(index)`.
    pub fn eval(&self, values: &[Option<Rat>]) -> Result<Rat, usize> {
        let mut acc = Rat::ZERO;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let x = values.get(v).and_then(|x| x.as_ref()).ok_or(v)?;
                t = &t * &x.pow(e as u32);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Replaces one variable by a constant.
    pub fn substitute(&self, index: usize, value: &Rat) -> Poly {
        if !self.depends_on(index) {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(index);
            if e == 0 {
                terms.push((m.clone(), c.clone()));
            } else {
                let mut nm = m.clone();
                nm.set(index, 0);
                terms.push((nm, c * &value.pow(e as u32)));
            }
        }
        Poly::from_terms(terms)
    }

    /// Monomial content: the largest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Mono::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, c)| (tm.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Scales so that the leading coefficient is one; returns the removed
    /// leading coefficient alongside.
    pub fn monic(&self) -> (Rat, Poly) {
        match self.terms.first() {
            None => (Rat::ONE, Poly::zero()),
            Some((_, lc)) if lc.is_one() => (Rat::ONE, self.clone()),
            Some((_, lc)) => {
                let inv = lc.recip().unwrap();
                (lc.clone(), self.scale(&inv))
            }
        }
    }

    /// Exact division, `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading().expect("polynomial division by zero");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip().unwrap()));
        }
        let lc_inv = lc.recip().unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let tm = rm.div(lm)?;
            let tc = rc * &lc_inv;
            rem = rem.sub(&divisor.mul_mono(&tm, &tc));
            quot.push((tm, tc));
        }
        Some(Poly { terms: quot })
    }

    /// Exact division by `x_vi - x_vj`, by synthetic division in `x_vi`.
    pub fn div_binomial(&self, vi: usize, vj: usize) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let deg = self.degree_in(vi) as usize;
        if deg == 0 {
            return None;
        }
        // Divisible only if the value vanishes on x_i = x_j; a nonzero value
        // at one such point settles it without dividing.
        let at = |v: usize| if v == vi { probe_value(vj) } else { probe_value(v) };
        if self.nonzero_mod(&at) == Some(true) {
            return None;
        }
        let mut coeffs: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(vi) as usize;
            let mut nm = m.clone();
            nm.set(vi, 0);
            coeffs[e].push((nm, c.clone()));
        }
        let coeffs: Vec<Poly> = coeffs.into_iter().map(Poly::from_terms).collect();
        let xj = Mono::var(vj, 1);
        // P = Σ c_k v^k,  Q = Σ q_k v^k with q_{k-1} = c_k + x_j q_k.
        let mut q: Vec<Poly> = vec![Poly::zero(); deg];
        let mut carry = Poly::zero();
        for k in (1..=deg).rev() {
            carry = coeffs[k].add(&carry.mul_mono(&xj, &Rat::ONE));
            q[k - 1] = carry.clone();
        }
        let rem = coeffs[0].add(&carry.mul_mono(&xj, &Rat::ONE));
        if !rem.is_zero() {
            return None;
        }
        let mut terms = Vec::new();
        for (k, qk) in q.into_iter().enumerate() {
            if k == 0 {
                terms.extend(qk.terms);
            } else {
                let vk = Mono::var(vi, k as u16);
                terms.extend(qk.terms.into_iter().map(|(m, c)| (m.mul(&vk), c)));
            }
        }
        Some(Poly::from_terms(terms))
    }

    /// Coefficients as a univariate polynomial in variable `index`.
    fn univariate(&self, index: usize) -> Vec<Poly> {
        let deg = self.degree_in(index) as usize;
        let mut coeffs: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(index) as usize;
            let mut nm = m.clone();
            nm.set(index, 0);
            coeffs[e].push((nm, c.clone()));
        }
        coeffs.into_iter().map(Poly::from_terms).collect()
    }

    fn from_univariate(coeffs: &[Poly], index: usize) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Mono::var(index, k as u16);
            terms.extend(c.terms.iter().map(|(m, a)| (m.mul(&vk), a.clone())));
        }
        Poly::from_terms(terms)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic().1;
        }
        if other.is_zero() {
            return self.monic().1;
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Poly::one();
        }
        if self == other {
            return self.monic().1;
        }
        let mono = self.mono_content().gcd(&other.mono_content());
        let a = self.div_mono(&self.mono_content()).monic().1;
        let b = other.div_mono(&other.mono_content()).monic().1;
        let key = (a, b);
        let hit = GCD_MEMO.with(|m| {
            let m = m.borrow();
            m.get(&key).or_else(|| m.get(&(key.1.clone(), key.0.clone()))).cloned()
        });
        if let Some(g) = hit {
            return g.mul_mono(&mono, &Rat::ONE);
        }
        let g = gcd_no_mono(&key.0, &key.1).monic().1;
        GCD_MEMO.with(|m| {
            let mut m = m.borrow_mut();
            if m.len() > 4096 {
                m.clear();
            }
            m.insert(key, g.clone());
        });
        g.mul_mono(&mono, &Rat::ONE)
    }
}

thread_local! {
    // The recursive algorithm asks for the same content gcds many times.
    static GCD_MEMO: std::cell::RefCell<std::collections::HashMap<(Poly, Poly), Poly>> =
        Default::default();
}

fn gcd_no_mono(a: &Poly, b: &Poly) -> Poly {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant polynomial");
    // Coprime inputs are the common case; settle them before touching
    // contents, whose gcds can be far more expensive than the answer.
    let shared: Vec<usize> = (0..=v).filter(|k| a.depends_on(*k) && b.depends_on(*k)).collect();
    if shared.iter().all(|k| specialized_gcd_degree(a, b, *k) == Some(0)) {
        return Poly::one();
    }
    if !a.depends_on(v) {
        return a.gcd(&content(&b.univariate(v)));
    }
    if !b.depends_on(v) {
        return b.gcd(&content(&a.univariate(v)));
    }
    let ua = a.univariate(v);
    let ub = b.univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = ca.gcd(&cb);
    if specialized_gcd_degree(a, b, v) == Some(0) {
        return c;
    }
    let mut r0 = primitive(&ua, &ca);
    let mut r1 = primitive(&ub, &cb);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let over_constants = r0.iter().chain(r1.iter()).all(|k| k.as_constant().is_some());
    // Subresultant PRS: exact divisions by `g h^δ` keep coefficients small
    // without a content computation per step.
    let (mut g, mut h) = (Poly::one(), Poly::one());
    loop {
        let delta = (r0.len() - r1.len()) as u32;
        let r = pseudo_rem(&r0, &r1);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            // Constant in v: the primitive parts are coprime.
            return c;
        }
        r0 = r1;
        if over_constants {
            let inv = r.last().unwrap().as_constant().unwrap().recip().unwrap();
            r1 = r.iter().map(|k| k.scale(&inv)).collect();
            continue;
        }
        let divisor = g.mul(&h.pow(delta));
        r1 = r.iter().map(|k| k.div_exact(&divisor).expect("subresultant division is exact")).collect();
        g = r0.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
    let cr = content(&r1);
    let r1 = primitive(&r1, &cr);
    Poly::from_univariate(&r1, v).mul(&c).monic().1
}

/// Degree in `v` of the gcd after fixing every other variable at a sample
/// point. Specializing can only raise that degree (when leading
/// coefficients survive), so `Some(0)` proves the primitive parts coprime.
fn specialized_gcd_degree(a: &Poly, b: &Poly, v: usize) -> Option<usize> {
    let nvars = a.max_var().max(b.max_var()).unwrap_or(0) + 1;
    // Fixed pseudo-random sample points keep results reproducible.
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut best = None;
    for _ in 0..3 {
        let point: Vec<Option<Rat>> = (0..nvars)
            .map(|k| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (k != v).then(|| Rat::int(17 + (state >> 33) as i64 % 983))
            })
            .collect();
        let (Some(ua), Some(ub)) = (specialize(a, v, &point), specialize(b, v, &point)) else {
            continue;
        };
        if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
            continue;
        }
        let d = univariate_gcd_degree(ua, ub);
        best = Some(best.map_or(d, |b: usize| b.min(d)));
        if d == 0 {
            break;
        }
    }
    best
}

/// Dense coefficients in `v` with the other variables evaluated; trailing
/// zeros trimmed.
fn specialize(p: &Poly, v: usize, point: &[Option<Rat>]) -> Option<Vec<Rat>> {
    let mut out = vec![Rat::ZERO; p.degree_in(v) as usize + 1];
    for (m, c) in &p.terms {
        let mut mm = m.clone();
        let e = m.exp(v) as usize;
        mm.set(v, 0);
        let val = Poly::monomial(mm, c.clone()).eval(point).ok()?;
        out[e] = &out[e] + &val;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Some(out)
}

fn univariate_gcd_degree(mut a: Vec<Rat>, mut b: Vec<Rat>) -> usize {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb_inv = b.last().unwrap().recip().unwrap();
        while a.len() >= b.len() {
            let q = a.last().unwrap() * &lb_inv;
            let shift = a.len() - b.len();
            for (k, bk) in b.iter().enumerate() {
                a[k + shift] = &a[k + shift] - &(&q * bk);
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.as_constant().is_some() {
            return Poly::one();
        }
    }
    g
}

fn primitive(coeffs: &[Poly], content: &Poly) -> Vec<Poly> {
    if content.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.div_exact(content).expect("content divides every coefficient"))
        .collect()
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Standard pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    let mut steps_left = (r.len() as i64 - db as i64 + 1).max(0) as u32;
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bk.mul(&lr));
        }
        trim(&mut r);
        steps_left -= 1;
    }
    if steps_left > 0 && !r.is_empty() {
        let f = lb.pow(steps_left);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, e) in m.vars() {
                let name = Variable::from_index(v).to_string();
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u8) -> Poly {
        Poly::var(Variable::Position(i))
    }

    #[test]
    fn binomial_division_is_exact_or_refused() {
        let d = x(1).sub(&x(2));
        let p = d.mul(&d).mul(&x(3).add(&Poly::one()));
        let q = p.div_binomial(Variable::Position(1).index(), Variable::Position(2).index());
        assert_eq!(q.unwrap(), d.mul(&x(3).add(&Poly::one())));
        let r = x(1).add(&x(2));
        assert!(r.div_binomial(Variable::Position(1).index(), Variable::Position(2).index()).is_none());
    }

    #[test]
    fn general_division_and_gcd() {
        let a = x(1).add(&Poly::var(Variable::Lambda));
        let b = x(2).mul(&x(2)).sub(&Poly::constant(Rat::int(3)));
        let c = x(1).mul(&x(3)).add(&Poly::one());
        let p = a.mul(&b);
        let q = a.mul(&c);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&c).is_none());
        assert_eq!(p.gcd(&q), a.monic().1);
        assert!(b.gcd(&c).is_one());
    }

    #[test]
    fn gcd_with_monomial_content() {
        let l = Poly::var(Variable::Lambda);
        let p = l.mul(&l).mul(&x(1).sub(&x(2)));
        let q = l.mul(&x(1).sub(&x(2))).mul(&x(1));
        assert_eq!(p.gcd(&q), l.mul(&x(1).sub(&x(2))));
    }
}
