//! The commutative coefficient field: exact rational functions in the
//! particle positions `x_1..x_N`, the coupling `λ` and the auxiliary
//! parameters `x`, `y`.
//!
//! Every value is kept in a reduced form with a factored denominator. The
//! factors that actually occur in the models (the binomials `x_i - x_j` and
//! single variables such as `λ`) are atoms with cheap trial division; any
//! other denominator polynomial is kept as a list of pairwise coprime
//! factors with exponents, so derivatives and products only bump exponents
//! and cancellation is trial division by small factors. A multivariate gcd
//! is only consulted to refine that list, which the operator algebra never
//! needs.

mod poly;
mod rat;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;
use thiserror::Error;

pub use poly::{Mono, Poly};
pub use rat::Rat;

/// A symbol that may appear in a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Lambda,
    ParamX,
    ParamY,
    /// Particle position, 1-based.
    Position(u8),
}

impl Variable {
    pub fn index(self) -> usize {
        match self {
            Variable::Lambda => 0,
            Variable::ParamX => 1,
            Variable::ParamY => 2,
            Variable::Position(i) => {
                debug_assert!(i >= 1, "positions are 1-based");
                2 + i as usize
            }
        }
    }

    pub fn from_index(index: usize) -> Variable {
        match index {
            0 => Variable::Lambda,
            1 => Variable::ParamX,
            2 => Variable::ParamY,
            i => Variable::Position((i - 2) as u8),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Lambda => write!(f, "lambda"),
            Variable::ParamX => write!(f, "x"),
            Variable::ParamY => write!(f, "y"),
            Variable::Position(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("variable {0} has no assigned value")]
    Unassigned(Variable),
    #[error("denominator vanishes identically after substituting {0}")]
    DegenerateSubstitution(Variable),
}

/// Irreducible denominator factor kept in factored form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Atom {
    /// A single variable, by index.
    Var(u16),
    /// `x_a - x_b` for variable indices `a < b`.
    Diff(u16, u16),
}

impl Atom {
    fn poly(self) -> Poly {
        match self {
            Atom::Var(v) => Poly::var_index(v as usize),
            Atom::Diff(a, b) => Poly::binomial_difference(a as usize, b as usize),
        }
    }

    fn slope(self, v: usize) -> i64 {
        match self {
            Atom::Var(w) if w as usize == v => 1,
            Atom::Diff(a, _) if a as usize == v => 1,
            Atom::Diff(_, b) if b as usize == v => -1,
            _ => 0,
        }
    }

    fn divide(self, p: &Poly) -> Option<Poly> {
        match self {
            Atom::Var(v) => {
                let v = v as usize;
                if p.terms().iter().all(|(m, _)| m.exp(v) > 0) {
                    Some(p.div_mono(&Mono::var(v, 1)))
                } else {
                    None
                }
            }
            Atom::Diff(a, b) => p.div_binomial(a as usize, b as usize),
        }
    }

    fn eval(self, values: &[Option<Rat>]) -> Result<Rat, ScalarError> {
        let get = |v: u16| {
            values
                .get(v as usize)
                .and_then(|x| x.clone())
                .ok_or(ScalarError::Unassigned(Variable::from_index(v as usize)))
        };
        match self {
            Atom::Var(v) => get(v),
            Atom::Diff(a, b) => Ok(&get(a)? - &get(b)?),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(v) => write!(f, "{}", Variable::from_index(*v as usize)),
            Atom::Diff(a, b) => write!(
                f,
                "({} - {})",
                Variable::from_index(*a as usize),
                Variable::from_index(*b as usize)
            ),
        }
    }
}

type Atoms = SmallVec<[(Atom, u16); 4]>;
type Factors = SmallVec<[(Poly, u16); 1]>;

/// Monic denominator: atom powers times powers of pairwise coprime, monic,
/// atom-free factors, both lists sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Den {
    atoms: Atoms,
    factors: Factors,
}

impl Den {
    fn one() -> Den {
        Den { atoms: Atoms::new(), factors: Factors::new() }
    }

    fn is_one(&self) -> bool {
        self.atoms.is_empty() && self.factors.is_empty()
    }

    fn expand(&self) -> Poly {
        let mut p = Poly::one();
        for (f, e) in &self.factors {
            p = p.mul(&f.pow(*e as u32));
        }
        for (a, e) in &self.atoms {
            p = p.mul(&a.poly().pow(*e as u32));
        }
        p
    }

    /// Factors a nonzero polynomial as `c · den`.
    fn from_poly(p: &Poly) -> (Rat, Den) {
        debug_assert!(!p.is_zero());
        let mc = p.mono_content();
        let mut p = p.div_mono(&mc);
        let mut atoms = Atoms::new();
        for (v, e) in mc.vars() {
            atoms.push((Atom::Var(v as u16), e));
        }
        let positions: Vec<usize> = (3..=p.max_var().unwrap_or(0)).filter(|v| p.depends_on(*v)).collect();
        for (k, &a) in positions.iter().enumerate() {
            for &b in &positions[k + 1..] {
                let mut e = 0u16;
                while let Some(q) = p.div_binomial(a, b) {
                    p = q;
                    e += 1;
                }
                if e > 0 {
                    atoms.push((Atom::Diff(a as u16, b as u16), e));
                }
            }
        }
        atoms.sort_unstable();
        let (c, rest) = p.monic();
        let mut factors = Factors::new();
        if rest.as_constant().is_none() {
            factors.push((rest, 1));
        }
        (c, Den { atoms, factors })
    }
}

/// Adds `f^e` to a pairwise coprime factor list, splitting on common
/// divisors.
fn insert_factor(out: &mut Vec<(Poly, u16)>, f: Poly, e: u16) {
    if e == 0 || f.as_constant().is_some() {
        return;
    }
    let f = f.monic().1;
    for k in 0..out.len() {
        if out[k].0 == f {
            out[k].1 += e;
            return;
        }
        let g = f.gcd(&out[k].0);
        if g.as_constant().is_none() {
            let (b, eb) = out.remove(k);
            let b_rest = b.div_exact(&g).expect("gcd divides");
            let f_rest = f.div_exact(&g).expect("gcd divides");
            insert_factor(out, g, e + eb);
            insert_factor(out, b_rest, eb);
            insert_factor(out, f_rest, e);
            return;
        }
    }
    out.push((f, e));
}

fn refine<I: IntoIterator<Item = (Poly, u16)>>(items: I) -> Factors {
    let mut out = Vec::new();
    for (f, e) in items {
        insert_factor(&mut out, f, e);
    }
    out.sort_unstable();
    out.into_iter().collect()
}

/// Multiplicity of each base factor in `f^e`; `base` is pairwise coprime
/// and `f` is a product of its members.
fn multiplicities(base: &[Poly], factors: &Factors) -> Vec<u16> {
    let mut out = vec![0u16; base.len()];
    for (f, e) in factors {
        let mut rem = f.clone();
        for (k, b) in base.iter().enumerate() {
            while rem.as_constant().is_none() {
                match rem.div_exact(b) {
                    Some(q) => {
                        rem = q;
                        out[k] += e;
                    }
                    None => break,
                }
            }
        }
    }
    out
}

fn merge_atoms(a: &Atoms, b: &Atoms, combine: impl Fn(u16, u16) -> u16) -> Atoms {
    let mut out = Atoms::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, combine(x.1, y.1))
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, combine(x.1, 0))
            }
            (Some(x), None) => {
                i += 1;
                (x.0, combine(x.1, 0))
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, combine(0, y.1))
            }
            (None, None) => unreachable!(),
        };
        if next.1 > 0 {
            out.push(next);
        }
    }
    out
}

/// Multiplies `p` by the atoms of `have` missing relative to `want`.
fn lift(p: &Poly, have: &Atoms, want: &Atoms) -> Poly {
    let mut out = p.clone();
    for (atom, e) in want {
        let h = have.iter().find(|(a, _)| a == atom).map_or(0, |(_, e)| *e);
        for _ in h..*e {
            out = out.mul(&atom.poly());
        }
    }
    out
}

/// Exact rational function in reduced form.
///
/// Zero is `0/1`; otherwise numerator and denominator share no common
/// factor and the denominator is monic with the atoms `x_a - x_b` oriented
/// `a < b`. The form is unique whenever the non-atomic factors are
/// irreducible, which covers everything the operator algebra produces;
/// [`RatFn::is_zero`] is exact regardless.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Den,
}

/// Coefficient type of operator terms.
pub type RationalCoefficient = RatFn;

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Den::one() }
    }

    pub fn one() -> RatFn {
        RatFn::constant(Rat::ONE)
    }

    pub fn constant(c: Rat) -> RatFn {
        RatFn { num: Poly::constant(c), den: Den::one() }
    }

    pub fn int(v: i64) -> RatFn {
        RatFn::constant(Rat::int(v))
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Den::one() }
    }

    pub fn var(v: Variable) -> RatFn {
        RatFn::from_poly(Poly::var(v))
    }

    pub fn position(i: u8) -> RatFn {
        RatFn::var(Variable::Position(i))
    }

    /// `1 / (x_i - x_j)`.
    pub fn omega(i: u8, j: u8) -> RatFn {
        assert!(i != j, "omega needs distinct sites");
        let (a, b) = (Variable::Position(i).index() as u16, Variable::Position(j).index() as u16);
        if a < b {
            RatFn { num: Poly::one(), den: Den { atoms: smallvec::smallvec![(Atom::Diff(a, b), 1)], factors: Factors::new() } }
        } else {
            RatFn {
                num: Poly::constant(Rat::int(-1)),
                den: Den { atoms: smallvec::smallvec![(Atom::Diff(b, a), 1)], factors: Factors::new() },
            }
        }
    }

    /// `x_i / (x_i - x_j)`.
    pub fn theta(i: u8, j: u8) -> RatFn {
        &RatFn::position(i) * &RatFn::omega(i, j)
    }

    /// General quotient of two polynomials.
    pub fn from_quotient(num: Poly, den: &Poly) -> Result<RatFn, ScalarError> {
        RatFn::from_poly(num).div(&RatFn::from_poly(den.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Expanded denominator polynomial.
    pub fn denominator(&self) -> Poly {
        self.den.expand()
    }

    pub fn depends_on(&self, v: Variable) -> bool {
        let i = v.index();
        self.num.depends_on(i)
            || self.den.factors.iter().any(|(f, _)| f.depends_on(i))
            || self.den.atoms.iter().any(|(a, _)| a.slope(i) != 0)
    }

    fn reduce(mut num: Poly, atoms: Atoms, factors: Factors) -> RatFn {
        if num.is_zero() {
            return RatFn::zero();
        }
        let mut kept = Atoms::new();
        for (atom, e) in atoms {
            let mut left = e;
            if let Atom::Var(v) = atom {
                let have = num.mono_content().exp(v as usize).min(left);
                if have > 0 {
                    num = num.div_mono(&Mono::var(v as usize, have));
                    left -= have;
                }
            } else {
                while left > 0 {
                    match atom.divide(&num) {
                        Some(q) => {
                            num = q;
                            left -= 1;
                        }
                        None => break,
                    }
                }
            }
            if left > 0 {
                kept.push((atom, left));
            }
        }
        let mut factors: Vec<(Poly, u16)> = factors.into_iter().collect();
        let mut k = 0;
        while k < factors.len() {
            while factors[k].1 > 0 {
                match num.div_exact(&factors[k].0) {
                    Some(q) => {
                        num = q;
                        factors[k].1 -= 1;
                    }
                    None => break,
                }
            }
            if factors[k].1 > 0 {
                // A proper common divisor means the factor is reducible:
                // split it and start over.
                let g = num.gcd(&factors[k].0);
                if g.as_constant().is_none() {
                    let (f, e) = factors.remove(k);
                    let other = f.div_exact(&g).expect("gcd divides");
                    let mut items = std::mem::take(&mut factors);
                    items.push((g, e));
                    items.push((other, e));
                    factors = refine(items).into_iter().collect();
                    k = 0;
                    continue;
                }
            }
            k += 1;
        }
        factors.retain(|(_, e)| *e > 0);
        factors.sort_unstable();
        RatFn { num, den: Den { atoms: kept, factors: factors.into_iter().collect() } }
    }

    pub fn scale(&self, c: &Rat) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return RatFn { num, den: Den::one() };
            }
            return RatFn::reduce(num, self.den.atoms.clone(), self.den.factors.clone());
        }
        RatFn::sum_slice(&[self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let num = self.num.mul(&other.num);
        let atoms = merge_atoms(&self.den.atoms, &other.den.atoms, |a, b| a + b);
        let factors = if other.den.factors.is_empty() {
            self.den.factors.clone()
        } else if self.den.factors.is_empty() {
            other.den.factors.clone()
        } else {
            refine(self.den.factors.iter().chain(&other.den.factors).cloned())
        };
        RatFn::reduce(num, atoms, factors)
    }

    pub fn recip(&self) -> Result<RatFn, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (c, den) = Den::from_poly(&self.num);
        let num = self.den.expand().scale(&c.recip().unwrap());
        Ok(RatFn { num, den })
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, ScalarError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: u32) -> RatFn {
        let mut acc = RatFn::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum of many terms over a single common denominator.
    pub fn sum<I: IntoIterator<Item = RatFn>>(items: I) -> RatFn {
        let items: Vec<RatFn> = items.into_iter().filter(|t| !t.is_zero()).collect();
        RatFn::sum_slice(&items)
    }

    fn sum_slice(items: &[RatFn]) -> RatFn {
        match items.len() {
            0 => return RatFn::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let mut atoms = Atoms::new();
        for t in items {
            atoms = merge_atoms(&atoms, &t.den.atoms, |a, b| a.max(b));
        }
        let same_factors = items.iter().all(|t| t.den.factors == items[0].den.factors);
        if same_factors {
            let num = Poly::sum_all(items.iter().map(|t| lift(&t.num, &t.den.atoms, &atoms)).collect());
            return RatFn::reduce(num, atoms, items[0].den.factors.clone());
        }
        let base: Vec<Poly> = refine(items.iter().flat_map(|t| t.den.factors.iter().map(|(f, _)| (f.clone(), 1))))
            .into_iter()
            .map(|(f, _)| f)
            .collect();
        let mults: Vec<Vec<u16>> = items.iter().map(|t| multiplicities(&base, &t.den.factors)).collect();
        let lcm: Vec<u16> = (0..base.len()).map(|k| mults.iter().map(|m| m[k]).max().unwrap_or(0)).collect();
        let mut parts = Vec::with_capacity(items.len());
        for (t, m) in items.iter().zip(&mults) {
            let mut lifted = lift(&t.num, &t.den.atoms, &atoms);
            for (k, b) in base.iter().enumerate() {
                if lcm[k] > m[k] {
                    lifted = lifted.mul(&b.pow((lcm[k] - m[k]) as u32));
                }
            }
            parts.push(lifted);
        }
        let num = Poly::sum_all(parts);
        let factors: Factors = base.into_iter().zip(lcm).filter(|(_, e)| *e > 0).collect();
        RatFn::reduce(num, atoms, factors)
    }

    /// Partial derivative with respect to any variable.
    pub fn derivative(&self, v: Variable) -> RatFn {
        let vi = v.index();
        if self.is_zero() {
            return RatFn::zero();
        }
        let dn = self.num.derivative(vi);
        let moving: Vec<(Atom, u16, i64)> = self
            .den
            .atoms
            .iter()
            .filter_map(|(a, e)| {
                let s = a.slope(vi);
                (s != 0).then_some((*a, *e, s))
            })
            .collect();
        let moving_factors: Vec<(Poly, u16, Poly)> = self
            .den
            .factors
            .iter()
            .filter_map(|(f, e)| {
                let d = f.derivative(vi);
                (!d.is_zero()).then(|| (f.clone(), *e, d))
            })
            .collect();
        if moving.is_empty() && moving_factors.is_empty() {
            return RatFn::reduce(dn, self.den.atoms.clone(), self.den.factors.clone());
        }
        // d(n/D) = (n' G - n Σ_k e_k f_k' G/f_k) / (D G),  G = Π f_k over the
        // moving factors (atoms and general ones alike).
        let mut polys: Vec<(Poly, Poly, u16)> =
            moving.iter().map(|(a, e, s)| (a.poly(), Poly::constant(Rat::int(*s)), *e)).collect();
        polys.extend(moving_factors.iter().map(|(f, e, d)| (f.clone(), d.clone(), *e)));
        let mut g = Poly::one();
        for (p, _, _) in &polys {
            g = g.mul(p);
        }
        let mut num = dn.mul(&g);
        for (k, (_, d, e)) in polys.iter().enumerate() {
            let mut others = d.scale(&Rat::int(*e as i64));
            for (l, (p, _, _)) in polys.iter().enumerate() {
                if l != k {
                    others = others.mul(p);
                }
            }
            num = num.sub(&self.num.mul(&others));
        }
        let bump: Atoms = moving.iter().map(|(a, _, _)| (*a, 1)).collect();
        let atoms = merge_atoms(&self.den.atoms, &bump, |a, b| a + b);
        let factors: Factors = self
            .den
            .factors
            .iter()
            .map(|(f, e)| (f.clone(), if f.depends_on(vi) { e + 1 } else { *e }))
            .collect();
        RatFn::reduce(num, atoms, factors)
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, site: u8) -> RatFn {
        self.derivative(Variable::Position(site))
    }

    /// Evaluates at a full assignment indexed by [`Variable::index`].
    pub fn eval_indexed(&self, values: &[Option<Rat>]) -> Result<Rat, ScalarError> {
        let mut den = Rat::ONE;
        for (f, e) in &self.den.factors {
            let v = f.eval(values).map_err(|v| ScalarError::Unassigned(Variable::from_index(v)))?;
            den = &den * &v.pow(*e as u32);
        }
        for (a, e) in &self.den.atoms {
            den = &den * &a.eval(values)?.pow(*e as u32);
        }
        if den.is_zero() {
            return Err(ScalarError::Pole);
        }
        let num = self.num.eval(values).map_err(|v| ScalarError::Unassigned(Variable::from_index(v)))?;
        Ok(&num / &den)
    }

    pub fn eval(&self, assignment: &[(Variable, Rat)]) -> Result<Rat, ScalarError> {
        let width = assignment.iter().map(|(v, _)| v.index() + 1).max().unwrap_or(0);
        let mut values = vec![None; width];
        for (v, r) in assignment {
            values[v.index()] = Some(r.clone());
        }
        self.eval_indexed(&values)
    }

    /// Exact specialization of one variable to a constant.
    pub fn substitute(&self, v: Variable, value: &Rat) -> Result<RatFn, ScalarError> {
        if !self.depends_on(v) {
            return Ok(self.clone());
        }
        let vi = v.index();
        let num = self.num.substitute(vi, value);
        let mut atoms = Atoms::new();
        let mut moved: Vec<(Poly, u16)> = Vec::new();
        for (a, e) in &self.den.atoms {
            if a.slope(vi) == 0 {
                atoms.push((*a, *e));
            } else {
                moved.push((a.poly().substitute(vi, value), *e));
            }
        }
        let mut factors = Factors::new();
        for (f, e) in &self.den.factors {
            if f.depends_on(vi) {
                moved.push((f.substitute(vi, value), *e));
            } else {
                factors.push((f.clone(), *e));
            }
        }
        if moved.iter().any(|(p, _)| p.is_zero()) {
            return Err(ScalarError::DegenerateSubstitution(v));
        }
        let mut out = RatFn::reduce(num, atoms, factors);
        for (p, e) in moved {
            out = out.div(&RatFn::from_poly(p).pow(e as u32))?;
        }
        Ok(out)
    }

    /// Numerator and denominator as canonical strings.
    pub fn parts(&self) -> (String, String) {
        (self.num.to_string(), self.den_string())
    }

    fn den_string(&self) -> String {
        if self.den.is_one() {
            return "1".to_string();
        }
        let mut factors: Vec<String> = Vec::new();
        for (a, e) in &self.den.atoms {
            factors.push(if *e == 1 { a.to_string() } else { format!("{a}^{e}") });
        }
        for (p, e) in &self.den.factors {
            factors.push(if *e == 1 { format!("({p})") } else { format!("({p})^{e}") });
        }
        factors.join("*")
    }

    /// Rough size measure (numerator terms).
    pub fn size(&self) -> usize {
        self.num.len() + self.den.factors.iter().map(|(f, _)| f.len()).sum::<usize>()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den_string())
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        RatFn::add(self, rhs)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        RatFn::sub(self, rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::mul(self, rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn::neg(self)
    }
}

impl From<Rat> for RatFn {
    fn from(c: Rat) -> Self {
        RatFn::constant(c)
    }
}

impl From<i64> for RatFn {
    fn from(v: i64) -> Self {
        RatFn::int(v)
    }
}

#[cfg(test)]
mod tests;
