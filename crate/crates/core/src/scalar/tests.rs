use proptest::prelude::*;

use super::*;

fn x(i: u8) -> RatFn {
    RatFn::position(i)
}

fn at(pairs: &[(u8, i64)]) -> Vec<(Variable, Rat)> {
    pairs.iter().map(|(i, v)| (Variable::Position(*i), Rat::int(*v))).collect()
}

#[test]
fn omega_is_antisymmetric() {
    assert!((&RatFn::omega(1, 2) + &RatFn::omega(2, 1)).is_zero());
}

#[test]
fn thetas_sum_to_one() {
    // x1/(x1-x2) + x2/(x2-x1) = (x1 - x2)/(x1 - x2)
    assert!((&RatFn::theta(1, 2) + &RatFn::theta(2, 1)).is_one());
}

#[test]
fn theta_product_is_the_pair_kernel() {
    let kernel = RatFn::from_quotient(
        x(1).mul(&x(2)).numerator().clone(),
        &x(1).sub(&x(2)).mul(&x(2).sub(&x(1))).numerator().clone(),
    )
    .unwrap();
    let prod = &RatFn::theta(1, 2) * &RatFn::theta(2, 1);
    assert_eq!(prod, kernel);
    // -x1 x2 / (x1 - x2)^2
    let expected = RatFn::from_quotient(
        x(1).mul(&x(2)).neg().numerator().clone(),
        &x(1).sub(&x(2)).pow(2).numerator().clone(),
    )
    .unwrap();
    assert_eq!(prod, expected);
}

#[test]
fn partial_derivatives_match_quotient_rule() {
    assert!(RatFn::one().partial(1).is_zero());
    let w = RatFn::omega(1, 2);
    assert_eq!(w.partial(1), w.pow(2).neg());
    assert_eq!(w.partial(2), w.pow(2));
    // d/dx1 x1/(x1-x2) = -x2/(x1-x2)^2
    let expected = x(2).neg().mul(&w.pow(2));
    assert_eq!(RatFn::theta(1, 2).partial(1), expected);
}

#[test]
fn evaluation_and_poles() {
    assert_eq!(RatFn::omega(1, 2).eval(&at(&[(1, 3), (2, 1)])).unwrap(), Rat::new(1, 2));
    assert_eq!(RatFn::theta(1, 2).eval(&at(&[(1, 3), (2, 1)])).unwrap(), Rat::new(3, 2));
    assert_eq!(RatFn::omega(1, 2).eval(&at(&[(1, 1), (2, 1)])), Err(ScalarError::Pole));
    assert_eq!(
        RatFn::omega(1, 2).eval(&at(&[(1, 1)])),
        Err(ScalarError::Unassigned(Variable::Position(2)))
    );
}

#[test]
fn division_by_zero_is_reported() {
    assert_eq!(RatFn::one().div(&RatFn::zero()), Err(ScalarError::DivisionByZero));
}

#[test]
fn general_denominators_reduce() {
    // (x1^2 - x2^2) / (x1 + x2) = x1 - x2
    let num = x(1).pow(2).sub(&x(2).pow(2));
    let den = x(1).add(&x(2));
    let q = num.div(&den).unwrap();
    assert_eq!(q, x(1).sub(&x(2)));
    // 1/(x1 + x2) + 1/(x1 + x2) = 2/(x1 + x2)
    let r = RatFn::one().div(&den).unwrap();
    assert_eq!(&r + &r, RatFn::int(2).div(&den).unwrap());
    assert_eq!(&r * &den, RatFn::one());
}

#[test]
fn lambda_in_denominators_substitutes() {
    let lam = RatFn::var(Variable::Lambda);
    let f = (&lam + &RatFn::one()).div(&lam).unwrap();
    assert_eq!(f.substitute(Variable::Lambda, &Rat::int(2)).unwrap(), RatFn::constant(Rat::new(3, 2)));
    assert_eq!(
        f.substitute(Variable::Lambda, &Rat::ZERO),
        Err(ScalarError::DegenerateSubstitution(Variable::Lambda))
    );
    // λ/λ cancels before substitution, so λ -> 0 is fine.
    assert!(lam.div(&lam).unwrap().substitute(Variable::Lambda, &Rat::ZERO).unwrap().is_one());
}

#[test]
fn substitution_into_general_denominator() {
    let px = RatFn::var(Variable::ParamX);
    let den = &px + &x(1);
    let f = RatFn::one().div(&den).unwrap();
    let g = f.substitute(Variable::ParamX, &Rat::int(-1)).unwrap();
    assert_eq!(g, RatFn::one().div(&(&x(1) - &RatFn::one())).unwrap());
}

// ---- property tests -------------------------------------------------------

const VARS: [Variable; 4] = [Variable::Lambda, Variable::Position(1), Variable::Position(2), Variable::Position(3)];

fn arb_poly() -> impl Strategy<Value = RatFn> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u16..=2, 4)), 1..4).prop_map(|terms| {
        let mut acc = RatFn::zero();
        for (c, exps) in terms {
            let mut t = RatFn::int(c);
            for (v, e) in VARS.iter().zip(exps) {
                t = &t * &RatFn::var(*v).pow(e as u32);
            }
            acc = &acc + &t;
        }
        acc
    })
}

/// Small linear form: a non-atomic denominator factor. Dense random
/// denominators are left out because repeated differentiation makes their
/// gcds expensive, and the operator algebra never produces them.
fn arb_linear() -> impl Strategy<Value = RatFn> {
    prop::collection::vec(-2i64..=2, 5).prop_map(|c| {
        let mut acc = RatFn::int(c[0]);
        for (v, k) in VARS.iter().zip(&c[1..]) {
            acc = &acc + &(&RatFn::var(*v) * &RatFn::int(*k));
        }
        acc
    })
}

fn arb_ratfn() -> impl Strategy<Value = RatFn> {
    (arb_poly(), arb_linear(), prop::collection::vec(0u32..3, 4)).prop_map(|(n, lin, e)| {
        let mut den = if lin.is_zero() { RatFn::one() } else { lin };
        den = &den * &(&x(1) - &x(2)).pow(e[0]);
        den = &den * &(&x(2) - &x(3)).pow(e[1]);
        den = &den * &x(3).pow(e[2]);
        den = &den * &RatFn::var(Variable::Lambda).pow(e[3]);
        n.div(&den).unwrap()
    })
}

fn arb_point() -> impl Strategy<Value = Vec<(Variable, Rat)>> {
    prop::collection::vec((-40i64..=40, 1i64..=7), 4).prop_map(|v| {
        VARS.iter().zip(v).map(|(var, (n, d))| (*var, Rat::new(n, d))).collect()
    })
}

/// Rebuilds a value from its expanded numerator and denominator.
fn recanonicalize(f: &RatFn) -> RatFn {
    RatFn::from_quotient(f.numerator().clone(), &f.denominator()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_field_homomorphism(a in arb_ratfn(), b in arb_ratfn(), pts in prop::collection::vec(arb_point(), 5)) {
        let sum = &a + &b;
        let prod = &a * &b;
        for p in pts {
            let (ea, eb) = match (a.eval(&p), b.eval(&p)) {
                (Ok(ea), Ok(eb)) => (ea, eb),
                _ => continue,
            };
            prop_assert_eq!(sum.eval(&p).unwrap(), &ea + &eb);
            prop_assert_eq!(prod.eval(&p).unwrap(), &ea * &eb);
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_unique(a in arb_ratfn(), b in arb_ratfn()) {
        prop_assert_eq!(recanonicalize(&a), a.clone());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn partials_commute_and_obey_leibniz(a in arb_ratfn(), b in arb_ratfn()) {
        prop_assert_eq!(a.partial(1).partial(2), a.partial(2).partial(1));
        prop_assert_eq!(a.derivative(Variable::Lambda).partial(3), a.partial(3).derivative(Variable::Lambda));
        let lhs = (&a * &b).partial(2);
        let rhs = &(&a.partial(2) * &b) + &(&a * &b.partial(2));
        prop_assert_eq!(lhs, rhs);
    }
}
