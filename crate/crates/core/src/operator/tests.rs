use proptest::prelude::*;

use super::*;

fn ctx(n: u8, m: u8, sites: u8) -> GradingContext {
    GradingContext::new(n, m, sites).unwrap()
}

fn d(g: GradingContext, i: u8) -> OperatorSum {
    OperatorSum::derivative(g, i, 1).unwrap()
}

fn coef(g: GradingContext, c: RatFn) -> OperatorSum {
    OperatorSum::scalar(g, c)
}

#[test]
fn derivative_past_position() {
    let g = ctx(1, 0, 2);
    let lhs = &d(g, 1) * &OperatorSum::position(g, 1);
    let rhs = &(&OperatorSum::position(g, 1) * &d(g, 1)) + &OperatorSum::identity(g);
    assert_eq!(lhs, rhs);
    // Different sites commute.
    assert_eq!(&d(g, 2) * &OperatorSum::position(g, 1), &OperatorSum::position(g, 1) * &d(g, 2));
}

#[test]
fn derivative_past_omega() {
    let g = ctx(1, 1, 2);
    let w = RatFn::omega(1, 2);
    let lhs = &d(g, 1) * &coef(g, w.clone());
    let rhs = &(&coef(g, w.clone()) * &d(g, 1)) - &coef(g, w.pow(2));
    assert_eq!(lhs, rhs);
}

#[test]
fn second_order_leibniz_uses_binomials() {
    let g = ctx(1, 0, 1);
    let x2 = coef(g, RatFn::position(1).pow(2));
    let d2 = OperatorSum::derivative(g, 1, 2).unwrap();
    // ∂² x² = x²∂² + 4x∂ + 2
    let expected = OperatorSum::sum(
        g,
        &[&x2 * &d2, &coef(g, RatFn::position(1).scale(&Rat::int(4))) * &d(g, 1), coef(g, RatFn::int(2))],
    );
    assert_eq!(&d2 * &x2, expected);
}

#[test]
fn permutation_squares_to_one_as_operator() {
    for g in [ctx(2, 0, 3), ctx(1, 1, 3), ctx(1, 2, 2)] {
        let p = OperatorSum::permutation(g, 1, 2).unwrap();
        assert_eq!(&p * &p, OperatorSum::identity(g));
        assert_eq!(p, OperatorSum::permutation(g, 2, 1).unwrap());
    }
}

#[test]
fn colors_commute_with_coefficients() {
    let g = ctx(1, 1, 2);
    let e = OperatorSum::unit(g, 1, 1, 2).unwrap();
    let c = coef(g, RatFn::theta(1, 2));
    assert_eq!(&e * &c, &c * &e);
}

#[test]
fn bracket_rejects_mixed_parity_and_contexts() {
    let g = ctx(1, 1, 2);
    let mixed = &OperatorSum::unit(g, 1, 1, 2).unwrap() + &OperatorSum::unit(g, 1, 1, 1).unwrap();
    assert_eq!(mixed.parity(), None);
    assert_eq!(mixed.graded_bracket(&d(g, 1)), Err(OperatorError::MixedParity));
    let other = ctx(2, 0, 2);
    assert_eq!(d(g, 1).try_mul(&d(other, 1)), Err(OperatorError::ContextMismatch));
}

#[test]
fn odd_units_anticommute_across_sites() {
    let g = ctx(1, 1, 2);
    let a = OperatorSum::unit(g, 1, 1, 2).unwrap();
    let b = OperatorSum::unit(g, 2, 2, 1).unwrap();
    assert!(a.graded_bracket(&b).unwrap().is_zero());
    assert!(!(&(&a * &b) - &(&b * &a)).is_zero());
}

#[test]
fn leading_symbol_and_truncation() {
    let g = ctx(1, 0, 2);
    let op = &(&OperatorSum::position(g, 1) * &OperatorSum::derivative(g, 1, 2).unwrap()) + &d(g, 2);
    let lead = op.leading_symbol().unwrap();
    assert_eq!(lead.max_degree(), Some(2));
    assert_eq!(lead.len(), 1);
    assert_eq!(op.below_degree(2), d(g, 2));
    assert_eq!(OperatorSum::zero(g).leading_symbol(), Err(OperatorError::ZeroOperator));
}

#[test]
fn parameter_substitution() {
    let g = ctx(1, 0, 2);
    let lam = RatFn::var(Variable::Lambda);
    let op = &coef(g, lam.clone()) * &d(g, 1);
    let two = op.substitute_parameter(Variable::Lambda, &Rat::int(2)).unwrap();
    assert_eq!(two, &coef(g, RatFn::int(2)) * &d(g, 1));
    let inv = coef(g, RatFn::one().div(&lam).unwrap());
    assert!(inv.substitute_parameter(Variable::Lambda, &Rat::ZERO).is_err());
}

#[test]
fn canonical_text_is_stable() {
    let g = ctx(1, 1, 2);
    let op = &OperatorSum::unit(g, 2, 1, 2).unwrap() * &d(g, 1);
    assert_eq!(op.canonical_text(), "1 | 1 | [2:(1,2)] | [1,0]\n");
}

// ---- property tests -------------------------------------------------------

fn coeff_pool(k: usize) -> RatFn {
    match k {
        0 => RatFn::one(),
        1 => RatFn::position(1),
        2 => RatFn::omega(1, 2),
        3 => RatFn::var(Variable::Lambda),
        4 => RatFn::theta(2, 1),
        _ => RatFn::position(2).pow(2),
    }
}

/// Random operator of definite parity on (1|1), N = 2.
fn arb_op(parity: u8) -> impl Strategy<Value = OperatorSum> {
    let term = (0usize..6, 1u8..=2, 1u8..=2, 1u8..=2, 0u8..=2, 0u8..=1);
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        let g = ctx(1, 1, 2);
        let mut acc = OperatorSum::zero(g);
        for (c, site, a, b, d1, d2) in terms {
            // Flip the unit to the requested parity.
            let b = if g.unit_parity(a, b) == parity { b } else { 3 - b };
            let e = OperatorSum::unit(g, site, a, b).unwrap();
            let mut deriv = DerivWord::zero(2);
            deriv.0[0] = d1;
            deriv.0[1] = d2;
            let t = OperatorSum::term(g, coeff_pool(c), ColorWord::identity(), deriv);
            acc = &acc + &(&e * &t);
        }
        acc
    })
}

fn test_states(g: GradingContext) -> Vec<ColorState> {
    let mut out = Vec::new();
    for b in g.basis() {
        for amp in [RatFn::one(), RatFn::position(1).pow(2), &RatFn::position(1) * &RatFn::position(2).pow(3)] {
            out.push(ColorState::basis_state(g, &b, amp));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative(a in arb_op(0), b in arb_op(1), c in arb_op(1)) {
        prop_assert_eq!((&a * &b).try_mul(&c).unwrap(), a.try_mul(&(&b * &c)).unwrap());
    }

    #[test]
    fn graded_jacobi(a in arb_op(1), b in arb_op(1), c in arb_op(0)) {
        // [a,[b,c}} = [[a,b},c} + (-1)^{|a||b|} [b,[a,c}}
        let lhs = a.graded_bracket(&b.graded_bracket(&c).unwrap()).unwrap();
        let r1 = a.graded_bracket(&b).unwrap().graded_bracket(&c).unwrap();
        let r2 = b.graded_bracket(&a.graded_bracket(&c).unwrap()).unwrap();
        prop_assert!((&(&lhs - &r1) + &r2).is_zero());
    }

    #[test]
    fn product_matches_successive_application(a in arb_op(1), b in arb_op(0)) {
        let ab = &a * &b;
        for conv in [KoszulConvention::Left, KoszulConvention::Right] {
            for s in test_states(*a.grading()) {
                let direct = ab.apply(&s, conv).unwrap();
                let nested = a.apply(&b.apply(&s, conv).unwrap(), conv).unwrap();
                prop_assert_eq!(direct, nested);
            }
        }
    }

    #[test]
    fn normal_form_is_unique(a in arb_op(0), b in arb_op(0)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }
}
