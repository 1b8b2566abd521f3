use super::*;
use crate::color::ColorWord;
use crate::operator::DerivWord;

fn model(n: u8, m: u8, sites: u8) -> Model {
    Model::new(ModelContext::new(GradingContext::new(n, m, sites).unwrap(), Coupling::Symbolic))
}

fn at_zero(n: u8, m: u8, sites: u8) -> Model {
    Model::new(ModelContext::new(GradingContext::new(n, m, sites).unwrap(), Coupling::Fixed(Rat::ZERO)))
}

fn t(p: i8, a: u8, b: u8) -> Generator {
    Generator::T { p, a, b, minus_one: TMinusOne::Plain }
}

fn mat_mul(a: &[Vec<OperatorSum>], b: &[Vec<OperatorSum>]) -> Vec<Vec<OperatorSum>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let g = *a[0][0].grading();
                    let parts: Vec<OperatorSum> = (0..n).map(|k| &a[i][k] * &b[k][j]).collect();
                    OperatorSum::sum(g, &parts)
                })
                .collect()
        })
        .collect()
}

#[test]
fn sutherland_lax_diagonal() {
    let md = model(1, 1, 2);
    let g = md.grading();
    let l = md.lax_matrix(ModelKind::Sutherland, LaxPart::L).unwrap();
    let expected = &(&OperatorSum::position(g, 1) * &OperatorSum::derivative(g, 1, 1).unwrap())
        + &OperatorSum::scalar(g, RatFn::constant(Rat::new(1, 2)));
    assert_eq!(l[0][0], expected);
}

#[test]
fn calogero_lax_at_zero_coupling_is_diagonal() {
    let md = at_zero(2, 0, 3);
    let g = md.grading();
    let l = md.lax_matrix(ModelKind::Calogero, LaxPart::L).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                assert_eq!(l[i][j], OperatorSum::derivative(g, i as u8 + 1, 1).unwrap());
            } else {
                assert!(l[i][j].is_zero());
            }
        }
    }
}

#[test]
fn m_rows_and_columns_sum_to_zero() {
    for kind in [ModelKind::Calogero, ModelKind::Sutherland] {
        let md = model(1, 1, 3);
        let g = md.grading();
        let mm = md.lax_matrix(kind, LaxPart::M).unwrap();
        for i in 0..3 {
            assert!(OperatorSum::sum(g, &mm[i]).is_zero());
            assert!(OperatorSum::sum(g, mm.iter().map(|row| &row[i])).is_zero());
        }
    }
}

#[test]
fn pair_builders_need_two_sites() {
    let md = model(1, 1, 1);
    assert!(matches!(md.hamiltonian(ModelKind::Calogero), Err(ModelError::TooFewSites(_))));
    assert!(matches!(md.lax_matrix(ModelKind::Sutherland, LaxPart::M), Err(ModelError::TooFewSites(_))));
}

#[test]
fn scalar_calogero_hamiltonian() {
    // n = 1: P_12 = 1 and the pair term is -λ(1+λ) ω_12².
    let md = model(1, 0, 2);
    let g = md.grading();
    let h = md.hamiltonian(ModelKind::Calogero).unwrap();
    let lam = RatFn::var(Variable::Lambda);
    let half = RatFn::constant(Rat::new(1, 2));
    let kin = &OperatorSum::derivative(g, 1, 2).unwrap() + &OperatorSum::derivative(g, 2, 2).unwrap();
    let pot = (&(&lam * &(&lam + &RatFn::one())) * &RatFn::omega(1, 2).pow(2)).neg();
    assert_eq!(h, &kin.scale(&half) + &OperatorSum::scalar(g, pot));
}

#[test]
fn sutherland_hamiltonian_at_zero_coupling() {
    let md = at_zero(1, 1, 2);
    let g = md.grading();
    let h = md.hamiltonian(ModelKind::Sutherland).unwrap();
    let parts: Vec<OperatorSum> = g
        .site_range()
        .map(|i| {
            let e = &OperatorSum::position(g, i) * &OperatorSum::derivative(g, i, 1).unwrap();
            (&e * &e).scale_rat(&Rat::new(1, 2))
        })
        .collect();
    assert_eq!(h, OperatorSum::sum(g, &parts));
    assert_eq!(h.parity(), Some(0));
}

#[test]
fn yangian_generators_low_degree() {
    let md = model(1, 1, 2);
    let g = md.grading();
    for a in g.colors() {
        for b in g.colors() {
            let t0 = md.get(&t(0, a, b)).unwrap();
            let units: Vec<OperatorSum> = g.site_range().map(|i| OperatorSum::unit(g, i, a, b).unwrap()).collect();
            assert_eq!(*t0, OperatorSum::sum(g, &units));
            assert_eq!(t0.parity(), Some(g.unit_parity(a, b)));
            assert_eq!(*md.get(&Generator::J { p: 0, a, b }).unwrap(), *t0);
            assert_eq!(*md.get(&Generator::K { p: 0, a, b }).unwrap(), *t0);
        }
    }
    // one site: T_1 = E(x∂ + 1/2)
    let one = model(1, 1, 1);
    let g1 = one.grading();
    let expected = &OperatorSum::unit(g1, 1, 1, 2).unwrap()
        * &(&(&OperatorSum::position(g1, 1) * &OperatorSum::derivative(g1, 1, 1).unwrap())
            + &OperatorSum::scalar(g1, RatFn::constant(Rat::new(1, 2))));
    assert_eq!(*one.get(&t(1, 1, 2)).unwrap(), expected);
}

#[test]
fn t_minus_one_needs_invertible_coupling() {
    let md = at_zero(1, 1, 2);
    assert!(matches!(md.get(&t(-1, 1, 1)), Err(ModelError::SingularCoupling(_))));
    let sym = model(1, 1, 2);
    let graded = sym.get(&Generator::T { p: -1, a: 2, b: 2, minus_one: TMinusOne::Graded }).unwrap();
    assert_eq!(*graded, -&*sym.get(&t(-1, 2, 2)).unwrap());
}

#[test]
fn loop_generator_matches_matrix_square() {
    let md = model(1, 1, 2);
    let g = md.grading();
    let l = md.lax_matrix(ModelKind::Calogero, LaxPart::L).unwrap();
    let sq = mat_mul(&l, &l);
    for (a, b) in [(1, 2), (2, 2)] {
        let mut parts = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                parts.push(&OperatorSum::unit(g, i as u8 + 1, a, b).unwrap() * &sq[i][j]);
            }
        }
        assert_eq!(*md.get(&Generator::J { p: 2, a, b }).unwrap(), OperatorSum::sum(g, &parts));
    }
}

#[test]
fn t2_matches_explicit_expansion() {
    for (n, m, sites) in [(1, 1, 2), (2, 0, 3)] {
        let md = model(n, m, sites);
        for (a, b) in [(1, 1), (1, 2), (2, 1)] {
            let via_lax = md.get(&t(2, a, b)).unwrap();
            let explicit = md.get(&Generator::T2Explicit { a, b }).unwrap();
            assert_eq!(*via_lax, *explicit, "({n},{m},{sites}) a={a} b={b}");
        }
    }
}

#[test]
fn even_context_has_no_odd_units() {
    let md = model(2, 0, 2);
    let op = md.get(&t(2, 1, 2)).unwrap();
    assert_eq!(op.parity(), Some(0));
    assert!(op.terms().all(|(k, _)| k.color.parity(&md.grading()) == 0));
}

#[test]
fn k_generators_on_one_color() {
    let md = model(1, 0, 3);
    let g = md.grading();
    let k2 = md.get(&Generator::K { p: 2, a: 1, b: 1 }).unwrap();
    assert_eq!(*k2, *md.get(&Generator::SumOfSquares).unwrap());
    assert!(g.colors().eq(1..=1));
}

#[test]
fn p_tensor_reduces_to_o() {
    let md = model(1, 1, 2);
    let p = md.get(&Generator::Tensor { kind: TensorKind::P, a: 1, b: 2, c: 2, d: 1 }).unwrap();
    let o = md.get(&Generator::Tensor { kind: TensorKind::O, a: 1, b: 2, c: 2, d: 1 }).unwrap();
    let p00 = p
        .substitute_parameter(Variable::ParamX, &Rat::ZERO)
        .unwrap()
        .substitute_parameter(Variable::ParamY, &Rat::ZERO)
        .unwrap();
    assert_eq!(p00, *o);
}

#[test]
fn q1_at_origin_is_t1() {
    let md = model(1, 1, 2);
    let q = md.get(&Generator::Q1 { a: 2, b: 1 }).unwrap();
    let q00 = q
        .substitute_parameter(Variable::ParamX, &Rat::ZERO)
        .unwrap()
        .substitute_parameter(Variable::ParamY, &Rat::ZERO)
        .unwrap();
    assert_eq!(q00, *md.get(&t(1, 2, 1)).unwrap());
}

#[test]
fn o_tensor_even_indices() {
    let md = model(2, 0, 2);
    let o = md.get(&Generator::Tensor { kind: TensorKind::O, a: 1, b: 2, c: 2, d: 1 }).unwrap();
    let expected = -&(&(&*md.get(&t(0, 1, 1)).unwrap() * &*md.get(&t(1, 2, 2)).unwrap())
        - &(&*md.get(&t(1, 1, 1)).unwrap() * &*md.get(&t(0, 2, 2)).unwrap()));
    assert_eq!(*o, expected);
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer(3, 0), 1);
    assert_eq!(pochhammer(3, 1), 3);
    assert_eq!(pochhammer(2, 3), 24);
    assert_eq!(w_prefactor_denominator(2, 1), 6);
    assert_eq!(w_prefactor_denominator(3, 0), 4 * 3 * 4);
}

#[test]
fn w_recursion_matches_direct_commutator() {
    // s = 2, p = 1: [Σx², J_3] / 6, built here by hand.
    let md = model(1, 0, 2);
    let g = md.grading();
    let x2 = OperatorSum::sum(g, &[OperatorSum::scalar(g, RatFn::position(1).pow(2)), OperatorSum::scalar(g, RatFn::position(2).pow(2))]);
    let rows = md.lax_row_sums(ModelKind::Calogero, 3).unwrap();
    let j3 = OperatorSum::sum(g, rows.iter());
    let direct = (&(&x2 * &j3) - &(&j3 * &x2)).scale_rat(&Rat::new(1, 6));
    let w = md.get(&Generator::W { s: 2, p: 1, form: WForm::Recursive }).unwrap();
    assert_eq!(*w, direct);
    assert_eq!(*md.get(&Generator::W { s: 2, p: 1, form: WForm::Closed }).unwrap(), direct);
}

#[test]
fn w_leading_symbol() {
    let md = at_zero(1, 1, 2);
    let g = md.grading();
    let (s, p) = (2u8, 1u8);
    let w = md.get(&Generator::W { s, p, form: WForm::Recursive }).unwrap();
    let parts: Vec<OperatorSum> = g
        .site_range()
        .map(|j| {
            let c = RatFn::position(j).neg().pow(s as u32 - 1);
            OperatorSum::term(g, c, ColorWord::identity(), DerivWord::single(g.sites, j, p + s - 1))
        })
        .collect();
    assert_eq!(w.leading_symbol().unwrap(), OperatorSum::sum(g, &parts));
    // and J_p at zero coupling is Σ ∂^p
    let j2 = md.get(&Generator::W { s: 1, p: 2, form: WForm::Recursive }).unwrap();
    let d: Vec<OperatorSum> = g.site_range().map(|j| OperatorSum::derivative(g, j, 2).unwrap()).collect();
    assert_eq!(*j2, OperatorSum::sum(g, &d));
}

#[test]
fn colored_w_at_zero_coupling_leads_with_free_generator() {
    let md = at_zero(1, 1, 2);
    let q = md.get(&Generator::Q { s: 3, p: 0, a: 1, b: 2, form: WForm::Recursive }).unwrap();
    let free = md.get(&Generator::QFree { s: 3, p: 0, a: 1, b: 2 }).unwrap();
    // leading part is Σ E (-x)^{2} ∂^{2} = Σ E x² ∂²
    assert_eq!(q.leading_symbol().unwrap(), *free);
    assert_eq!(q.parity(), Some(1));
}

#[test]
fn generator_names_are_stable() {
    assert_eq!(Generator::Hamiltonian(ModelKind::Sutherland).to_string(), "H_s");
    assert_eq!(t(2, 1, 3).to_string(), "T[2,1,3]");
    assert_eq!(Generator::W { s: 2, p: 1, form: WForm::Recursive }.to_string(), "W[2,1]");
    assert_eq!(
        Generator::Lax { kind: ModelKind::Calogero, part: LaxPart::M, i: 1, j: 2 }.to_string(),
        "M_c[1,2]"
    );
}
