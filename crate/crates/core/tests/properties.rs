use efunc_core::efn::{monodromy_merge, monodromy_split};
use efunc_core::frobenius::{apply_operator, frobenius_basis, hypergeometric_series_coeffs, LogSeries};
use efunc_core::geometry::{certify, critical_value_polynomial, Divisor, ExactPoint};
use efunc_core::hypergeometric::{e_hyp, hyp, hyp_adjoint_params, HypParams};
use efunc_core::laplace::{laplace_r, primitive_s, RElement};
use efunc_core::parse::{parse_operator, parse_polynomial, parse_r_element};
use efunc_core::poly::Poly;
use efunc_core::rational::{q, qr};
use efunc_core::{Quartic, Substitution, WeylOperator, Q};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| qr(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("non-zero", |x| *x != q(0))
}

fn operator() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec(((0i64..4, 0u32..4), rational()), 1..6).prop_map(WeylOperator::from_terms)
}

fn punctured_operator() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec(((-3i64..4, 0u32..3), rational()), 1..5).prop_map(WeylOperator::from_terms)
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    (prop::collection::vec(rational(), 0..=max_deg), nonzero_rational()).prop_map(|(mut c, lead)| {
        c.push(lead);
        Poly::new(c)
    })
}

fn r_element() -> impl Strategy<Value = RElement> {
    prop::collection::vec((rational(), (-24i64..=18, 1i64..=6), 0u32..=3), 1..5).prop_map(|ts| {
        ts.into_iter()
            .fold(RElement::zero(), |acc, (c, (n, d), b)| acc + RElement::rational_monomial(c, qr(n, d), b))
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop_oneof![
        nonzero_rational().prop_map(Substitution::Scale),
        rational().prop_map(Substitution::Translate),
        Just(Substitution::Negate),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weyl_ring_laws(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(WeylOperator::one() * a.clone(), a);
    }

    #[test]
    fn commutator_is_one(a in operator()) {
        let d = WeylOperator::d();
        let z = WeylOperator::z();
        prop_assert_eq!(d.clone() * z.clone() - z * d, WeylOperator::one());
        // [D, a] is the z-derivative of the coefficients
        let lhs = WeylOperator::d() * a.clone() - a.clone() * WeylOperator::d();
        let rhs = WeylOperator::from_terms(
            a.terms().filter(|(i, _, _)| *i > 0).map(|(i, j, c)| ((i - 1, j), c * q(i))),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitutions_are_homomorphisms(a in operator(), b in operator(), s in substitution()) {
        let sub = |x: &WeylOperator| x.substitute(&s).unwrap();
        prop_assert_eq!(sub(&(a.clone() * b.clone())), sub(&a) * sub(&b));
        prop_assert_eq!(sub(&(a.clone() + b.clone())), sub(&a) + sub(&b));
    }

    #[test]
    fn kummer_is_homomorphism(a in operator(), b in operator(), m in 1u32..4) {
        let ta = a.to_theta_form().to_operator();
        let sub = |x: &WeylOperator| x.substitute(&Substitution::Kummer(m)).unwrap();
        prop_assert_eq!(sub(&(ta.clone() * b.clone())), sub(&ta) * sub(&b));
    }

    #[test]
    fn punctured_adjoint_and_theta(a in punctured_operator(), b in punctured_operator()) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((a.clone() * b.clone()).adjoint(), b.adjoint() * a.adjoint());
        prop_assert_eq!(a.to_theta_form().to_operator(), a);
    }

    #[test]
    fn operator_print_parse(a in punctured_operator()) {
        prop_assert_eq!(parse_operator(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn polynomial_print_parse(p in poly(5)) {
        prop_assert_eq!(parse_polynomial(&p.to_string_var("t"), 't').unwrap(), p);
    }

    #[test]
    fn r_element_print_parse(h in r_element()) {
        prop_assert_eq!(parse_r_element(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn primitive_inverts_derivative(h in r_element()) {
        prop_assert_eq!(primitive_s(&h).derivative(), h);
    }

    #[test]
    fn laplace_is_linear(h in r_element(), g in r_element(), c in rational()) {
        let l = |x: &RElement| laplace_r(x).unwrap();
        prop_assert_eq!(l(&(h.scale(&c) + g.clone())), l(&h).scale(&c) + l(&g));
    }

    #[test]
    fn hyp_adjoint_matches_operator(p in poly(2), extra in 0usize..2, qq in poly(1)) {
        let qq = &qq * &Poly::monomial(q(1), p.degree().unwrap() + extra);
        let params = HypParams::new(p, qq).unwrap();
        prop_assert_eq!(hyp(&params).adjoint(), hyp(&hyp_adjoint_params(&params)));
    }

    #[test]
    fn e_hyp_is_kummer_pullback(p in poly(1), qq in poly(3)) {
        prop_assume!(p.degree() < qq.degree());
        let params = HypParams::new(p, qq).unwrap();
        let m = params.m() as u32;
        prop_assert_eq!(hyp(&params).substitute(&Substitution::Kummer(m)).unwrap(), e_hyp(&params).unwrap());
    }

    #[test]
    fn frobenius_residual_vanishes(
        roots in prop::collection::vec((-2i64..=2, 0usize..3), 1..=3),
        p in poly(2),
    ) {
        let shifts = [q(0), qr(1, 2), qr(2, 3)];
        let roots: Vec<Q> = roots.into_iter().map(|(k, s)| q(k) + shifts[s].clone()).collect();
        let qq = Poly::from_roots(q(1), &roots);
        prop_assume!(p.degree() <= qq.degree());
        let params = HypParams::new(p, qq).unwrap();
        let basis = frobenius_basis(&params, 12).unwrap();
        prop_assert_eq!(basis.len(), roots.len());
        for s in &basis {
            prop_assert!(apply_operator(&hyp(&params), s).unwrap().is_zero());
        }
    }

    #[test]
    fn nonresonant_members_are_hypergeometric(a in rational(), b1 in rational(), b2 in rational()) {
        // Q = t (t - b1) (t - b2) with roots distinct mod 1, member at 0
        let fr = |x: &Q| x - x.floor();
        prop_assume!(fr(&b1) != q(0) && fr(&b2) != q(0) && fr(&b1) != fr(&b2));
        let params = HypParams::new(
            Poly::new(vec![-a.clone(), q(1)]),
            Poly::from_roots(q(1), &[q(0), b1.clone(), b2.clone()]),
        ).unwrap();
        let basis = frobenius_basis(&params, 10).unwrap();
        let at_zero = basis.iter().find(|s| s.terms().any(|t| t.start == q(0))).unwrap();
        let want = hypergeometric_series_coeffs(&[-a], &[q(1) - b1, q(1) - b2, q(1)], &q(1), 10).unwrap();
        prop_assert!(at_zero.terms().all(|t| t.b == 0));
        for (n, c) in want.iter().enumerate() {
            prop_assert_eq!(at_zero.coeff(&q(n as i64), 0), c.clone());
        }
    }

    #[test]
    fn log_series_sum_is_commutative(a in rational(), b in rational(), n in 2usize..8) {
        let s = LogSeries::monomial(a.clone(), 1, n);
        let t = LogSeries::monomial(b.clone(), 0, n + 2).scale(&q(3));
        prop_assert_eq!(s.add(&t), t.add(&s));
        prop_assert_eq!(s.add(&t).order(), n);
        prop_assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn critical_cubic_vanishes_on_critical_values(r1 in rational(), r2 in rational(), c in rational()) {
        // f' = 4 (x - r1)(x - r2)(x - r3) with r1 + r2 + r3 = 0
        let r3 = -(&r1 + &r2);
        let fp = Poly::from_roots(q(4), &[r1.clone(), r2.clone(), r3.clone()]);
        let mut coeffs = vec![c];
        coeffs.extend(fp.coeffs().iter().enumerate().map(|(i, a)| a / q(i as i64 + 1)));
        let f = Poly::new(coeffs);
        let quartic = Quartic::from_poly(&f).unwrap();
        let cubic = critical_value_polynomial(&quartic);
        for r in [r1, r2, r3] {
            prop_assert_eq!(cubic.eval(&f.eval(&r)), q(0));
        }
    }

    #[test]
    fn monodromy_split_round_trip(es in prop::collection::btree_set(-40i64..40, 1..20), n in 1u32..6) {
        let stream: Vec<(Q, i64)> = es.iter().map(|e| (qr(*e, n as i64), *e)).collect();
        let parts = monodromy_split(&stream, n).unwrap();
        prop_assert_eq!(monodromy_merge(&parts), stream);
    }

    #[test]
    fn divisor_degree_and_evaluation(pts in prop::collection::vec((rational(), rational(), 1i64..3), 1..5)) {
        let d = Divisor::from_rational(&pts, 128);
        let e = Divisor::from_rational(&[(q(1), q(-1), 2)], 128);
        let conv = d.convolve(&e);
        prop_assert_eq!(conv.degree(), d.degree() * 2);
        let (x, y) = conv.evaluation_exact().unwrap();
        let (a, b) = d.evaluation_exact().unwrap();
        prop_assert_eq!(x, &a * q(2) + q(2 * d.degree()));
        prop_assert_eq!(y, &b * q(2) - q(2 * d.degree()));
        let all_rational = conv.entries().iter().all(|en| matches!(en.exact, Some(ExactPoint::Rational { .. })));
        prop_assert!(all_rational);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificate_flags_agree(a2 in rational(), a1 in rational(), a0 in rational()) {
        let f = Quartic::new(q(0), a2, a1, a0);
        let c = certify(&f, 128, None).unwrap();
        prop_assert_eq!(c.is_certified(), c.distinct && !c.collinear && !c.equilateral);
        prop_assert!(c.numeric_agrees());
    }
}
