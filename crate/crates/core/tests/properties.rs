use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use dvar_core::dmaps::{is_d_rational_map, polynomial_first_integrals, RationalMap};
use dvar_core::dvariety::{induced_derivation, validate_section, Section, Variety};
use dvar_core::expr::{parse_polynomial, parse_rational_function};
use dvar_core::ideal::{groebner, monomials_up_to};
use dvar_core::ode::{compile, jet_ring, next_derivative, type_signature, OdeForm, OdeSpec};
use dvar_core::{
    DerivationSpec, FieldElement, Monomial, MonomialOrder, Polynomial, Rational, RationalFunction, Ring, RingContext,
};

/// x, y, z over ℚ(c, e) with δc = 1, δe = e.
fn ring() -> Ring {
    let mut d = BTreeMap::new();
    d.insert("c".to_string(), FieldElement::from_integer(1));
    d.insert("e".to_string(), FieldElement::param(2, 1));
    RingContext::new(&["x", "y", "z"], &["c", "e"], d).unwrap()
}

fn qring() -> Ring {
    RingContext::autonomous(&["x", "y", "z"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// A coefficient in ℚ(c, e): a rational times a small parameter monomial,
/// sometimes divided by (1 + c).
fn coefficient(nparams: usize) -> impl Strategy<Value = FieldElement> {
    (rational(), 0u32..=1, 0u32..=1, prop::bool::weighted(0.15)).prop_map(move |(r, a, b, div)| {
        let mut c = FieldElement::from_rational(r);
        if nparams == 2 {
            c = &(&c * &FieldElement::param(2, 0).pow(a)) * &FieldElement::param(2, 1).pow(b);
            if div {
                c = &c * &(&FieldElement::one() + &FieldElement::param(2, 0)).inv();
            }
        }
        c
    })
}

fn poly_in(ring: Ring, degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let monos = monomials_up_to(ring.nvars(), degree);
    let np = ring.nparams();
    prop::collection::vec((0..monos.len(), coefficient(np)), 0..=max_terms).prop_map(move |ts| {
        let terms: Vec<(Monomial, FieldElement)> = ts.into_iter().map(|(i, c)| (monos[i].clone(), c)).collect();
        Polynomial::from_terms(&ring, terms)
    })
}

fn poly(degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly_in(ring(), degree, max_terms)
}

fn nonzero(degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly(degree, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn spec() -> impl Strategy<Value = DerivationSpec> {
    prop::collection::vec(poly(2, 3), 3).prop_map(|cs| DerivationSpec::new(&ring(), cs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printer_round_trip(p in poly(4, 6)) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text, &ring()).unwrap(), p);
    }

    #[test]
    fn rational_function_round_trip(n in poly(2, 3), d in nonzero(2, 3)) {
        let f = RationalFunction::new(n, d).unwrap();
        prop_assert_eq!(parse_rational_function(&f.to_string(), &ring()).unwrap(), f);
    }

    #[test]
    fn normalization_cancels_common_factors(n in poly(2, 3), d in nonzero(2, 3), h in nonzero(1, 3)) {
        let a = RationalFunction::new(&n * &h, &d * &h).unwrap();
        let b = RationalFunction::new(n, d).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn derivation_is_additive_and_leibniz(s in spec(), f in poly(3, 4), g in poly(3, 4)) {
        prop_assert_eq!(s.apply(&(&f + &g)), &s.apply(&f) + &s.apply(&g));
        prop_assert_eq!(s.apply(&(&f * &g)), &(&s.apply(&f) * &g) + &(&f * &s.apply(&g)));
    }

    #[test]
    fn rational_derivation_is_a_quotient_rule(s in spec(), n in poly(2, 3), d in nonzero(2, 3)) {
        let f = RationalFunction::new(n.clone(), d.clone()).unwrap();
        let expect = RationalFunction::new(&(&s.apply(&n) * &d) - &(&n * &s.apply(&d)), &d * &d).unwrap();
        prop_assert_eq!(s.apply_rational(&f), expect);
    }

    /// δ(f(a)) = f^δ(a) + Σ ∂f/∂xᵢ(a)·δ(aᵢ).
    #[test]
    fn chain_rule_through_substitution(
        s in spec(),
        f in poly(3, 4),
        a in prop::collection::vec(poly(2, 3), 3),
    ) {
        let lhs = s.apply(&f.substitute(&a).unwrap());
        let mut rhs = f.coeff_delta().substitute(&a).unwrap();
        for (i, ai) in a.iter().enumerate() {
            rhs = &rhs + &(&f.partial(i).substitute(&a).unwrap() * &s.apply(ai));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn groebner_self_check_and_certificates(
        gens in prop::collection::vec(poly_in(qring(), 2, 3), 1..=3),
        f in poly_in(qring(), 3, 4),
        lex in any::<bool>(),
    ) {
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GrevLex };
        let gb = groebner(&qring(), &gens, order).unwrap();
        prop_assert!(gb.s_pairs_reduce_to_zero());
        prop_assert!(gb.is_reduced());
        let cert = gb.normal_form(&f);
        prop_assert_eq!(&cert.reconstruct(&gb), &f);
        // idempotent, and f - NF(f) lies in the ideal
        prop_assert_eq!(gb.reduce(&cert.remainder), cert.remainder.clone());
        prop_assert!(gb.contains(&(&f - &cert.remainder)));
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
    }

    #[test]
    fn signature_is_invariant_under_scaling(
        p in poly_in(jets(2), 2, 4).prop_filter("involves u2", |p| p.degree_in(2) > 0),
        c in coefficient(2).prop_filter("nonzero", |c| !c.is_zero()),
    ) {
        let ring = p.ring().clone();
        let a = OdeSpec::new(&ring, 2, OdeForm::Implicit(p.clone())).unwrap();
        let b = OdeSpec::new(&ring, 2, OdeForm::Implicit(p.scale(&c))).unwrap();
        prop_assert_eq!(type_signature(&a), type_signature(&b));
    }

    #[test]
    fn explicit_signature_is_invariant_under_scaling(
        num in poly_in(jets(1), 2, 3).prop_filter("free of u1", |p| p.degree_in(1) == 0),
        den in poly_in(jets(1), 1, 2).prop_filter("nonzero, free of u1", |p| !p.is_zero() && p.degree_in(1) == 0),
        c in coefficient(2).prop_filter("nonzero", |c| !c.is_zero()),
    ) {
        let ring = num.ring().clone();
        let a = OdeSpec::new(&ring, 1, OdeForm::Explicit { num: num.clone(), den: den.clone() }).unwrap();
        let b = OdeSpec::new(&ring, 1, OdeForm::Explicit { num: num.scale(&c), den: den.scale(&c) }).unwrap();
        prop_assert_eq!(type_signature(&a), type_signature(&b));
    }
}

fn jets(order: usize) -> Ring {
    let mut d = BTreeMap::new();
    d.insert("c".to_string(), FieldElement::from_integer(1));
    d.insert("e".to_string(), FieldElement::param(2, 1));
    let base = RingContext::new(&[] as &[&str], &["c", "e"], d).unwrap();
    jet_ring(&base, order, "u").unwrap()
}

fn qjets(order: usize) -> Ring {
    jet_ring(&RingContext::autonomous(&[] as &[&str]).unwrap(), order, "u").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// dim of the compiled variety equals the order.
    #[test]
    fn dimension_law(
        order in 1usize..=2,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ring = qjets(order);
        let lower = monomials_up_to(order, 2);
        let mut pick = |terms: usize| {
            let ts: Vec<(Monomial, FieldElement)> = (0..terms)
                .map(|_| {
                    let m = &lower[rng.gen_range(0..lower.len())];
                    let mut e = m.exponents().to_vec();
                    e.push(0);
                    (Monomial::from_exponents(e), FieldElement::from_integer(rng.gen_range(-3..=3)))
                })
                .collect();
            Polynomial::from_terms(&ring, ts)
        };
        let num = pick(3);
        let den = loop {
            let d = pick(2);
            if !d.is_zero() {
                break d;
            }
        };
        let spec = OdeSpec::new(&ring, order, OdeForm::Explicit { num, den }).unwrap();
        let c = compile(&spec).unwrap();
        prop_assert_eq!(c.dvariety.variety().dimension(), type_signature(&spec).ell);
    }

    /// For the compiled implicit equation, δ_s(u_L) is the section's u_L
    /// component, and both agree with next_derivative on V.
    #[test]
    fn next_derivative_consistency(
        p in poly_in(qjets(1), 2, 3).prop_filter("involves u1", |p| p.degree_in(1) > 0),
    ) {
        let ring = p.ring().clone();
        let spec = OdeSpec::new(&ring, 1, OdeForm::Implicit(p.clone())).unwrap();
        let c = match compile(&spec) {
            Ok(c) => c,
            // P = 0 and ∂P/∂u₁ ≠ 0 have no common solution
            Err(dvar_core::DvarError::EmptyVariety) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let d = &c.dvariety;
        let top = Polynomial::var(d.ring(), 1);
        let ind = induced_derivation(d, &top).unwrap();
        prop_assert_eq!(&ind, &d.variety().reduce(&d.section().components()[1]));
        // next_derivative = num/den; on V, w·den = 1 so num·w ≡ δu₁
        let nd = next_derivative(&p).unwrap();
        let map: Vec<usize> = vec![0, 1];
        let num = nd.numerator().embed(d.ring(), &map);
        let den = nd.denominator().embed(d.ring(), &map);
        prop_assert!(d.variety().vanishes(&(&(&ind * &den) - &num)));
    }

    /// First integrals of δx = a·x, δy = b·y recheck and are D-maps to (𝔸¹, 0).
    #[test]
    fn first_integrals_are_maps_to_constants(a in -2i64..=2, b in -2i64..=2) {
        let r = RingContext::autonomous(&["x", "y"]).unwrap();
        let s = vec![
            Polynomial::var(&r, 0).scale(&FieldElement::from_integer(a)),
            Polynomial::var(&r, 1).scale(&FieldElement::from_integer(b)),
        ];
        let d = validate_section(&Variety::affine_space(&r), &Section::new(&r, s).unwrap()).unwrap();
        let fi = polynomial_first_integrals(&d, 3).unwrap();
        for p in &fi.basis {
            prop_assert!(induced_derivation(&d, p).unwrap().is_zero());
            prop_assert!(p.as_constant().is_none());
            let f = RationalMap::to_constants(d.clone(), RationalFunction::from_polynomial(p.clone())).unwrap();
            prop_assert!(is_d_rational_map(&f).unwrap().holds);
        }
    }

    /// Rewriting a component as (c·num)/(c·den) changes nothing.
    #[test]
    fn map_verdicts_ignore_common_scalars(
        n in poly_in(qring(), 2, 3),
        d in poly_in(qring(), 1, 2).prop_filter("nonzero", |p| !p.is_zero()),
        k in rational().prop_filter("nonzero", |r| *r != Rational::from_integer(0.into())),
    ) {
        use dvar_core::dmaps::{is_dominant, is_generically_finite};
        let src = validate_section(&Variety::affine_space(&qring()), &Section::zero(&qring())).unwrap();
        let t = RingContext::autonomous(&["t"]).unwrap();
        let tgt = validate_section(&Variety::affine_space(&t), &Section::zero(&t)).unwrap();
        let c = FieldElement::from_rational(k);
        let f1 = RationalFunction::new(n.clone(), d.clone()).unwrap();
        let f2 = RationalFunction::new(n.scale(&c), d.scale(&c)).unwrap();
        let m1 = RationalMap::new(src.clone(), tgt.clone(), vec![f1]).unwrap();
        let m2 = RationalMap::new(src, tgt, vec![f2]).unwrap();
        prop_assert_eq!(is_d_rational_map(&m1).unwrap().holds, is_d_rational_map(&m2).unwrap().holds);
        prop_assert_eq!(is_dominant(&m1).unwrap(), is_dominant(&m2).unwrap());
        prop_assert_eq!(is_generically_finite(&m1).unwrap(), is_generically_finite(&m2).unwrap());
    }
}
