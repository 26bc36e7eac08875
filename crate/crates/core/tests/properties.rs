use std::sync::Arc;

use proptest::prelude::*;

use mtk::coeff::{series_expand, BiLaurent, RatFn};
use mtk::coxeter::{CartanType, WeylGroup};
use mtk::hecke::{HeckeElement, KLTable};
use mtk::homfly::{homfly_invariant, BraidWord};
use mtk::trace::geometric_trace;

fn laurent() -> impl Strategy<Value = BiLaurent> {
    prop::collection::vec((-5i64..=5, -4i32..=4, 0i32..=3), 0..5).prop_map(BiLaurent::from_terms)
}

fn nonzero_laurent() -> impl Strategy<Value = BiLaurent> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

/// `±v^j Π (1 - q^k)`: invertible as a power series in `v`.
fn series_denominator() -> impl Strategy<Value = BiLaurent> {
    (prop::collection::vec(1u32..=3, 0..3), -2i32..=2, any::<bool>()).prop_map(|(ks, j, neg)| {
        let mut d = BiLaurent::monomial(if neg { -1 } else { 1 }, j, 0);
        for k in ks {
            d = &d * &(&BiLaurent::one() - &BiLaurent::monomial(1, 2 * k as i32, 0));
        }
        d
    })
}

fn group(ct: CartanType) -> Arc<WeylGroup> {
    WeylGroup::shared(ct).unwrap()
}

fn types() -> impl Strategy<Value = CartanType> {
    prop_oneof![
        Just(CartanType::a(2)),
        Just(CartanType::a(3)),
        Just(CartanType::b(2)),
        Just(CartanType::b(3)),
        Just(CartanType::d(3)),
    ]
}

fn element(ct: CartanType) -> impl Strategy<Value = HeckeElement> {
    let g = group(ct);
    let n = g.len();
    prop::collection::vec((0..n, -2i64..=2, -2i32..=2, 0i32..=1), 1..4).prop_map(move |terms| {
        let mut h = HeckeElement::zero(&g);
        for (w, c, ev, et) in terms {
            h.add_term(w, BiLaurent::monomial(c, ev, et));
        }
        h
    })
}

fn typed_pair() -> impl Strategy<Value = (HeckeElement, HeckeElement)> {
    types().prop_flat_map(|ct| (element(ct), element(ct)))
}

fn typed_triple() -> impl Strategy<Value = (HeckeElement, HeckeElement, HeckeElement)> {
    types().prop_flat_map(|ct| (element(ct), element(ct), element(ct)))
}

fn braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec((1..n as i64, any::<bool>()), 0..7).prop_map(move |ls| {
            BraidWord::new(n, ls.into_iter().map(|(i, pos)| if pos { i } else { -i }).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &BiLaurent::one(), a);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in laurent(), b in nonzero_laurent()) {
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn ratfn_equality_ignores_common_factors(n in laurent(), d in nonzero_laurent(), c in nonzero_laurent()) {
        let f = RatFn::new(n.clone(), d.clone()).unwrap();
        let g = RatFn::new(&n * &c, &d * &c).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(&f.normalized(), &f);
        prop_assert_eq!(&(&f - &g), &RatFn::zero());
    }

    #[test]
    fn series_times_denominator_gives_numerator(num in laurent(), den in series_denominator(), cutoff in 0i32..=12) {
        let f = RatFn::new(num.clone(), den.clone()).unwrap();
        let s = series_expand(&f, cutoff).unwrap().to_poly();
        let err = &(&s * &den) - &num;
        let floor = cutoff + den.min_v().unwrap();
        for (&(ev, _), _) in err.terms() {
            prop_assert!(ev > floor, "residual at v^{} with cutoff {}", ev, cutoff);
        }
    }

    #[test]
    fn reduced_is_equal(num in laurent(), den in series_denominator()) {
        let f = RatFn::new(&num * &(&BiLaurent::one() + &BiLaurent::q()), &den * &(&BiLaurent::one() - &BiLaurent::q().pow(2))).unwrap();
        prop_assert_eq!(f.reduced(), f);
    }

    #[test]
    fn hecke_multiplication_is_associative((a, b, c) in typed_triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn bar_is_an_involutive_ring_map((a, b) in typed_pair()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn trace_is_central((a, b) in typed_pair()) {
        prop_assert_eq!(geometric_trace(&(&a * &b)).unwrap(), geometric_trace(&(&b * &a)).unwrap());
    }

    #[test]
    fn skein_identity(b in braid(), pos in 0usize..8, gen in 1i64..4) {
        let n = b.strands() as i64;
        let gen = 1 + (gen - 1) % (n - 1);
        let pos = pos.min(b.letters().len());
        let mut plus = b.letters().to_vec();
        plus.insert(pos, gen);
        let mut minus = b.letters().to_vec();
        minus.insert(pos, -gen);
        let i = |l: Vec<i64>| homfly_invariant(&BraidWord::new(b.strands(), l).unwrap()).unwrap().az().unwrap();
        let lhs = &(&BiLaurent::monomial(1, 0, 1) * &i(plus)) - &(&BiLaurent::monomial(1, 0, -1) * &i(minus));
        prop_assert_eq!(lhs, &BiLaurent::monomial(1, 1, 0) * &i(b.letters().to_vec()));
    }

    #[test]
    fn conjugation_invariance(b in braid(), c in braid()) {
        prop_assume!(b.strands() == c.strands());
        let conj = c.concat(&b).unwrap().concat(&c.inverse()).unwrap();
        prop_assert_eq!(homfly_invariant(&conj).unwrap(), homfly_invariant(&b).unwrap());
    }
}

#[test]
fn hecke_relations_hold_in_every_small_type() {
    for ct in [CartanType::a(3), CartanType::b(3), CartanType::d(4)] {
        let g = group(ct);
        let gens: Vec<HeckeElement> = (1..=ct.rank).map(|s| HeckeElement::generator(&g, s).unwrap()).collect();
        let one = HeckeElement::one(&g);
        for (i, s) in gens.iter().enumerate() {
            // σ² = 1 + (v - v^{-1})σ
            assert_eq!(s * s, &one + &s.scale(&BiLaurent::v_minus_vinv()), "{ct} σ{}", i + 1);
            assert_eq!(s * &HeckeElement::generator_inverse(&g, i + 1).unwrap(), one);
            for (j, t) in gens.iter().enumerate().skip(i + 1) {
                let m = ct.m(i + 1, j + 1) as usize;
                let alt = |x: &HeckeElement, y: &HeckeElement| {
                    (0..m).fold(one.clone(), |acc, k| &acc * if k % 2 == 0 { x } else { y })
                };
                assert_eq!(alt(s, t), alt(t, s), "{ct} braid relation for σ{}, σ{}", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn kl_basis_is_bar_invariant_and_unitriangular() {
    for ct in [CartanType::a(3), CartanType::b(3)] {
        let mut kl = KLTable::new(ct).unwrap();
        let g = kl.group().clone();
        for w in 0..g.len() {
            let c = kl.basis_element(w).clone();
            assert_eq!(c.bar(), c, "{ct} {:?}", g.word(w));
            assert_eq!(c.coeff(w), BiLaurent::one());
            for (x, coeff) in c.terms() {
                if x != w {
                    assert!(g.length(x) < g.length(w));
                    assert!(coeff.max_v().unwrap() < 0, "{ct}: coefficient {coeff} is not in v^-1 Z[v^-1]");
                }
            }
        }
    }
}
