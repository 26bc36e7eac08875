use mtk::charexp::{character_table, fourier_block, gomi_trace, hecke_character_table, molien_dimension_sum};
use mtk::coeff::{BiLaurent, RatFn};
use mtk::coxeter::{poincare_polynomial, CartanType, WeylGroup};
use mtk::expr::parse_element;
use mtk::hecke::{HeckeElement, KLTable};
use mtk::trace::{geometric_trace, solve_trace};
use mtk::Error;

#[test]
fn group_orders_and_poincare_polynomials() {
    for (ct, order) in [(CartanType::a(3), 24), (CartanType::b(3), 48), (CartanType::d(4), 192)] {
        let g = WeylGroup::new(ct).unwrap();
        assert_eq!(g.len(), order);
        let p = poincare_polynomial(&g);
        assert_eq!(p.iter().sum::<u64>(), order as u64);
        // product of [d_i]_q over the degrees
        let mut want = vec![1u64];
        for d in ct.degrees() {
            let mut next = vec![0; want.len() + d as usize - 1];
            for (i, c) in want.iter().enumerate() {
                for k in 0..d as usize {
                    next[i + k] += c;
                }
            }
            want = next;
        }
        assert_eq!(p, want, "{ct}");
    }
}

#[test]
fn kl_cache_survives_a_round_trip() {
    let dir = std::env::temp_dir().join(format!("mtk-modules-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kl-B3.txt");
    let mut built = KLTable::load_or_build(CartanType::b(3), &path).unwrap();
    let mut loaded = KLTable::load(&path).unwrap();
    assert_eq!(built.entries(), loaded.entries());
    assert!(KLTable::load_or_build(CartanType::a(3), &path).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn solver_covers_b_and_d_and_reports_d4() {
    for ct in [CartanType::b(2), CartanType::b(3), CartanType::d(3)] {
        let table = solve_trace(ct, &-BiLaurent::t()).unwrap();
        let one = HeckeElement::one(table.group());
        let z = RatFn::z();
        let want = (0..ct.rank).fold(RatFn::one(), |acc, _| &acc * &z);
        assert_eq!(table.evaluate(&one).unwrap(), want, "{ct}");
    }
    assert!(matches!(solve_trace(CartanType::d(4), &-BiLaurent::t()), Err(Error::Inconsistent { .. })));
}

#[test]
fn bundled_b2_fourier_data_reproduces_the_trace() {
    let ct = CartanType::b(2);
    assert!(fourier_block(ct, None).is_ok());
    let g = WeylGroup::shared(ct).unwrap();
    let mut kl = KLTable::for_group(&g);
    for w in 0..g.len() {
        let c = kl.basis_element(w).clone();
        assert_eq!(gomi_trace(&c).unwrap(), geometric_trace(&c).unwrap(), "{:?}", g.word(w));
    }
}

#[test]
fn hecke_characters_specialize_to_ordinary_characters() {
    for ct in [CartanType::a(3), CartanType::b(3)] {
        let hecke = hecke_character_table(ct).unwrap();
        let ordinary = character_table(ct).unwrap();
        assert!(ordinary.is_orthonormal());
        let g = WeylGroup::shared(ct).unwrap();
        for (chi, label) in hecke.labels.iter().enumerate() {
            let o = ordinary.index_of(label).unwrap();
            for w in 0..g.len() {
                let at_one = hecke.values[chi][w].eval_mod(1, 0, 1_000_003);
                let want = ordinary.value(o, w).rem_euclid(1_000_003) as u64;
                assert_eq!(at_one, want, "{ct} {label} at {:?}", g.word(w));
            }
        }
    }
}

#[test]
fn molien_dimension_sum_is_trace_of_one_in_type_d() {
    let ct = CartanType::d(3);
    let z = RatFn::z();
    assert_eq!(molien_dimension_sum(ct).unwrap(), &(&z * &z) * &z);
}

#[test]
fn expressions_cover_sums_inverses_and_kl_elements() {
    let g = WeylGroup::shared(CartanType::a(2)).unwrap();
    let mut kl = KLTable::for_group(&g);
    let c12 = parse_element("C' 1 2", &g, Some(&mut kl)).unwrap();
    let c1 = parse_element("C' 1", &g, Some(&mut kl)).unwrap();
    let c2 = parse_element("C' 2", &g, Some(&mut kl)).unwrap();
    assert_eq!(c12, &c1 * &c2);
    let mixed = parse_element("2*1 2 - 1 -1 + e", &g, None).unwrap();
    let s12 = HeckeElement::from_word(&g, &[1, 2]).unwrap();
    assert_eq!(mixed, s12.scale(&BiLaurent::constant(2)));
}
