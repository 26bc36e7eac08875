use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::wchar::character_table;
use crate::coeff::{BiLaurent, RatFn};
use crate::coxeter::{CartanType, Family, WeylGroup};
use crate::error::{Error, Result};

/// Bigraded multiplicity of an irreducible `V_ν` in `Sym(t*) ⊗ Λ(t*)`,
/// symmetric generators weighted `q`, exterior ones `vt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolienSeries {
    pub label: String,
    pub value: RatFn,
}

/// Signed cycle type `(length, sign)` of a signed permutation window.
pub fn signed_cycles(perm: &[i8]) -> Vec<(u32, i64)> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let (mut i, mut len, mut sign) = (start, 0, 1);
        while !seen[i] {
            seen[i] = true;
            len += 1;
            if perm[i] < 0 {
                sign = -sign;
            }
            i = perm[i].unsigned_abs() as usize - 1;
        }
        out.push((len, sign));
    }
    out
}

/// `det(1 + vt·ρ(w))` and `det(1 - q·ρ(w))` on the reflection representation.
pub fn reflection_determinants(ct: CartanType, perm: &[i8]) -> (BiLaurent, BiLaurent) {
    let mut num = BiLaurent::one();
    let mut den = BiLaurent::one();
    for (m, eps) in signed_cycles(perm) {
        let m = m as i32;
        let odd = if m % 2 == 0 { 1 } else { -1 };
        num = &num * &(&BiLaurent::one() - &BiLaurent::monomial(eps * odd, m, m));
        den = &den * &(&BiLaurent::one() - &BiLaurent::monomial(eps, 2 * m, 0));
    }
    if ct.family == Family::A {
        // drop the trivial summand of the permutation representation
        num = num.exact_div(&BiLaurent::from_terms([(1, 0, 0), (1, 1, 1)])).expect("fixed line");
        den = den.exact_div(&BiLaurent::one_minus_q()).expect("fixed line");
    }
    (num, den)
}

/// `M_ν` for every irreducible character, in character-table order.
pub fn molien_all(ct: CartanType) -> Result<Arc<Vec<MolienSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<Vec<MolienSeries>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&ct) {
        return Ok(t.clone());
    }
    let group = WeylGroup::shared(ct)?;
    let table = character_table(ct)?;
    let dets: Vec<(BiLaurent, BiLaurent)> =
        table.classes.iter().map(|c| reflection_determinants(ct, group.element(c[0]).perm())).collect();
    let mut den = ct
        .degrees()
        .iter()
        .fold(BiLaurent::one(), |acc, &d| &acc * &(&BiLaurent::one() - &BiLaurent::monomial(1, 2 * d as i32, 0)));
    // denominators not dividing the product of invariant degrees get multiplied in
    for (_, d) in &dets {
        if den.exact_div(d).is_err() {
            den = &den * d;
        }
    }
    let order = BigInt::from(group.len());
    let mut out = Vec::new();
    for (chi, label) in table.labels.iter().enumerate() {
        let mut acc = BiLaurent::zero();
        for (c, class) in table.classes.iter().enumerate() {
            let weight = class.len() as i64 * table.values[chi][c];
            if weight == 0 {
                continue;
            }
            let (n, d) = &dets[c];
            let cofactor = den.exact_div(d)?;
            acc += &(&(n * &cofactor) * &BiLaurent::constant(weight));
        }
        let num =
            acc.div_integer(&order).map_err(|_| Error::Data(format!("Molien series of {label} is not integral")))?;
        out.push(MolienSeries { label: label.clone(), value: RatFn::new(num, den.clone())? });
    }
    let out = Arc::new(out);
    Ok(cache.lock().unwrap().entry(ct).or_insert(out).clone())
}

pub fn molien(ct: CartanType, label: &str) -> Result<MolienSeries> {
    molien_all(ct)?
        .iter()
        .find(|m| m.label == label)
        .cloned()
        .ok_or_else(|| Error::Data(format!("{ct} has no character labelled {label:?}")))
}

/// `Σ_ν dim(ν)·M_ν`, which should be `((1 + vt)/(1 - q))^rank`.
pub fn molien_dimension_sum(ct: CartanType) -> Result<RatFn> {
    let table = character_table(ct)?;
    let all = molien_all(ct)?;
    Ok(all.iter().enumerate().map(|(i, m)| m.value.scale(&BiLaurent::constant(table.degree(i)))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_series() {
        let a1 = CartanType::a(1);
        let triv = molien(a1, "2").unwrap().value;
        let num = BiLaurent::from_terms([(1, 0, 0), (1, 3, 1)]);
        let den = BiLaurent::from_terms([(1, 0, 0), (-1, 4, 0)]);
        assert_eq!(triv, RatFn::new(num, den.clone()).unwrap());
        let sign = molien(a1, "11").unwrap().value;
        assert_eq!(sign, RatFn::new(BiLaurent::from_terms([(1, 2, 0), (1, 1, 1)]), den).unwrap());
        assert_eq!(triv.to_string(), "(1 + v^3 t)/(1 - v^4)");
    }

    #[test]
    fn dimension_sum_is_power_of_z() {
        for ct in [CartanType::a(1), CartanType::a(2), CartanType::a(3), CartanType::b(2), CartanType::d(4)] {
            let want = (0..ct.rank).fold(RatFn::one(), |acc, _| &acc * &RatFn::z());
            assert_eq!(molien_dimension_sum(ct).unwrap(), want, "{ct}");
        }
    }

    #[test]
    fn trivial_character_at_t_zero_counts_invariants() {
        // Sym(t*)^W is polynomial on generators of the basic degrees
        let ct = CartanType::b(3);
        let m = molien(ct, "3.").unwrap().value;
        let num = BiLaurent::from_big_terms(m.num().terms().filter(|(e, _)| e.1 == 0).map(|(&e, c)| (c.clone(), e)));
        let at_zero = RatFn::new(num, m.den().clone()).unwrap();
        let want = ct
            .degrees()
            .iter()
            .fold(BiLaurent::one(), |acc, &d| &acc * &(&BiLaurent::one() - &BiLaurent::monomial(1, 2 * d as i32, 0)));
        assert_eq!(at_zero, RatFn::new(BiLaurent::one(), want).unwrap());
    }

    #[test]
    fn unknown_label() {
        assert!(molien(CartanType::a(2), "4").is_err());
    }
}
