//! Markov traces: the type-A recursion, the linear-system solver for types
//! B and D, and the Hochschild series `Tr(C′_w)`.

mod solver;

pub use solver::{solve_trace, solve_trace_with, special_word, TraceTable, SOLVER_MAX_ORDER};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::coeff::{series_expand, BiLaurent, RatFn};
use crate::coxeter::{CartanType, Family, WeylGroup};
use crate::error::{Error, Result};
use crate::hecke::{HeckeElement, KLTable};

/// The two stabilization constants of a Markov trace:
/// `Tr(σ_n ι(a)) = stab·Tr(a)` and `Tr(σ_n^{-1} ι(a)) = inverse·Tr(a)`.
///
/// The quadratic relation then forces the tower constant
/// `z = v·(inverse - stab)/(1 - q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkovParams {
    pub stab: BiLaurent,
    pub inverse: BiLaurent,
}

impl MarkovParams {
    /// `stab = -t`, `inverse = v^{-1}`, so `z = (1 + vt)/(1 - q)`.
    pub fn geometric() -> Self {
        Self { stab: -BiLaurent::t(), inverse: BiLaurent::monomial(1, -1, 0) }
    }

    /// Numerator of `z` over `1 - q`.
    pub fn tower_numerator(&self) -> BiLaurent {
        (&self.inverse - &self.stab).shift(1, 0)
    }

    pub fn z(&self) -> RatFn {
        RatFn::over_one_minus_q(self.tower_numerator(), 1)
    }
}

impl Default for MarkovParams {
    fn default() -> Self {
        Self::geometric()
    }
}

/// The type-A trace on the tower `H(A_0) ⊂ H(A_1) ⊂ … ⊂ H(A_n)`, all
/// realized inside the enumerated group `A_n`.
///
/// Values are kept as numerators over `(1 - q)^level` and memoized per
/// `(level, element)`.
pub struct MarkovTrace {
    group: Arc<WeylGroup>,
    params: MarkovParams,
    memo: Mutex<HashMap<(usize, usize), BiLaurent>>,
}

impl MarkovTrace {
    pub fn new(rank: usize, params: MarkovParams) -> Result<Self> {
        let group = WeylGroup::shared(CartanType::a(rank))?;
        Ok(Self { group, params, memo: Mutex::new(HashMap::new()) })
    }

    /// A process-wide instance with the geometric parameters.
    pub fn shared(rank: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<MarkovTrace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&rank) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::new(rank, MarkovParams::geometric())?);
        Ok(cache.lock().unwrap().entry(rank).or_insert(t).clone())
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn params(&self) -> &MarkovParams {
        &self.params
    }

    fn in_level(&self, level: usize, w: usize) -> bool {
        self.group.word(w).iter().all(|&s| s <= level)
    }

    /// `Tr_level(σ_w)·(1 - q)^level`.
    pub fn numerator(&self, level: usize, w: usize) -> BiLaurent {
        if let Some(x) = self.memo.lock().unwrap().get(&(level, w)) {
            return x.clone();
        }
        let g = &self.group;
        let value = if level == 0 {
            debug_assert_eq!(w, g.identity());
            BiLaurent::one()
        } else if !g.word(w).contains(&level) {
            &self.params.tower_numerator() * &self.numerator(level - 1, w)
        } else {
            // w = u·r with u in the parabolic subgroup and r = s_level·r'
            let mut r = w;
            let mut u_word = Vec::new();
            while let Some(s) = (1..level).find(|&s| g.length(g.left_gen(s, r)) < g.length(r)) {
                r = g.left_gen(s, r);
                u_word.push(s);
            }
            let u = g.index_of_word(&u_word).expect("valid generators");
            let r_rest = g.left_gen(level, r);
            let prod = &HeckeElement::basis(g, r_rest) * &HeckeElement::basis(g, u);
            let inner = self.level_numerator(level - 1, &prod);
            &(&self.params.stab * &BiLaurent::one_minus_q()) * &inner
        };
        self.memo.lock().unwrap().insert((level, w), value.clone());
        value
    }

    fn level_numerator(&self, level: usize, h: &HeckeElement) -> BiLaurent {
        let mut acc = BiLaurent::zero();
        for (w, c) in h.terms() {
            acc += &(c * &self.numerator(level, w));
        }
        acc
    }

    /// `Tr_level(h)` for `h` supported on the parabolic subgroup `A_level`.
    pub fn trace_at_level(&self, level: usize, h: &HeckeElement) -> Result<RatFn> {
        if h.cartan_type() != self.group.cartan_type() {
            return Err(Error::TypeMismatch(h.cartan_type().name(), self.group.cartan_type().name()));
        }
        if level > self.rank() {
            return Err(Error::Unsupported(format!("level {level} above rank {}", self.rank())));
        }
        if let Some((w, _)) = h.terms().find(|(w, _)| !self.in_level(level, *w)) {
            return Err(Error::Unsupported(format!(
                "element {} does not lie in level {level}",
                crate::coxeter::format_word(self.group.word(w))
            )));
        }
        Ok(RatFn::over_one_minus_q(self.level_numerator(level, h), level as u32))
    }

    pub fn trace(&self, h: &HeckeElement) -> Result<RatFn> {
        self.trace_at_level(self.rank(), h)
    }
}

/// The type-A trace with `Tr(σ_n ι(a)) = -t·Tr(a)` and `Tr(σ_n^{-1} ι(a)) = v^{-1}·Tr(a)`.
pub fn ocneanu_trace(rank: usize, h: &HeckeElement) -> Result<RatFn> {
    let ct = h.cartan_type();
    if ct.family != Family::A || ct.rank != rank {
        return Err(Error::TypeMismatch(ct.name(), CartanType::a(rank).name()));
    }
    MarkovTrace::shared(rank)?.trace(h)
}

/// The geometric trace: the type-A recursion, or the solver at `y = -t`.
pub fn geometric_trace(h: &HeckeElement) -> Result<RatFn> {
    let ct = h.cartan_type();
    match ct.family {
        Family::A => ocneanu_trace(ct.rank, h),
        _ => solve_trace(ct, &-BiLaurent::t())?.evaluate(h),
    }
}

/// `Tr(C′_w)`: the mixed Poincaré series of `w`.
pub fn hochschild_series(table: &mut KLTable, w: usize) -> Result<RatFn> {
    let c = table.basis_element(w).clone();
    geometric_trace(&c)
}

/// First coefficient that is not a polynomial in `t` with nonnegative
/// integer coefficients and degree at most `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityFailure {
    pub order: i32,
    pub coeff: BiLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub pass: bool,
    pub failure: Option<PositivityFailure>,
}

pub fn positivity_report(f: &RatFn, cutoff: i32, rank: usize) -> Result<PositivityReport> {
    let series = series_expand(f, cutoff)?;
    for (k, c) in series.coeffs.iter().enumerate() {
        let bad = c.terms().any(|(&(_, et), a)| a.sign() == num_bigint::Sign::Minus || et < 0 || et as usize > rank);
        if bad {
            let failure = PositivityFailure { order: series.lead + k as i32, coeff: c.clone() };
            return Ok(PositivityReport { pass: false, failure: Some(failure) });
        }
    }
    Ok(PositivityReport { pass: true, failure: None })
}

/// A violated trace identity, with the basis element that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFailure {
    pub rule: String,
    pub witness: String,
    pub got: String,
    pub expected: String,
}

impl std::fmt::Display for RuleFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails at a = [{}]: got {}, expected {}", self.rule, self.witness, self.got, self.expected)
    }
}

/// Checks the four type-A rules with the geometric constants on every
/// standard basis element of each level `1..=rank` of the tower.
pub fn check_type_a_rules(tr: &MarkovTrace) -> Result<std::result::Result<usize, RuleFailure>> {
    let g = tr.group().clone();
    let one = HeckeElement::one(&g);
    let empty = tr.trace_at_level(0, &one)?;
    if empty != RatFn::one() {
        return Ok(Err(RuleFailure {
            rule: "Tr_0(1) = 1".into(),
            witness: "e".into(),
            got: empty.to_string(),
            expected: "1".into(),
        }));
    }
    let z = MarkovParams::geometric().z();
    let stab = RatFn::from_poly(-BiLaurent::t());
    let inv = RatFn::from_poly(BiLaurent::monomial(1, -1, 0));
    let mut checked = 1;
    for n in 1..=tr.rank() {
        for w in 0..g.len() {
            if !g.word(w).iter().all(|&s| s < n) {
                continue;
            }
            let a = HeckeElement::basis(&g, w);
            let base = tr.trace_at_level(n - 1, &a)?;
            let rules: [(&str, HeckeElement, &RatFn); 3] = [
                ("Tr(ι(a)) = z·Tr(a)", a.clone(), &z),
                ("Tr(σ_n ι(a)) = -t·Tr(a)", a.left_mul_gen(n), &stab),
                ("Tr(σ_n^-1 ι(a)) = v^-1·Tr(a)", &a.left_mul_gen(n) - &a.scale(&BiLaurent::v_minus_vinv()), &inv),
            ];
            for (name, h, factor) in rules {
                let got = tr.trace_at_level(n, &h)?;
                let expected = factor * &base;
                if got != expected {
                    return Ok(Err(RuleFailure {
                        rule: format!("{name} (n = {n})"),
                        witness: crate::coxeter::format_word(g.word(w)),
                        got: got.to_string(),
                        expected: expected.to_string(),
                    }));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(checked))
}

/// Re-verifies, by direct multiplication, the tower rules of a solved table
/// against its lower-rank table: `Tr(ι(a)) = z·Tr(a)`, `Tr(σ_n ι(a)) = -t·Tr(a)`
/// (where it applies), `Tr(σ_n^{-1} ι(a)) = v^{-1}·Tr(a)` and, for the special
/// element `T` or `U`, `Tr(T ι(a)) = y·Tr(a)`. Returns the number of identities checked.
pub fn check_tower_rules(table: &TraceTable) -> Result<std::result::Result<usize, RuleFailure>> {
    let ct = table.cartan_type();
    let g = table.group().clone();
    let lower = match ct.parabolic() {
        Some(p) => Some(solve_trace(p, table.y())?),
        None => None,
    };
    let lower_words: Vec<Vec<usize>> = match &lower {
        Some(t) => (0..t.group().len()).map(|w| t.group().word(w).to_vec()).collect(),
        None => vec![Vec::new()],
    };
    let n = ct.rank;
    let z = MarkovParams::geometric().z();
    let stab = RatFn::from_poly(-BiLaurent::t());
    let inv = RatFn::from_poly(BiLaurent::monomial(1, -1, 0));
    let y = RatFn::from_poly(table.y().clone());
    let special = match special_word(ct) {
        Some(word) => Some(crate::hecke::eval_braid(&g, &word)?),
        None => None,
    };
    let stabilizes = !(ct.family == Family::B && n == 1);
    let mut checked = 0;
    for (i, word) in lower_words.iter().enumerate() {
        let base = match &lower {
            Some(t) => t.value(i),
            None => RatFn::one(),
        };
        let a = HeckeElement::from_word(&g, word)?;
        let mut rules: Vec<(String, HeckeElement, &RatFn)> = vec![("Tr(ι(a)) = z·Tr(a)".into(), a.clone(), &z)];
        if stabilizes {
            rules.push(("Tr(σ_n ι(a)) = -t·Tr(a)".into(), a.left_mul_gen(n), &stab));
            rules.push((
                "Tr(σ_n^-1 ι(a)) = v^-1·Tr(a)".into(),
                &a.left_mul_gen(n) - &a.scale(&BiLaurent::v_minus_vinv()),
                &inv,
            ));
        }
        if let Some(sp) = &special {
            rules.push(("Tr(T ι(a)) = y·Tr(a)".into(), sp * &a, &y));
        }
        for (name, h, factor) in rules {
            let got = table.evaluate(&h)?;
            let expected = factor * &base;
            if got != expected {
                return Ok(Err(RuleFailure {
                    rule: format!("{name} ({ct})"),
                    witness: crate::coxeter::format_word(word),
                    got: got.to_string(),
                    expected: expected.to_string(),
                }));
            }
            checked += 1;
        }
    }
    Ok(Ok(checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::eval_braid;

    fn a(rank: usize) -> Arc<WeylGroup> {
        WeylGroup::shared(CartanType::a(rank)).unwrap()
    }

    #[test]
    fn rank_one_values() {
        let g = a(1);
        let one = HeckeElement::one(&g);
        assert_eq!(ocneanu_trace(1, &one).unwrap(), RatFn::z());
        let s = HeckeElement::basis(&g, 1);
        assert_eq!(ocneanu_trace(1, &s).unwrap(), RatFn::from_poly(-BiLaurent::t()));
        assert_eq!(ocneanu_trace(1, &s).unwrap().to_string(), "-t");
    }

    #[test]
    fn inverse_generator_gives_v_inverse() {
        let g = a(1);
        let h = eval_braid(&g, &[-1]).unwrap();
        assert_eq!(ocneanu_trace(1, &h).unwrap(), RatFn::from_poly(BiLaurent::monomial(1, -1, 0)));
    }

    #[test]
    fn rank_two_coxeter_element() {
        let g = a(2);
        let h = HeckeElement::from_word(&g, &[1, 2]).unwrap();
        let t2 = RatFn::from_poly(BiLaurent::monomial(1, 0, 2));
        assert_eq!(ocneanu_trace(2, &h).unwrap(), t2);
        let h = HeckeElement::from_word(&g, &[2, 1]).unwrap();
        assert_eq!(ocneanu_trace(2, &h).unwrap(), t2);
    }

    #[test]
    fn identity_is_power_of_z() {
        for n in 1..=4 {
            let one = HeckeElement::one(&a(n));
            let tr = ocneanu_trace(n, &one).unwrap();
            let want = (0..n).fold(RatFn::one(), |acc, _| &acc * &RatFn::z());
            assert_eq!(tr, want);
        }
    }

    #[test]
    fn type_a_rules_hold_through_rank_four() {
        let tr = MarkovTrace::new(4, MarkovParams::geometric()).unwrap();
        let checked = check_type_a_rules(&tr).unwrap().unwrap();
        assert_eq!(checked, 1 + 3 * (1 + 2 + 6 + 24));
    }

    #[test]
    fn wrong_inverse_rule_is_caught() {
        let params = MarkovParams { stab: -BiLaurent::t(), inverse: BiLaurent::v() };
        let tr = MarkovTrace::new(2, params).unwrap();
        let failure = check_type_a_rules(&tr).unwrap().unwrap_err();
        assert_eq!(failure.witness, "e");
    }

    #[test]
    fn hochschild_series_of_a_generator() {
        let mut table = KLTable::new(CartanType::a(1)).unwrap();
        let f = hochschild_series(&mut table, 1).unwrap();
        assert_eq!(f.to_string(), "(v^-1 + v^2 t)/(1 - v^2)");
    }

    #[test]
    fn hochschild_series_of_coxeter_element_in_a2() {
        let mut table = KLTable::new(CartanType::a(2)).unwrap();
        let w = table.group().index_of_word(&[1, 2]).unwrap();
        let f = hochschild_series(&mut table, w).unwrap();
        // v^-2 (1 + v^3 t)^2 / (1 - q)^2
        let num = BiLaurent::from_terms([(1, 0, 0), (1, 3, 1)]).pow(2).shift(-2, 0);
        assert_eq!(f, RatFn::over_one_minus_q(num, 2));
        // (t - v^-1 z)^2
        let t = RatFn::from_poly(BiLaurent::t());
        let vz = RatFn::z().scale(&BiLaurent::monomial(1, -1, 0));
        let d = &t - &vz;
        assert_eq!(f, &d * &d);
    }

    #[test]
    fn positivity_examples() {
        let mut table = KLTable::new(CartanType::a(1)).unwrap();
        let f = hochschild_series(&mut table, 1).unwrap();
        assert!(positivity_report(&f, 20, 1).unwrap().pass);
        let geo = RatFn::new(BiLaurent::one(), BiLaurent::one_minus_q()).unwrap();
        assert!(positivity_report(&geo, 20, 1).unwrap().pass);
        let r = positivity_report(&RatFn::from_poly(-BiLaurent::t()), 20, 1).unwrap();
        assert!(!r.pass);
        let fail = r.failure.unwrap();
        assert_eq!(fail.order, 0);
        assert_eq!(fail.coeff, -BiLaurent::t());
    }

    #[test]
    fn b_tower_rules_at_y_minus_t() {
        for n in 1..=3 {
            let t = solve_trace(CartanType::b(n), &-BiLaurent::t()).unwrap();
            assert!(check_tower_rules(&t).unwrap().is_ok(), "B{n}");
        }
        let t = solve_trace(CartanType::d(3), &-BiLaurent::t()).unwrap();
        assert!(check_tower_rules(&t).unwrap().is_ok());
    }

    #[test]
    fn b2_special_element_value() {
        let g = WeylGroup::shared(CartanType::b(2)).unwrap();
        let t1 = eval_braid(&g, &[2, 1, -2]).unwrap();
        let want = RatFn::z().scale(&-BiLaurent::t());
        assert_eq!(geometric_trace(&t1).unwrap(), want);
    }

    #[test]
    fn type_mismatch_is_reported() {
        let h = HeckeElement::one(&WeylGroup::shared(CartanType::b(2)).unwrap());
        assert!(ocneanu_trace(2, &h).is_err());
    }
}
