//! The built-in acceptance suite behind `mtk selftest`.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charexp::{character_table, gomi_trace, molien_all, molien_dimension_sum, partitions, seminormal_reps};
use crate::coeff::{series_expand, BiLaurent, RatFn};
use crate::coxeter::{CartanType, WeylGroup};
use crate::error::Result;
use crate::hecke::{HeckeElement, KLTable};
use crate::homfly::{homfly_invariant, markov_invariance_suite, parse_braid, random_braid, skein_check};
use crate::oracle::{kl_basis_by_bar_involution, molien_by_expansion};
use crate::trace::{
    check_tower_rules, check_type_a_rules, geometric_trace, hochschild_series, ocneanu_trace, positivity_report,
    solve_trace, MarkovParams, MarkovTrace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub level: Level,
    /// KL cache to validate in the KL criterion instead of a fresh table.
    pub kl_cache: Option<PathBuf>,
    /// Stabilization constants of the type-A trace under test.
    pub params: MarkovParams,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { level: Level::Quick, kl_cache: None, params: MarkovParams::geometric(), seed: 2024 }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2}. {} ({:.1}s): {}", self.id, self.title, self.seconds, self.detail)
    }
}

pub const CRITERIA: [&str; 11] = [
    "Markov rules of the type-A trace",
    "trace property Tr(ab) = Tr(ba)",
    "type-A recursion agrees with the solver",
    "character formula agrees with the trace",
    "type-B tower rules at y = -t",
    "positivity of Tr(C'_w)",
    "specific trace values",
    "Molien series",
    "seminormal representation relations",
    "KL basis against the bar-involution oracle",
    "knot invariants",
];

type Outcome = Result<std::result::Result<String, String>>;

pub fn run_criterion(id: usize, opts: &SelftestOptions) -> CriterionReport {
    let start = Instant::now();
    let full = opts.level == Level::Full;
    let outcome = match id {
        1 => markov_rules(opts, full),
        2 => trace_property(opts, full),
        3 => recursion_vs_solver(full),
        4 => character_formula(full),
        5 => type_b_rules(full),
        6 => positivity(full),
        7 => specific_values(),
        8 => molien_suite(full),
        9 => seminormal_relations(full),
        10 => kl_oracle(opts, full),
        11 => knot_suite(opts, full),
        _ => Ok(Err(format!("no criterion {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport {
        id,
        title: CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(opts: &SelftestOptions) -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, opts)).collect()
}

fn markov_rules(opts: &SelftestOptions, full: bool) -> Outcome {
    let rank = if full { 4 } else { 3 };
    let tr = MarkovTrace::new(rank, opts.params.clone())?;
    Ok(match check_type_a_rules(&tr)? {
        Ok(n) => Ok(format!("{n} identities through H(A{})", rank - 1)),
        Err(f) => Err(f.to_string()),
    })
}

fn random_element(rng: &mut ChaCha8Rng, group: &std::sync::Arc<WeylGroup>) -> HeckeElement {
    let mut h = HeckeElement::zero(group);
    for _ in 0..rng.gen_range(1..=2) {
        let w = rng.gen_range(0..group.len());
        let c =
            BiLaurent::monomial(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(-2..=2), rng.gen_range(0..=1));
        h = &h + &HeckeElement::monomial(group, w, c);
    }
    h
}

fn trace_property(opts: &SelftestOptions, full: bool) -> Outcome {
    let pairs = if full { 200 } else { 20 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let types = [
        CartanType::a(1),
        CartanType::a(2),
        CartanType::a(3),
        CartanType::b(1),
        CartanType::b(2),
        CartanType::b(3),
        CartanType::d(2),
        CartanType::d(3),
    ];
    for ct in types {
        let g = WeylGroup::shared(ct)?;
        for _ in 0..pairs {
            let (a, b) = (random_element(&mut rng, &g), random_element(&mut rng, &g));
            let (ab, ba) = (geometric_trace(&(&a * &b))?, geometric_trace(&(&b * &a))?);
            if ab != ba {
                return Ok(Err(format!("{ct}: Tr(ab) = {ab} but Tr(ba) = {ba} for a = {a}, b = {b}")));
            }
        }
    }
    Ok(Ok(format!("{pairs} random pairs in each of {} types", types.len())))
}

fn recursion_vs_solver(full: bool) -> Outcome {
    let ranks: &[usize] = if full { &[2, 3] } else { &[2] };
    let mut count = 0;
    for &n in ranks {
        let table = solve_trace(CartanType::a(n), &-BiLaurent::t())?;
        let g = table.group().clone();
        for w in 0..g.len() {
            let h = HeckeElement::basis(&g, w);
            let (rec, sol) = (ocneanu_trace(n, &h)?, table.value(w));
            if rec != sol {
                return Ok(Err(format!(
                    "A{n} at [{}]: recursion {rec}, solver {sol}",
                    crate::coxeter::format_word(g.word(w))
                )));
            }
            count += 1;
        }
    }
    Ok(Ok(format!("{count} basis elements")))
}

fn character_formula(full: bool) -> Outcome {
    let n = if full { 3 } else { 2 };
    let ct = CartanType::a(n);
    let mut kl = KLTable::new(ct)?;
    let g = kl.group().clone();
    for w in 0..g.len() {
        let c = kl.basis_element(w).clone();
        for (what, h) in [("σ", HeckeElement::basis(&g, w)), ("C'", c)] {
            let (lhs, rhs) = (gomi_trace(&h)?, geometric_trace(&h)?);
            if lhs != rhs {
                return Ok(Err(format!(
                    "{ct} {what}_[{}]: formula {lhs}, trace {rhs}",
                    crate::coxeter::format_word(g.word(w))
                )));
            }
        }
    }
    Ok(Ok(format!("{} standard and {} KL basis elements of H({ct})", g.len(), g.len())))
}

fn type_b_rules(full: bool) -> Outcome {
    let ranks: &[usize] = if full { &[2, 3] } else { &[2] };
    let mut total = 0;
    for &n in ranks {
        let table = solve_trace(CartanType::b(n), &-BiLaurent::t())?;
        match check_tower_rules(&table)? {
            Ok(k) => total += k,
            Err(f) => return Ok(Err(f.to_string())),
        }
    }
    Ok(Ok(format!("{total} identities")))
}

fn positivity(full: bool) -> Outcome {
    let types: &[CartanType] = if full {
        &[CartanType::a(2), CartanType::a(3), CartanType::b(2)]
    } else {
        &[CartanType::a(2), CartanType::b(2)]
    };
    let mut count = 0;
    for &ct in types {
        let mut kl = KLTable::new(ct)?;
        for w in 0..kl.group().len() {
            let f = hochschild_series(&mut kl, w)?;
            let report = positivity_report(&f, 20, ct.rank)?;
            if let Some(fail) = report.failure {
                let word = crate::coxeter::format_word(kl.group().word(w));
                return Ok(Err(format!("{ct} w = [{word}]: coefficient of v^{} is {}", fail.order, fail.coeff)));
            }
            count += 1;
        }
    }
    Ok(Ok(format!("{count} elements through v^20")))
}

fn specific_values() -> Outcome {
    let mut kl1 = KLTable::new(CartanType::a(1))?;
    let got = hochschild_series(&mut kl1, 1)?;
    let want = RatFn::new(BiLaurent::from_terms([(1, -1, 0), (1, 2, 1)]), BiLaurent::one_minus_q())?;
    if got != want {
        return Ok(Err(format!("Tr(C'_s) = {got}, expected {want}")));
    }
    let g1 = kl1.group().clone();
    let s = ocneanu_trace(1, &HeckeElement::basis(&g1, 1))?;
    if s != RatFn::from_poly(-BiLaurent::t()) {
        return Ok(Err(format!("Tr(σ1) = {s}, expected -t")));
    }
    let mut kl2 = KLTable::new(CartanType::a(2))?;
    let w = kl2.group().index_of_word(&[1, 2])?;
    let got = hochschild_series(&mut kl2, w)?;
    let num = BiLaurent::from_terms([(1, 0, 0), (1, 3, 1)]).pow(2).shift(-2, 0);
    let want = RatFn::over_one_minus_q(num, 2);
    if got != want {
        return Ok(Err(format!("Tr(C'_12) = {got}, expected {want}")));
    }
    Ok(Ok("Tr(C'_s), Tr(σ1), Tr(C'_12)".into()))
}

fn molien_suite(full: bool) -> Outcome {
    let expansion: &[CartanType] = if full {
        &[CartanType::a(1), CartanType::a(2), CartanType::b(2)]
    } else {
        &[CartanType::a(1), CartanType::a(2)]
    };
    for &ct in expansion {
        for m in molien_all(ct)?.iter() {
            let direct = molien_by_expansion(ct, &m.label, 10)?;
            let closed = series_expand(&m.value, 10)?.to_poly();
            if direct != closed {
                return Ok(Err(format!("{ct} {}: closed form {closed}, expansion {direct}", m.label)));
            }
        }
    }
    for ct in [CartanType::a(1), CartanType::a(2), CartanType::a(3), CartanType::b(2)] {
        let sum = molien_dimension_sum(ct)?;
        let z = (0..ct.rank).fold(RatFn::one(), |acc, _| &acc * &RatFn::z());
        let tr = geometric_trace(&HeckeElement::one(&WeylGroup::shared(ct)?))?;
        if sum != z || tr != z {
            return Ok(Err(format!("{ct}: Σ dim·M = {sum}, Tr(1) = {tr}, expected {z}")));
        }
    }
    Ok(Ok(format!("expansion through v^10 for {} types; dimension sums for 4", expansion.len())))
}

fn seminormal_relations(full: bool) -> Outcome {
    let max = if full { 5 } else { 4 };
    let mut reps = 0;
    for size in 2..=max {
        let ct = CartanType::a(size - 1);
        let all = seminormal_reps(ct)?;
        for rep in &all {
            if let Err(e) = rep.check_relations() {
                return Ok(Err(e));
            }
        }
        let total: u128 = all.iter().map(|r| (r.dim() * r.dim()) as u128).sum();
        if total != ct.order() || all.len() != partitions(size).len() {
            return Ok(Err(format!("{ct}: Σ dim² = {total}, expected {}", ct.order())));
        }
        reps += all.len();
    }
    let b = seminormal_reps(CartanType::b(3))?;
    for rep in &b {
        if let Err(e) = rep.check_relations() {
            return Ok(Err(e));
        }
    }
    let degrees_ok = character_table(CartanType::b(3))?.is_orthonormal();
    if !degrees_ok {
        return Ok(Err("B3 characters are not orthonormal".into()));
    }
    Ok(Ok(format!("{reps} type-A representations with |λ| ≤ {max}, {} of B3", b.len())))
}

fn kl_oracle(opts: &SelftestOptions, full: bool) -> Outcome {
    let mut table = match &opts.kl_cache {
        Some(path) => match KLTable::load(path) {
            Ok(t) => t,
            Err(e) => return Ok(Err(format!("KL cache {} failed validation: {e}", path.display()))),
        },
        None => {
            let ct = CartanType::a(if full { 3 } else { 2 });
            match KLTable::default_cache_path(ct) {
                Some(path) => match KLTable::load_or_build(ct, &path) {
                    Ok(t) => t,
                    Err(e) => return Ok(Err(format!("KL cache {} failed validation: {e}", path.display()))),
                },
                None => KLTable::new(ct)?,
            }
        }
    };
    let g = table.group().clone();
    let oracle = kl_basis_by_bar_involution(&g);
    for (w, c) in oracle.iter().enumerate() {
        if table.basis_element(w) != c {
            let word = crate::coxeter::format_word(g.word(w));
            return Ok(Err(format!("C'_[{word}] differs from the bar-involution oracle")));
        }
    }
    let mut a3 = KLTable::new(CartanType::a(3))?;
    let ga = a3.group().clone();
    let w = ga.index_of_word(&[2, 1, 3, 2])?;
    let p = a3.polynomial(ga.identity(), w);
    if p.0 != vec![1, 1] {
        return Ok(Err(format!("P_(e, 2132) = {p}, expected 1 + q")));
    }
    Ok(Ok(format!("{} pairs in {}; P_(e, 2132) = 1 + q", g.len() * g.len(), g.cartan_type())))
}

fn knot_suite(opts: &SelftestOptions, full: bool) -> Outcome {
    for (w, n) in [("", 1), ("1", 2), ("-1", 2), ("1 2", 3), ("-1 2", 3), ("1 -2 -3", 4)] {
        let i = homfly_invariant(&parse_braid(w, n)?)?;
        if !i.is_one() {
            return Ok(Err(format!("unknot [{w}] on {n} strands gives {}", i.value)));
        }
    }
    let trefoil = homfly_invariant(&parse_braid("1 1 1", 2)?)?.display_az()?;
    if trefoil != "2a^-2 + a^-2 z^2 - a^-4" {
        return Ok(Err(format!("trefoil gives {trefoil}")));
    }
    let count = if full { 100 } else { 20 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6b6e6f74);
    for k in 0..count {
        let n = rng.gen_range(2..=4);
        let b = random_braid(&mut rng, n, 8);
        let pos = rng.gen_range(0..=b.letters().len());
        let gen = rng.gen_range(1..n);
        if !skein_check(&b, pos, gen)? {
            return Ok(Err(format!("skein identity fails for {b} at position {pos}, generator {gen}")));
        }
        let report = markov_invariance_suite(&b, 1, opts.seed.wrapping_add(k as u64))?;
        if let Some(f) = report.failures.first() {
            return Ok(Err(f.clone()));
        }
    }
    Ok(Ok(format!("unknots, trefoil, {count} random braids")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutant_inverse_rule_fails_with_witness() {
        let opts = SelftestOptions {
            params: MarkovParams { stab: -BiLaurent::t(), inverse: BiLaurent::v() },
            ..Default::default()
        };
        let r = run_criterion(1, &opts);
        assert!(!r.passed);
        assert!(r.detail.contains("a = [e]"), "{}", r.detail);
    }

    #[test]
    fn tampered_cache_is_reported() {
        let dir = std::env::temp_dir().join(format!("mtk-selftest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("kl-A2.txt");
        let mut t = KLTable::new(CartanType::a(2)).unwrap();
        t.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap().replacen("| 1", "| 2", 1);
        std::fs::write(&path, text).unwrap();
        let opts = SelftestOptions { kl_cache: Some(path), ..Default::default() };
        let r = run_criterion(10, &opts);
        assert!(!r.passed);
        assert!(r.detail.contains("failed validation"), "{}", r.detail);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_criterion() {
        assert!(!run_criterion(12, &SelftestOptions::default()).passed);
    }
}
