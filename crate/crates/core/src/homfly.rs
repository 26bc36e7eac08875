//! Braid closures: the Markov-normalized type-A trace as a HOMFLYPT
//! invariant, with a skein-relation check and a Markov-move suite.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{format_terms, BiLaurent, RatFn};
use crate::error::{Error, Result};
use crate::hecke::eval_braid;
use crate::trace::MarkovTrace;

/// Largest strand count accepted by [`homfly_invariant`].
pub const MAX_STRANDS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Parse("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::Parse(format!("generator {l} out of range for {strands} strands")));
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum()).sum()
    }

    /// Image in `S_n` as a list `p[i]` (0-based), braid letters applied left to right.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            p.swap(i - 1, i);
        }
        p
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        let p = self.permutation();
        let mut seen = vec![false; p.len()];
        let mut count = 0;
        for i in 0..p.len() {
            if !seen[i] {
                count += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = p[j];
                }
            }
        }
        count
    }

    /// `self` followed by `other` on the same strands.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let strands = self.strands.max(other.strands);
        Self::new(strands, self.letters.iter().chain(&other.letters).copied().collect())
    }

    pub fn inverse(&self) -> Self {
        Self { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// The same word on one more strand, followed by `σ_n^{±1}`.
    pub fn stabilized(&self, positive: bool) -> Self {
        let n = self.strands as i64;
        let mut letters = self.letters.clone();
        letters.push(if positive { n } else { -n });
        Self { strands: self.strands + 1, letters }
    }

    pub fn with_inserted(&self, position: usize, letter: Option<i64>) -> Result<Self> {
        if position > self.letters.len() {
            return Err(Error::Parse(format!("position {position} beyond word length {}", self.letters.len())));
        }
        let mut letters = self.letters.clone();
        if let Some(l) = letter {
            letters.insert(position, l);
        }
        Self::new(self.strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}] on {} strands", words.join(" "), self.strands)
    }
}

/// Whitespace- or comma-separated nonzero integers.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let l: i64 = tok.parse().map_err(|_| Error::Parse(format!("braid token {tok:?} is not an integer")))?;
        if l == 0 {
            return Err(Error::Parse(format!("braid token {tok:?}: generators are nonzero")));
        }
        if l.unsigned_abs() as usize >= strands.max(1) {
            return Err(Error::Parse(format!("braid token {tok:?} out of range for {strands} strands")));
        }
        letters.push(l);
    }
    BraidWord::new(strands, letters)
}

/// Value of the invariant, kept as a fraction in `v` and `a` (stored in the
/// `v` and `t` slots of [`RatFn`]).
#[derive(Clone, Debug)]
pub struct LinkPolynomial {
    pub strands: usize,
    pub writhe: i64,
    pub components: usize,
    /// `v^{n-1}·Tr_{n-1}(b)` before the change of variables.
    pub trace: RatFn,
    pub value: RatFn,
}

impl PartialEq for LinkPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

fn v_to_z(f: &BiLaurent) -> Option<BiLaurent> {
    // f is a polynomial in v with a fixed a-degree folded into the second slot
    let mut rest = f.clone();
    let mut out = BiLaurent::zero();
    let z = BiLaurent::v_minus_vinv();
    loop {
        let Some(((d, e), c)) = rest.terms().next_back().map(|(&e, c)| (e, c.clone())) else {
            break;
        };
        if d < 0 {
            return None;
        }
        rest -= &(&z.pow(d as u32).shift(0, e) * &BiLaurent::from_bigint(c.clone()));
        out.add_term(c, (d, e));
    }
    Some(out)
}

impl LinkPolynomial {
    pub fn is_one(&self) -> bool {
        self.value == RatFn::one()
    }

    /// Laurent polynomial in `(z, a)` with `z = v - v^{-1}`, exponents stored
    /// as `(e_z, e_a)`.
    pub fn az(&self) -> Result<BiLaurent> {
        let links = self.components as u32 - 1;
        let scaled = self.value.num() * &BiLaurent::v_minus_vinv().pow(links);
        let poly = scaled
            .exact_div(self.value.den())
            .map_err(|_| Error::Data("invariant is not a Laurent polynomial after clearing z".into()))?;
        // group by a-degree; terms are (v, a) so sort by a
        let mut out = BiLaurent::zero();
        let mut a_degrees: Vec<i32> = poly.terms().map(|(&(_, a), _)| a).collect();
        a_degrees.sort_unstable();
        a_degrees.dedup();
        for a in a_degrees {
            let slice = BiLaurent::from_big_terms(
                poly.terms().filter(|(e, _)| e.1 == a).map(|(&(v, _), c)| (c.clone(), (v, 0))),
            );
            let conv =
                v_to_z(&slice).ok_or_else(|| Error::Data("coefficient is not a polynomial in v - v^-1".into()))?;
            for (&(zexp, _), c) in conv.terms() {
                out.add_term(c.clone(), (zexp - links as i32, a));
            }
        }
        Ok(out)
    }

    /// `2a^-2 + a^-2 z^2 - a^-4`: descending in `a`, ascending in `z`.
    pub fn display_az(&self) -> Result<String> {
        let p = self.az()?;
        let mut terms: Vec<((i32, i32), BigInt)> = p.terms().map(|(&(z, a), c)| ((a, z), c.clone())).collect();
        terms.sort_by_key(|((a, z), _)| (-a, *z));
        Ok(format_terms(&terms, &["a", "z"]))
    }

    /// `a^{-(e+n-1)}` times `v^{n-1}·Tr` in `v` and `t`.
    pub fn display_vt(&self) -> String {
        let k = -(self.writhe + self.strands as i64 - 1);
        let tr = self.trace.normalized();
        match k {
            0 => tr.to_string(),
            1 => format!("a ({tr})"),
            _ => format!("a^{k} ({tr})"),
        }
    }
}

/// `I(b) = a^{-(e+n-1)}·v^{n-1}·Tr_{n-1}(b)` with `t ↦ -a²v^{-1}`.
pub fn homfly_invariant(b: &BraidWord) -> Result<LinkPolynomial> {
    let n = b.strands();
    if n > MAX_STRANDS {
        return Err(Error::GroupTooLarge {
            name: format!("braids on {n} strands"),
            order: n as u128,
            bound: MAX_STRANDS,
        });
    }
    let raw = if n == 1 {
        RatFn::one()
    } else {
        let tr = MarkovTrace::shared(n - 1)?;
        let h = eval_braid(tr.group(), b.letters())?;
        tr.trace(&h)?
    };
    let trace = raw.scale(&BiLaurent::monomial(1, n as i32 - 1, 0));
    // t^j ↦ (-1)^j a^{2j} v^{-j}, with a in the second slot
    let substituted = trace.map_monomials(|ev, et| (et % 2 != 0, ev - et, 2 * et));
    let shift = -(b.writhe() + n as i64 - 1) as i32;
    let value = substituted.scale(&BiLaurent::monomial(1, 0, shift));
    Ok(LinkPolynomial { strands: n, writhe: b.writhe(), components: b.components(), trace, value })
}

/// `a·I(L₊) - a^{-1}·I(L₋) = z·I(L₀)` for `σ_i^{±1}` inserted at `position`.
pub fn skein_check(b: &BraidWord, position: usize, generator: usize) -> Result<bool> {
    let g = generator as i64;
    let plus = homfly_invariant(&b.with_inserted(position, Some(g))?)?;
    let minus = homfly_invariant(&b.with_inserted(position, Some(-g))?)?;
    let zero = homfly_invariant(b)?;
    let lhs = &plus.value.scale(&BiLaurent::monomial(1, 0, 1)) - &minus.value.scale(&BiLaurent::monomial(1, 0, -1));
    Ok(lhs == zero.value.scale(&BiLaurent::v_minus_vinv()))
}

pub fn random_braid(rng: &mut impl Rng, strands: usize, max_len: usize) -> BraidWord {
    let len = if strands < 2 { 0 } else { rng.gen_range(0..=max_len) };
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands as i64);
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord { strands, letters }
}

#[derive(Clone, Debug, Default)]
pub struct MarkovReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl MarkovReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Conjugation, `I(αβ) = I(βα)`, and both stabilizations, over `trials`
/// random conjugators.
pub fn markov_invariance_suite(b: &BraidWord, trials: usize, seed: u64) -> Result<MarkovReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = homfly_invariant(b)?;
    let mut report = MarkovReport::default();
    let expect = |report: &mut MarkovReport, what: String, got: &LinkPolynomial| {
        report.checked += 1;
        if *got != base {
            report.failures.push(format!("{what}: {} ≠ {}", got.value, base.value));
        }
    };
    for _ in 0..trials {
        let alpha = random_braid(&mut rng, b.strands(), 4);
        let conj = alpha.concat(b)?.concat(&alpha.inverse())?;
        expect(&mut report, format!("conjugate {conj}"), &homfly_invariant(&conj)?);
        let ab = homfly_invariant(&alpha.concat(b)?)?;
        let ba = homfly_invariant(&b.concat(&alpha)?)?;
        report.checked += 1;
        if ab != ba {
            report.failures.push(format!("I(αβ) ≠ I(βα) for α = {alpha}, β = {b}"));
        }
    }
    if b.strands() < MAX_STRANDS {
        for positive in [true, false] {
            let s = b.stabilized(positive);
            expect(&mut report, format!("stabilization {s}"), &homfly_invariant(&s)?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_braid("1 1 1", 2).unwrap();
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.components(), 1);
        let f = parse_braid("1 -2 1 -2", 3).unwrap();
        assert_eq!(f.writhe(), 0);
        assert_eq!(f.components(), 1);
        let err = parse_braid("3", 2).unwrap_err().to_string();
        assert!(err.contains("\"3\""), "{err}");
        assert!(parse_braid("1 0", 3).is_err());
        assert!(parse_braid("x", 3).is_err());
    }

    #[test]
    fn unknot_presentations() {
        for (w, n) in [("", 1), ("1", 2), ("-1", 2), ("1 2", 3), ("-1 2", 3), ("1 -2", 3), ("-1 -2", 3)] {
            assert!(homfly_invariant(&parse_braid(w, n).unwrap()).unwrap().is_one(), "{w} on {n}");
        }
    }

    #[test]
    fn trefoil() {
        let i = homfly_invariant(&parse_braid("1 1 1", 2).unwrap()).unwrap();
        assert_eq!(i.display_az().unwrap(), "2a^-2 + a^-2 z^2 - a^-4");
        // a^-4 v (-t v^2 - t v^-2 - v^-1)
        let inner = BiLaurent::from_terms([(-1, 2, 1), (-1, -2, 1), (-1, -1, 0)]).shift(1, 0);
        assert_eq!(i.trace, RatFn::from_poly(inner));
    }

    #[test]
    fn two_component_unlink() {
        // I = (a - a^-1)/z
        let i = homfly_invariant(&parse_braid("", 2).unwrap()).unwrap();
        assert_eq!(i.components, 2);
        assert_eq!(i.display_az().unwrap(), "a z^-1 - a^-1 z^-1");
    }

    #[test]
    fn skein_examples() {
        assert!(skein_check(&parse_braid("", 2).unwrap(), 0, 1).unwrap());
        assert!(skein_check(&parse_braid("1 1", 2).unwrap(), 2, 1).unwrap());
        assert!(skein_check(&parse_braid("1 -2 1", 3).unwrap(), 1, 2).unwrap());
    }

    #[test]
    fn figure_eight_is_amphichiral() {
        let f = homfly_invariant(&parse_braid("1 -2 1 -2", 3).unwrap()).unwrap();
        let p = f.az().unwrap();
        let mirrored = BiLaurent::from_big_terms(p.terms().map(|(&(z, a), c)| (c.clone(), (z, -a))));
        assert_eq!(p, mirrored);
    }

    #[test]
    fn markov_suite_on_trefoil() {
        let r = markov_invariance_suite(&parse_braid("1 1 1", 2).unwrap(), 5, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 12);
    }

    #[test]
    fn too_many_strands() {
        assert!(homfly_invariant(&parse_braid("1", 6).unwrap()).is_err());
    }
}
