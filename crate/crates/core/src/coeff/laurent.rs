//! Sparse bivariate Laurent polynomials over the integers.
//!
//! The two variables are `v` (a square root of `q`) and `t`. Every monomial
//! `c * v^i * t^j` is stored under the key `(i, j)`; zero coefficients are
//! never stored, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent pair `(e_v, e_t)`.
pub type Exp = (i32, i32);

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BiLaurent {
    terms: BTreeMap<Exp, BigInt>,
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::big_monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, ev: i32, et: i32) -> Self {
        Self::big_monomial(BigInt::from(c), ev, et)
    }

    pub fn big_monomial(c: BigInt, ev: i32, et: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((ev, et), c);
        }
        Self { terms }
    }

    /// The variable `v = q^{1/2}`.
    pub fn v() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `q = v^2`.
    pub fn q() -> Self {
        Self::monomial(1, 2, 0)
    }

    /// `v - v^{-1}`, the coefficient appearing in the quadratic relation.
    pub fn v_minus_vinv() -> Self {
        Self::from_terms([(1, 1, 0), (-1, -1, 0)])
    }

    /// `1 - q`.
    pub fn one_minus_q() -> Self {
        Self::from_terms([(1, 0, 0), (-1, 2, 0)])
    }

    /// Builds a polynomial from `(coeff, e_v, e_t)` triples, summing repeats.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, i32, i32)>,
    {
        let mut p = Self::zero();
        for (c, ev, et) in iter {
            p.add_term(BigInt::from(c), (ev, et));
        }
        p
    }

    pub fn from_big_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (BigInt, Exp)>,
    {
        let mut p = Self::zero();
        for (c, e) in iter {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: BigInt, e: Exp) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// A unit of the Laurent ring: `±v^i t^j`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, ev: i32, et: i32) -> BigInt {
        self.terms.get(&(ev, et)).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic `(e_v, e_t)` order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exp, BigInt)> {
        self.terms.into_iter()
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(Exp, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn min_v(&self) -> Option<i32> {
        self.terms.keys().next().map(|e| e.0)
    }

    pub fn max_v(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|e| e.0)
    }

    pub fn min_t(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.1).min()
    }

    pub fn max_t(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.1).max()
    }

    /// Coefficient of `v^k` as a polynomial in `t` alone (returned with `e_v = 0`).
    pub fn v_coeff(&self, k: i32) -> BiLaurent {
        Self {
            terms: self.terms.range((k, i32::MIN)..=(k, i32::MAX)).map(|(&(_, et), c)| ((0, et), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplies by `c * v^ev * t^et`.
    pub fn mul_monomial(&self, c: &BigInt, ev: i32, et: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&(a, b), x)| ((a + ev, b + et), x * c)).collect() }
    }

    pub fn shift(&self, ev: i32, et: i32) -> Self {
        Self { terms: self.terms.iter().map(|(&(a, b), x)| ((a + ev, b + et), x.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Bar involution `v -> v^{-1}`, `t` fixed.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&(a, b), x)| ((-a, b), x.clone())).collect() }
    }

    /// Replaces each monomial `v^i t^j` by `sign * v^{i'} t^{j'}` given by `f`.
    pub fn map_monomials<F>(&self, f: F) -> Self
    where
        F: Fn(i32, i32) -> (bool, i32, i32),
    {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let (neg, a2, b2) = f(a, b);
            out.add_term(if neg { -c.clone() } else { c.clone() }, (a2, b2));
        }
        out
    }

    /// Gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `c`, failing unless all are divisible.
    pub fn div_integer(&self, c: &BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("{x} by {c}")));
            }
            terms.insert(*e, q);
        }
        Ok(Self { terms })
    }

    /// Exact division in `Z[v^±1, t^±1]`.
    ///
    /// Long division on lexicographically leading terms. The quotient's
    /// exponents are confined to the box spanned by the differences of the
    /// operands' extreme exponents; leaving the box means `other` does not
    /// divide `self`.
    pub fn exact_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if other.len() == 1 {
            let (&(ev, et), c) = other.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (&(a, b), x) in &self.terms {
                let (q, r) = x.div_rem(c);
                if !r.is_zero() {
                    return Err(Error::InexactDivision(format!("{self} by {other}")));
                }
                terms.insert((a - ev, b - et), q);
            }
            return Ok(Self { terms });
        }
        let min_v = self.min_v().unwrap() - other.min_v().unwrap();
        let min_t = self.min_t().unwrap() - other.min_t().unwrap();
        let max_t = self.max_t().unwrap() - other.max_t().unwrap();
        let (lead_e, lead_c) = other.leading().map(|(e, c)| (e, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((ev, et), c)) = rem.leading().map(|(e, c)| (e, c.clone())) {
            let qe = (ev - lead_e.0, et - lead_e.1);
            if qe.0 < min_v || qe.1 < min_t || qe.1 > max_t {
                return Err(Error::InexactDivision(format!("{self} by {other}")));
            }
            let (qc, r) = c.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("{self} by {other}")));
            }
            rem -= &other.mul_monomial(&qc, qe.0, qe.1);
            quot.add_term(qc, qe);
        }
        Ok(quot)
    }

    /// Largest `k` such that `(1 - q)^k` divides `self`, together with the cofactor.
    pub fn strip_one_minus_q(&self) -> (u32, Self) {
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() {
            return (0, cur);
        }
        let f = Self::one_minus_q();
        while let Ok(next) = cur.exact_div(&f) {
            cur = next;
            k += 1;
        }
        (k, cur)
    }

    /// Evaluates at `(v, t)` modulo the prime `p`; `v` and `t` must be nonzero mod `p`.
    pub fn eval_mod(&self, v: u64, t: u64, p: u64) -> u64 {
        let vinv = pow_mod(v, p - 2, p);
        let tinv = pow_mod(t, p - 2, p);
        let pb = BigInt::from(p);
        let mut acc: u64 = 0;
        for (&(a, b), c) in &self.terms {
            let cv = c.mod_floor(&pb).to_u64().unwrap();
            let vp = if a >= 0 { pow_mod(v, a as u64, p) } else { pow_mod(vinv, (-a) as u64, p) };
            let tp = if b >= 0 { pow_mod(t, b as u64, p) } else { pow_mod(tinv, (-b) as u64, p) };
            let term = mul_mod(mul_mod(cv, vp, p), tp, p);
            acc = (acc + term) % p;
        }
        acc
    }

    /// Substitutes `v = 1`, leaving a Laurent polynomial in `t` (stored with `e_v = 0`).
    pub fn at_v_one(&self) -> Self {
        self.map_monomials(|_, b| (false, 0, b))
    }

    /// Formats with the given variable names, in ascending term order.
    pub fn display_with(&self, x: &str, y: &str) -> String {
        let terms: Vec<(Exp, BigInt)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        format_terms(&terms, &[x, y])
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Renders a list of `(exponents, coefficient)` terms as `2a^-2 + a^-2 z^2 - a^-4`.
pub(crate) fn format_terms(terms: &[((i32, i32), BigInt)], vars: &[&str; 2]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&(a, b), c)) in terms.iter().map(|(e, c)| (e, c)).enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut vars_part = Vec::new();
        for (name, e) in [(vars[0], a), (vars[1], b)] {
            match e {
                0 => {}
                1 => vars_part.push(name.to_string()),
                _ => vars_part.push(format!("{name}^{e}")),
            }
        }
        if vars_part.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&vars_part.join(" "));
        }
    }
    out
}

impl fmt::Display for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("v", "t"))
    }
}

impl fmt::Debug for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiLaurent({self})")
    }
}

impl From<i64> for BiLaurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&BiLaurent> for BiLaurent {
    fn add_assign(&mut self, rhs: &BiLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(c.clone(), *e);
        }
    }
}

impl SubAssign<&BiLaurent> for BiLaurent {
    fn sub_assign(&mut self, rhs: &BiLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(-c.clone(), *e);
        }
    }
}

impl Add for &BiLaurent {
    type Output = BiLaurent;
    fn add(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &BiLaurent {
    type Output = BiLaurent;
    fn sub(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &BiLaurent {
    type Output = BiLaurent;
    fn mul(self, rhs: &BiLaurent) -> BiLaurent {
        if self.is_zero() || rhs.is_zero() {
            return BiLaurent::zero();
        }
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (&(a, b), c) = small.terms.iter().next().unwrap();
            return large.mul_monomial(c, a, b);
        }
        let mut acc: std::collections::HashMap<Exp, BigInt> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                *acc.entry((a1 + a2, b1 + b2)).or_default() += c1 * c2;
            }
        }
        BiLaurent { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl Neg for &BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        BiLaurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiLaurent {
            type Output = BiLaurent;
            fn $m(self, rhs: BiLaurent) -> BiLaurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BiLaurent> for BiLaurent {
            type Output = BiLaurent;
            fn $m(self, rhs: &BiLaurent) -> BiLaurent {
                (&self).$m(rhs)
            }
        }
        impl $tr<BiLaurent> for &BiLaurent {
            type Output = BiLaurent;
            fn $m(self, rhs: BiLaurent) -> BiLaurent {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        -&self
    }
}

impl AddAssign for BiLaurent {
    fn add_assign(&mut self, rhs: BiLaurent) {
        *self += &rhs;
    }
}

impl std::iter::Sum for BiLaurent {
    fn sum<I: Iterator<Item = BiLaurent>>(iter: I) -> Self {
        let mut acc = BiLaurent::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}
