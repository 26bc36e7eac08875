//! The Hecke algebra over `Z[v^±1, t]` in the standard basis `σ_w`, with
//! quadratic relation `σ_s^2 = 1 + (v - v^{-1}) σ_s`.

mod kl;

pub use kl::{KLTable, QPoly};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::BiLaurent;
use crate::coxeter::{format_word, CartanType, WeylElement, WeylGroup};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct HeckeElement {
    group: Arc<WeylGroup>,
    terms: BTreeMap<usize, BiLaurent>,
}

impl HeckeElement {
    pub fn zero(group: &Arc<WeylGroup>) -> Self {
        Self { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &Arc<WeylGroup>) -> Self {
        Self::basis(group, group.identity())
    }

    /// `σ_w` for the element with enumeration index `w`.
    pub fn basis(group: &Arc<WeylGroup>, w: usize) -> Self {
        Self::monomial(group, w, BiLaurent::one())
    }

    pub fn monomial(group: &Arc<WeylGroup>, w: usize, c: BiLaurent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { group: group.clone(), terms }
    }

    pub fn from_element(group: &Arc<WeylGroup>, w: &WeylElement) -> Result<Self> {
        let i =
            group.index_of(w).ok_or_else(|| Error::TypeMismatch(w.cartan_type().name(), group.cartan_type().name()))?;
        Ok(Self::basis(group, i))
    }

    pub fn from_word(group: &Arc<WeylGroup>, word: &[usize]) -> Result<Self> {
        Ok(Self::basis(group, group.index_of_word(word)?))
    }

    pub fn generator(group: &Arc<WeylGroup>, s: usize) -> Result<Self> {
        Self::from_word(group, &[s])
    }

    /// `σ_s^{-1} = σ_s - (v - v^{-1})`.
    pub fn generator_inverse(group: &Arc<WeylGroup>, s: usize) -> Result<Self> {
        let mut h = Self::generator(group, s)?;
        h.add_term(group.identity(), -BiLaurent::v_minus_vinv());
        Ok(h)
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn cartan_type(&self) -> CartanType {
        self.group.cartan_type()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: usize) -> BiLaurent {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    /// `(index, coefficient)` pairs in enumeration order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BiLaurent)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: usize, c: BiLaurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, c: &BiLaurent) -> Self {
        let mut out = Self::zero(&self.group);
        for (w, x) in &self.terms {
            out.add_term(*w, x * c);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.group, &other.group) && self.cartan_type() != other.cartan_type() {
            return Err(Error::TypeMismatch(self.cartan_type().name(), other.cartan_type().name()));
        }
        Ok(())
    }

    /// `self * σ_s`.
    pub fn right_mul_gen(&self, s: usize) -> Self {
        let g = &self.group;
        let mut out = Self::zero(g);
        let corr = BiLaurent::v_minus_vinv();
        for (&w, c) in &self.terms {
            let ws = g.right_gen(w, s);
            out.add_term(ws, c.clone());
            if g.length(ws) < g.length(w) {
                out.add_term(w, c * &corr);
            }
        }
        out
    }

    /// `σ_s * self`.
    pub fn left_mul_gen(&self, s: usize) -> Self {
        let g = &self.group;
        let mut out = Self::zero(g);
        let corr = BiLaurent::v_minus_vinv();
        for (&w, c) in &self.terms {
            let sw = g.left_gen(s, w);
            out.add_term(sw, c.clone());
            if g.length(sw) < g.length(w) {
                out.add_term(w, c * &corr);
            }
        }
        out
    }

    /// `self * σ_s^{±1}`.
    pub fn right_mul_signed(&self, s: i64) -> Self {
        let gen = s.unsigned_abs() as usize;
        let mut out = self.right_mul_gen(gen);
        if s < 0 {
            let shift = self.scale(&BiLaurent::v_minus_vinv());
            out = &out - &shift;
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.group);
        for (&y, d) in &other.terms {
            let mut prod = self.clone();
            for &s in self.group.word(y) {
                prod = prod.right_mul_gen(s);
            }
            for (w, c) in prod.terms {
                out.add_term(w, c * d);
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&w, c) in &other.terms {
            out.add_term(w, c.clone());
        }
        Ok(out)
    }

    /// Re-expresses an element of a parabolic subalgebra inside a larger
    /// algebra whose generators carry the same labels.
    pub fn embed(&self, target: &Arc<WeylGroup>) -> Result<Self> {
        let mut out = Self::zero(target);
        for (&w, c) in &self.terms {
            out.add_term(target.index_of_word(self.group.word(w))?, c.clone());
        }
        Ok(out)
    }

    /// Bar involution: `v -> v^{-1}`, `σ_w -> σ_{w^{-1}}^{-1}`.
    pub fn bar(&self) -> Self {
        let g = &self.group;
        let mut out = Self::zero(g);
        for (&w, c) in &self.terms {
            let mut img = Self::one(g);
            for &s in g.word(w) {
                img = img.right_mul_signed(-(s as i64));
            }
            for (x, d) in img.terms {
                out.add_term(x, &d * &c.bar());
            }
        }
        out
    }
}

/// Image of a braid word (signed generator indices) in the Hecke algebra.
pub fn eval_braid(group: &Arc<WeylGroup>, letters: &[i64]) -> Result<HeckeElement> {
    let rank = group.rank() as i64;
    let mut h = HeckeElement::one(group);
    for &s in letters {
        if s == 0 || s.abs() > rank {
            return Err(Error::BadGenerator { index: s, name: group.cartan_type().name() });
        }
        h = h.right_mul_signed(s);
    }
    Ok(h)
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.cartan_type() == other.cartan_type() && self.terms == other.terms
    }
}

impl Eq for HeckeElement {}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&w, c)| {
                let word = format!("[{}]", format_word(self.group.word(w)));
                if c.is_one() {
                    word
                } else if c.len() == 1 {
                    format!("{c}{word}")
                } else {
                    format!("({c}){word}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElement<{}>({self})", self.cartan_type())
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        self.try_add(rhs).expect("Hecke elements of different types")
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        self.try_add(&-rhs).expect("Hecke elements of different types")
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        self.scale(&BiLaurent::constant(-1))
    }
}

impl Mul for &HeckeElement {
    type Output = HeckeElement;
    fn mul(self, rhs: &HeckeElement) -> HeckeElement {
        self.try_mul(rhs).expect("Hecke elements of different types")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(ct: CartanType) -> Arc<WeylGroup> {
        WeylGroup::shared(ct).unwrap()
    }

    fn sig(g: &Arc<WeylGroup>, word: &[usize]) -> HeckeElement {
        HeckeElement::from_word(g, word).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let g = group(CartanType::a(2));
        let s = sig(&g, &[1]);
        let want = &HeckeElement::one(&g) + &s.scale(&BiLaurent::v_minus_vinv());
        assert_eq!(&s * &s, want);
    }

    #[test]
    fn lengths_add() {
        let g = group(CartanType::a(2));
        assert_eq!(&sig(&g, &[1]) * &sig(&g, &[2]), sig(&g, &[1, 2]));
    }

    #[test]
    fn one_reduction_step() {
        let g = group(CartanType::a(2));
        let lhs = &sig(&g, &[1, 2]) * &sig(&g, &[2]);
        let want = &sig(&g, &[1]) + &sig(&g, &[1, 2]).scale(&BiLaurent::v_minus_vinv());
        assert_eq!(lhs, want);
    }

    #[test]
    fn braid_evaluation_examples() {
        let g = group(CartanType::a(1));
        assert_eq!(eval_braid(&g, &[]).unwrap(), HeckeElement::one(&g));
        let inv = eval_braid(&g, &[-1]).unwrap();
        let want = &sig(&g, &[1]) - &HeckeElement::one(&g).scale(&BiLaurent::v_minus_vinv());
        assert_eq!(inv, want);
        let cube = eval_braid(&g, &[1, 1, 1]).unwrap();
        let mut want = HeckeElement::monomial(&g, 1, BiLaurent::from_terms([(1, 2, 0), (-1, 0, 0), (1, -2, 0)]));
        want.add_term(0, BiLaurent::v_minus_vinv());
        assert_eq!(cube, want);
    }

    #[test]
    fn generator_times_inverse_is_one() {
        for ct in [CartanType::a(3), CartanType::b(3), CartanType::d(4)] {
            let g = group(ct);
            for s in 1..=ct.rank as i64 {
                assert_eq!(eval_braid(&g, &[s, -s]).unwrap(), HeckeElement::one(&g));
                assert_eq!(eval_braid(&g, &[-s, s]).unwrap(), HeckeElement::one(&g));
            }
        }
    }

    #[test]
    fn bad_generator_is_rejected() {
        let g = group(CartanType::a(2));
        assert!(matches!(eval_braid(&g, &[3]), Err(Error::BadGenerator { index: 3, .. })));
        assert!(eval_braid(&g, &[0]).is_err());
    }

    #[test]
    fn mixing_types_fails() {
        let a = sig(&group(CartanType::a(2)), &[1]);
        let b = sig(&group(CartanType::b(2)), &[1]);
        assert!(a.try_mul(&b).is_err());
    }
}
