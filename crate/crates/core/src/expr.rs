//! Parsers for the command-line mini-languages.
//!
//! Hecke elements are sums of terms `[INT *] atom`, where an atom is `e`, a
//! word of generators (`1 2 1`, `s1 s2`, `1 -2` with `-2` the inverse
//! generator) or a Kazhdan–Lusztig basis element `C' 1 2`. A `-` followed
//! by whitespace is subtraction; attached to a digit it negates the index.
//!
//! Laurent polynomials are sums of monomials such as `-t`, `2 v^-1 t^2`, `q`.

use std::sync::Arc;

use crate::coeff::BiLaurent;
use crate::coxeter::WeylGroup;
use crate::error::{Error, Result};
use crate::hecke::{eval_braid, HeckeElement, KLTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// Product of signed generators; empty for the identity.
    Word(Vec<i64>),
    Kl(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(i64, Atom)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Kl,
    Id,
    Int(i64),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let bad = |s: &str| Error::Parse(format!("unexpected {s:?} in expression {text:?}"));
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() || c == ',' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            'e' => {
                out.push(Tok::Id);
                i += 1;
            }
            'C' => {
                i += 1;
                if i < chars.len() && (chars[i] == '\'' || chars[i] == '′') {
                    i += 1;
                }
                out.push(Tok::Kl);
            }
            '-' | 's' | '0'..='9' => {
                let neg = c == '-';
                let start = if c == '-' || c == 's' { i + 1 } else { i };
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    if neg {
                        out.push(Tok::Minus);
                        i += 1;
                        continue;
                    }
                    return Err(bad(&c.to_string()));
                }
                let digits: String = chars[start..j].iter().collect();
                let n: i64 = digits.parse().map_err(|_| bad(&digits))?;
                out.push(Tok::Int(if neg { -n } else { n }));
                i = j;
            }
            _ => return Err(bad(&c.to_string())),
        }
    }
    Ok(out)
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut terms = Vec::new();
        let mut i = 0;
        let mut sign = 1;
        if toks[0] == Tok::Minus {
            sign = -1;
            i = 1;
        }
        loop {
            let mut coeff = sign;
            if let (Some(Tok::Int(c)), Some(Tok::Star)) = (toks.get(i), toks.get(i + 1)) {
                coeff *= c;
                i += 2;
            }
            let atom = match toks.get(i) {
                Some(Tok::Id) => {
                    i += 1;
                    Atom::Word(Vec::new())
                }
                Some(Tok::Kl) => {
                    i += 1;
                    let mut word = Vec::new();
                    while let Some(Tok::Int(n)) = toks.get(i) {
                        if *n <= 0 {
                            return Err(Error::Parse(format!("C' takes positive generators, got {n}")));
                        }
                        word.push(*n as usize);
                        i += 1;
                    }
                    if word.is_empty() && toks.get(i) == Some(&Tok::Id) {
                        i += 1;
                    }
                    Atom::Kl(word)
                }
                Some(Tok::Int(_)) => {
                    let mut word = Vec::new();
                    while let Some(Tok::Int(n)) = toks.get(i) {
                        if *n == 0 {
                            return Err(Error::Parse("generator index 0".into()));
                        }
                        word.push(*n);
                        i += 1;
                    }
                    Atom::Word(word)
                }
                other => return Err(Error::Parse(format!("expected a term, found {other:?}"))),
            };
            terms.push((coeff, atom));
            match toks.get(i) {
                None => break,
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(t) => return Err(Error::Parse(format!("expected + or -, found {t:?}"))),
            }
            i += 1;
        }
        Ok(Self { terms })
    }

    pub fn needs_kl(&self) -> bool {
        self.terms.iter().any(|(_, a)| matches!(a, Atom::Kl(_)))
    }

    /// `kl` is required when the expression mentions `C'`.
    pub fn evaluate(&self, group: &Arc<WeylGroup>, mut kl: Option<&mut KLTable>) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero(group);
        for (c, atom) in &self.terms {
            let h = match atom {
                Atom::Word(w) => eval_braid(group, w)?,
                Atom::Kl(w) => {
                    let rank = group.rank();
                    if let Some(&bad) = w.iter().find(|&&s| s > rank) {
                        return Err(Error::BadGenerator { index: bad as i64, name: group.cartan_type().name() });
                    }
                    let x = group.index_of_word(w)?;
                    if group.length(x) != w.len() {
                        return Err(Error::Parse(format!("C' word {w:?} is not reduced")));
                    }
                    let table = kl.as_deref_mut().ok_or_else(|| Error::Unsupported("C' needs a KL table".into()))?;
                    if table.group().cartan_type() != group.cartan_type() {
                        return Err(Error::TypeMismatch(table.cartan_type().name(), group.cartan_type().name()));
                    }
                    table.basis_element(x).clone()
                }
            };
            out = &out + &h.scale(&BiLaurent::constant(*c));
        }
        Ok(out)
    }
}

pub fn parse_element(text: &str, group: &Arc<WeylGroup>, kl: Option<&mut KLTable>) -> Result<HeckeElement> {
    Expr::parse(text)?.evaluate(group, kl)
}

/// A Laurent polynomial in `v`, `t` (and `q = v²`).
pub fn parse_laurent(text: &str) -> Result<BiLaurent> {
    let bad = || Error::Parse(format!("bad polynomial {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut out = BiLaurent::zero();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = 1i64;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 =
            if i > start { chars[start..i].iter().collect::<String>().parse().map_err(|_| bad())? } else { 1 };
        let (mut ev, mut et) = (0i32, 0i32);
        let mut any = i > start;
        while i < chars.len() && matches!(chars[i], 'v' | 't' | 'q') {
            let var = chars[i];
            i += 1;
            let mut exp = 1i32;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let es = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                exp = chars[es..i].iter().collect::<String>().parse().map_err(|_| bad())?;
            }
            match var {
                'v' => ev += exp,
                'q' => ev += 2 * exp,
                _ => et += exp,
            }
            any = true;
        }
        if !any || (i < chars.len() && chars[i] != '+' && chars[i] != '-') {
            return Err(bad());
        }
        out += &BiLaurent::monomial(sign * coeff, ev, et);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanType;

    fn a2() -> Arc<WeylGroup> {
        WeylGroup::shared(CartanType::a(2)).unwrap()
    }

    #[test]
    fn words_and_sums() {
        let g = a2();
        let w = g.index_of_word(&[1, 2, 1]).unwrap();
        assert_eq!(parse_element("1 2 1", &g, None).unwrap(), HeckeElement::basis(&g, w));
        assert_eq!(parse_element("s1 s2 s1", &g, None).unwrap(), HeckeElement::basis(&g, w));
        let e = HeckeElement::one(&g);
        let s1 = HeckeElement::basis(&g, g.index_of_word(&[1]).unwrap());
        assert_eq!(parse_element("e", &g, None).unwrap(), e);
        assert_eq!(parse_element("2*1 - e", &g, None).unwrap(), &s1.scale(&BiLaurent::constant(2)) - &e);
        assert_eq!(parse_element("1 -1", &g, None).unwrap(), e);
        assert_eq!(parse_element("-1 1", &g, None).unwrap(), e);
        assert_eq!(parse_element("- e", &g, None).unwrap(), -&e);
    }

    #[test]
    fn kl_atoms() {
        let g = a2();
        let mut kl = KLTable::for_group(&g);
        let c = parse_element("C' 1", &g, Some(&mut kl)).unwrap();
        let s1 = HeckeElement::basis(&g, g.index_of_word(&[1]).unwrap());
        assert_eq!(c, &s1 + &HeckeElement::one(&g).scale(&BiLaurent::monomial(1, -1, 0)));
        assert!(parse_element("C' 1", &g, None).is_err());
        assert!(parse_element("C' 1 1", &g, Some(&mut kl)).is_err());
    }

    #[test]
    fn errors() {
        let g = a2();
        for bad in ["", "1 +", "x", "3", "1 0", "C' -1", "2 * "] {
            assert!(parse_element(bad, &g, None).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn laurent() {
        assert_eq!(parse_laurent("-t").unwrap(), -BiLaurent::t());
        assert_eq!(parse_laurent("2 v^-1 t^2 + q").unwrap(), BiLaurent::from_terms([(2, -1, 2), (1, 2, 0)]));
        assert_eq!(parse_laurent("1 - v").unwrap(), BiLaurent::from_terms([(1, 0, 0), (-1, 1, 0)]));
        assert!(parse_laurent("t^").is_err());
        assert!(parse_laurent("x").is_err());
    }
}
