//! Weyl groups of types A, B and D as (signed) permutation groups.
//!
//! Vertex labels follow the usual pictures: type A is labeled `1..n` left to
//! right; in type B the double bond joins vertices 1 and 2; in type D the fork
//! vertices 1 and 2 are both attached to 3. New vertices always append on the
//! right, so the tower of parabolic subgroups removes the highest label.
//!
//! Elements are stored in window notation `[w(1), ..., w(m)]` with
//! multiplication `(uw)(i) = u(w(i))`. Right multiplication by a generator
//! acts on positions, left multiplication on values.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub type Word = Vec<usize>;

/// Default bound on `|W|` for enumeration.
pub const DEFAULT_ENUM_BOUND: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            // C_n has the same Weyl group and Hecke algebra as B_n
            "B" | "b" | "C" | "c" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::InvalidType(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B => rank >= 1,
            Family::D => rank >= 2,
        };
        if !ok {
            return Err(Error::InvalidType(format!("{family}{rank}")));
        }
        Ok(Self { family, rank })
    }

    pub fn a(rank: usize) -> Self {
        Self::new(Family::A, rank).unwrap()
    }

    pub fn b(rank: usize) -> Self {
        Self::new(Family::B, rank).unwrap()
    }

    pub fn d(rank: usize) -> Self {
        Self::new(Family::D, rank).unwrap()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Number of points the group permutes (`n + 1` in type `A_n`).
    pub fn degree(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::D => self.rank,
        }
    }

    pub fn order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
        }
    }

    /// Degrees of the basic invariants.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank as u32;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
        }
    }

    /// Coxeter matrix entry for the 1-based vertices `i`, `j`.
    pub fn m(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        match self.family {
            Family::A => {
                if hi == lo + 1 {
                    3
                } else {
                    2
                }
            }
            Family::B => match (lo, hi) {
                (1, 2) => 4,
                _ if hi == lo + 1 => 3,
                _ => 2,
            },
            Family::D => match (lo, hi) {
                (1, 2) => 2,
                (1, 3) | (2, 3) => 3,
                _ if lo >= 3 && hi == lo + 1 => 3,
                _ => 2,
            },
        }
    }

    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        (1..=self.rank).map(|i| (1..=self.rank).map(|j| self.m(i, j)).collect()).collect()
    }

    /// The type obtained by deleting the highest-labeled vertex, or `None`
    /// for the empty diagram. `D_2` loses vertex 2 and becomes `A_1`.
    pub fn parabolic(&self) -> Option<CartanType> {
        match (self.family, self.rank) {
            (Family::A | Family::B, 1) => None,
            (Family::D, 2) => Some(CartanType::a(1)),
            (f, r) => Some(CartanType { family: f, rank: r - 1 }),
        }
    }

    /// Signed permutation (window notation) of the generator `s_i`.
    pub fn generator(&self, i: usize) -> Result<Vec<i8>> {
        if i == 0 || i > self.rank {
            return Err(Error::BadGenerator { index: i as i64, name: self.name() });
        }
        let m = self.degree();
        let mut w: Vec<i8> = (1..=m as i8).collect();
        match (self.family, i) {
            (Family::A, _) => w.swap(i - 1, i),
            (Family::B, 1) => w[0] = -1,
            (Family::B, _) => w.swap(i - 2, i - 1),
            (Family::D, 1) => {
                w[0] = -2;
                w[1] = -1;
            }
            (Family::D, _) => w.swap(i - 2, i - 1),
        }
        Ok(w)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() < 2 {
            return Err(Error::InvalidType(s.to_string()));
        }
        let (f, r) = s.split_at(1);
        let rank = r.parse().map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(f.parse()?, rank)
    }
}

/// An element of `W(X_n)` in canonical signed-permutation form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    ct: CartanType,
    perm: Vec<i8>,
}

fn compose(u: &[i8], w: &[i8]) -> Vec<i8> {
    w.iter()
        .map(|&x| {
            let y = u[(x.unsigned_abs() - 1) as usize];
            if x < 0 {
                -y
            } else {
                y
            }
        })
        .collect()
}

fn perm_length(family: Family, w: &[i8]) -> usize {
    let mut inv = 0;
    let mut nsp = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inv += 1;
            }
            if w[i] + w[j] < 0 {
                nsp += 1;
            }
        }
    }
    let neg = w.iter().filter(|&&x| x < 0).count();
    match family {
        Family::A => inv,
        Family::B => inv + nsp + neg,
        Family::D => inv + nsp,
    }
}

impl WeylElement {
    pub fn identity(ct: CartanType) -> Self {
        Self { ct, perm: (1..=ct.degree() as i8).collect() }
    }

    pub fn generator(ct: CartanType, i: usize) -> Result<Self> {
        Ok(Self { ct, perm: ct.generator(i)? })
    }

    /// Builds an element from window notation, checking membership in `W(ct)`.
    pub fn from_perm(ct: CartanType, perm: Vec<i8>) -> Result<Self> {
        let m = ct.degree();
        let mut seen = vec![false; m];
        if perm.len() != m {
            return Err(Error::Parse(format!("{ct} acts on {m} points, got {}", perm.len())));
        }
        for &x in &perm {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > m || seen[a - 1] {
                return Err(Error::Parse(format!("{perm:?} is not a signed permutation")));
            }
            seen[a - 1] = true;
        }
        let negs = perm.iter().filter(|&&x| x < 0).count();
        let ok = match ct.family {
            Family::A => negs == 0,
            Family::B => true,
            Family::D => negs % 2 == 0,
        };
        if !ok {
            return Err(Error::Parse(format!("{perm:?} is not in W({ct})")));
        }
        Ok(Self { ct, perm })
    }

    pub fn from_word(ct: CartanType, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(ct);
        for &s in word {
            w = w.mul(&Self::generator(ct, s)?)?;
        }
        Ok(w)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ct
    }

    pub fn perm(&self) -> &[i8] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| x == i as i8 + 1)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ct != other.ct {
            return Err(Error::TypeMismatch(self.ct.name(), other.ct.name()));
        }
        Ok(Self { ct: self.ct, perm: compose(&self.perm, &other.perm) })
    }

    pub fn inv(&self) -> Self {
        let mut out = vec![0i8; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            let pos = (x.unsigned_abs() - 1) as usize;
            out[pos] = if x < 0 { -(i as i8 + 1) } else { i as i8 + 1 };
        }
        Self { ct: self.ct, perm: out }
    }

    pub fn length(&self) -> usize {
        perm_length(self.ct.family, &self.perm)
    }

    fn gen_perm(&self, s: usize) -> Vec<i8> {
        self.ct.generator(s).expect("generator index checked by caller")
    }

    pub fn left_mul_gen(&self, s: usize) -> Self {
        Self { ct: self.ct, perm: compose(&self.gen_perm(s), &self.perm) }
    }

    pub fn right_mul_gen(&self, s: usize) -> Self {
        Self { ct: self.ct, perm: compose(&self.perm, &self.gen_perm(s)) }
    }

    pub fn is_left_descent(&self, s: usize) -> bool {
        self.left_mul_gen(s).length() < self.length()
    }

    pub fn is_right_descent(&self, s: usize) -> bool {
        self.right_mul_gen(s).length() < self.length()
    }

    /// The lexicographically smallest reduced word.
    pub fn reduced_word(&self) -> Word {
        let mut word = Vec::with_capacity(self.length());
        let mut cur = self.clone();
        while !cur.is_identity() {
            let s =
                (1..=self.ct.rank).find(|&s| cur.is_left_descent(s)).expect("nonidentity element has a left descent");
            word.push(s);
            cur = cur.left_mul_gen(s);
        }
        word
    }

    /// Splits `w = u * r` with `u` in the parabolic subgroup generated by all
    /// but the highest generator and `r` the minimal right coset representative.
    pub fn tower_decompose(&self) -> (WeylElement, Word) {
        let top = self.ct.rank;
        let mut u = WeylElement::identity(self.ct);
        let mut r = self.clone();
        while let Some(s) = (1..top).find(|&s| r.is_left_descent(s)) {
            r = r.left_mul_gen(s);
            u = u.right_mul_gen(s);
        }
        (u, r.reduced_word())
    }

    /// Bruhat order, by recursion on the first letter of the reduced word of `w`
    /// (the lifting property).
    pub fn bruhat_leq(&self, w: &Self) -> bool {
        if self.ct != w.ct {
            return false;
        }
        let (lx, lw) = (self.length(), w.length());
        if lx > lw {
            return false;
        }
        if lw == 0 {
            return self.is_identity();
        }
        if lx == lw {
            return self == w;
        }
        let s = (1..=w.ct.rank).find(|&s| w.is_left_descent(s)).unwrap();
        let sw = w.left_mul_gen(s);
        if self.is_left_descent(s) {
            self.left_mul_gen(s).bruhat_leq(&sw)
        } else {
            self.bruhat_leq(&sw)
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.reduced_word()))
    }
}

/// Renders a word as `"1 2 1"`, with `"e"` for the empty word.
pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses whitespace-separated generator indices (optionally written `s1`);
/// `e` or the empty string is the identity.
pub fn parse_word(text: &str, ct: CartanType) -> Result<Word> {
    let mut word = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() || tok == "e" {
            continue;
        }
        let digits = tok.strip_prefix('s').unwrap_or(tok);
        let i: i64 = digits.parse().map_err(|_| Error::Parse(format!("bad generator token {tok:?}")))?;
        if i < 1 || i as usize > ct.rank {
            return Err(Error::BadGenerator { index: i, name: ct.name() });
        }
        word.push(i as usize);
    }
    Ok(word)
}

/// All elements of a Weyl group, sorted by `(length, window)`, with
/// multiplication-by-generator tables.
#[derive(Debug)]
pub struct WeylGroup {
    ct: CartanType,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i8>, usize>,
    lengths: Vec<usize>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    words: Vec<Word>,
}

impl WeylGroup {
    pub fn new(ct: CartanType) -> Result<Self> {
        Self::with_bound(ct, DEFAULT_ENUM_BOUND)
    }

    pub fn with_bound(ct: CartanType, bound: usize) -> Result<Self> {
        let order = ct.order();
        if order > bound as u128 {
            return Err(Error::GroupTooLarge { name: ct.name(), order, bound });
        }
        let gens: Vec<Vec<i8>> = (1..=ct.rank).map(|s| ct.generator(s).unwrap()).collect();
        let id = WeylElement::identity(ct);
        let mut seen: HashMap<Vec<i8>, ()> = HashMap::new();
        seen.insert(id.perm.clone(), ());
        let mut frontier = vec![id.perm.clone()];
        let mut all = vec![id.perm.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let x = compose(w, g);
                    if seen.insert(x.clone(), ()).is_none() {
                        next.push(x.clone());
                        all.push(x);
                    }
                }
            }
            frontier = next;
        }
        debug_assert_eq!(all.len() as u128, order);
        let mut elements: Vec<WeylElement> = all.into_iter().map(|perm| WeylElement { ct, perm }).collect();
        elements.sort_by_cached_key(|w| (w.length(), w.perm.clone()));
        let index: HashMap<Vec<i8>, usize> = elements.iter().enumerate().map(|(i, w)| (w.perm.clone(), i)).collect();
        let lengths = elements.iter().map(|w| w.length()).collect();
        let left = gens.iter().map(|g| elements.iter().map(|w| index[&compose(g, &w.perm)]).collect()).collect();
        let right = gens.iter().map(|g| elements.iter().map(|w| index[&compose(&w.perm, g)]).collect()).collect();
        let inverse = elements.iter().map(|w| index[&w.inv().perm]).collect();
        let words = elements.iter().map(|w| w.reduced_word()).collect();
        Ok(Self { ct, elements, index, lengths, left, right, inverse, words })
    }

    /// Process-wide shared enumeration.
    pub fn shared(ct: CartanType) -> Result<Arc<WeylGroup>> {
        static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<WeylGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().unwrap().get(&ct) {
            return Ok(g.clone());
        }
        let g = Arc::new(WeylGroup::new(ct)?);
        Ok(cache.lock().unwrap().entry(ct).or_insert(g).clone())
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ct
    }

    pub fn rank(&self) -> usize {
        self.ct.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        if w.ct != self.ct {
            return None;
        }
        self.index.get(&w.perm).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    /// Index of `s * w`.
    pub fn left_gen(&self, s: usize, i: usize) -> usize {
        self.left[s - 1][i]
    }

    /// Index of `w * s`.
    pub fn right_gen(&self, i: usize, s: usize) -> usize {
        self.right[s - 1][i]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[b].iter().fold(a, |acc, &s| self.right_gen(acc, s))
    }

    pub fn index_of_word(&self, word: &[usize]) -> Result<usize> {
        let mut acc = 0;
        for &s in word {
            if s == 0 || s > self.ct.rank {
                return Err(Error::BadGenerator { index: s as i64, name: self.ct.name() });
            }
            acc = self.right_gen(acc, s);
        }
        Ok(acc)
    }

    /// Elements of the parabolic subgroup generated by `1..rank-1`.
    pub fn parabolic_indices(&self) -> Vec<usize> {
        let top = self.ct.rank;
        (0..self.len()).filter(|&i| !self.words[i].contains(&top)).collect()
    }
}

/// `Σ_w x^{l(w)}` as a coefficient list.
pub fn poincare_polynomial(group: &WeylGroup) -> Vec<u64> {
    let maxl = (0..group.len()).map(|i| group.length(i)).max().unwrap_or(0);
    let mut out = vec![0u64; maxl + 1];
    for i in 0..group.len() {
        out[group.length(i)] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ct: CartanType, word: &[usize]) -> WeylElement {
        WeylElement::from_word(ct, word).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(WeylGroup::new(CartanType::a(2)).unwrap().len(), 6);
        assert_eq!(WeylGroup::new(CartanType::b(2)).unwrap().len(), 8);
        assert_eq!(WeylGroup::new(CartanType::d(3)).unwrap().len(), 24);
        assert_eq!(WeylGroup::new(CartanType::d(4)).unwrap().len(), 192);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let err = WeylGroup::with_bound(CartanType::a(7), 10_000).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { order: 40320, .. }));
    }

    #[test]
    fn braid_relations() {
        let a2 = CartanType::a(2);
        assert_eq!(w(a2, &[1, 2, 1]), w(a2, &[2, 1, 2]));
        assert_eq!(w(a2, &[1, 2, 1]).length(), 3);
        let b2 = CartanType::b(2);
        assert!(w(b2, &[1, 2, 1, 2, 1, 2, 1, 2]).is_identity());
        assert!(!w(b2, &[1, 2, 1, 2]).is_identity());
    }

    #[test]
    fn coxeter_relations_hold_for_generators() {
        for ct in [CartanType::a(4), CartanType::b(4), CartanType::d(4), CartanType::d(2)] {
            for i in 1..=ct.rank {
                for j in 1..=ct.rank {
                    let m = ct.m(i, j) as usize;
                    let word: Vec<usize> = (0..2 * m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                    assert!(w(ct, &word).is_identity(), "{ct}: (s{i} s{j})^{m}");
                    if m > 1 {
                        let short: Vec<usize> = word[..2 * (m - 1)].to_vec();
                        assert!(!w(ct, &short).is_identity(), "{ct}: order of s{i}s{j} below {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn length_formula_matches_word_metric() {
        for ct in [CartanType::a(3), CartanType::b(3), CartanType::d(4)] {
            let g = WeylGroup::new(ct).unwrap();
            // breadth-first distance from the identity
            let mut dist = vec![usize::MAX; g.len()];
            dist[0] = 0;
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(i) = queue.pop_front() {
                for s in 1..=ct.rank {
                    let j = g.right_gen(i, s);
                    if dist[j] == usize::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
            for (i, &d) in dist.iter().enumerate() {
                assert_eq!(g.length(i), d);
                assert_eq!(g.word(i).len(), d);
            }
        }
    }

    #[test]
    fn tower_examples() {
        let a2 = CartanType::a(2);
        assert_eq!(w(a2, &[2, 1]).tower_decompose(), (WeylElement::identity(a2), vec![2, 1]));
        assert_eq!(w(a2, &[1, 2]).tower_decompose(), (w(a2, &[1]), vec![2]));
        assert_eq!(w(a2, &[1]).tower_decompose(), (w(a2, &[1]), vec![]));
    }

    #[test]
    fn bruhat_examples() {
        let a2 = CartanType::a(2);
        let e = WeylElement::identity(a2);
        assert!(e.bruhat_leq(&w(a2, &[1, 2, 1])));
        assert!(w(a2, &[1]).bruhat_leq(&w(a2, &[1, 2])));
        assert!(!w(a2, &[1, 2]).bruhat_leq(&w(a2, &[2, 1])));
    }

    #[test]
    fn reduced_word_is_lex_smallest() {
        let a2 = CartanType::a(2);
        assert_eq!(w(a2, &[2, 1, 2]).reduced_word(), vec![1, 2, 1]);
        let b2 = CartanType::b(2);
        assert_eq!(w(b2, &[2, 1, 2, 1]).reduced_word(), vec![1, 2, 1, 2]);
    }

    #[test]
    fn parse_words() {
        let a3 = CartanType::a(3);
        assert_eq!(parse_word("1 2 s3", a3).unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_word("e", a3).unwrap(), Vec::<usize>::new());
        assert!(matches!(parse_word("4", a3), Err(Error::BadGenerator { index: 4, .. })));
        assert_eq!("B3".parse::<CartanType>().unwrap(), CartanType::b(3));
        assert!("D1".parse::<CartanType>().is_err());
    }
}
