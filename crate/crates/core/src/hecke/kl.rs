//! Kazhdan–Lusztig polynomials and the basis `C′_w`, with a text cache.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use super::HeckeElement;
use crate::coeff::BiLaurent;
use crate::coxeter::{format_word, parse_word, CartanType, WeylGroup};
use crate::error::{Error, Result};

const CACHE_MAGIC: &str = "kl-cache v1";

/// A polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly(pub Vec<i64>);

impl QPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn one() -> Self {
        Self(vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `v^{shift} P(v^2)` as a Laurent polynomial.
    pub fn to_laurent(&self, shift: i32) -> BiLaurent {
        BiLaurent::from_terms(self.0.iter().enumerate().map(|(k, &c)| (c, shift + 2 * k as i32, 0)))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = BiLaurent::from_terms(self.0.iter().enumerate().map(|(k, &c)| (c, k as i32, 0)));
        f.write_str(&p.display_with("q", "t"))
    }
}

/// Memoized `C′_w` elements, from which the polynomials `P_{x,w}` are read off.
pub struct KLTable {
    group: Arc<WeylGroup>,
    basis: Vec<Option<HeckeElement>>,
    dirty: bool,
}

impl KLTable {
    pub fn new(ct: CartanType) -> Result<Self> {
        Ok(Self::for_group(&WeylGroup::shared(ct)?))
    }

    pub fn for_group(group: &Arc<WeylGroup>) -> Self {
        Self { group: group.clone(), basis: vec![None; group.len()], dirty: false }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn cartan_type(&self) -> CartanType {
        self.group.cartan_type()
    }

    /// True when entries were computed that are not yet on disk.
    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn is_complete(&self) -> bool {
        self.basis.iter().all(Option::is_some)
    }

    fn ensure(&mut self, w: usize) {
        if self.basis[w].is_some() {
            return;
        }
        let g = self.group.clone();
        let value = if w == g.identity() {
            HeckeElement::one(&g)
        } else {
            let s = g.word(w)[0];
            let rest = g.left_gen(s, w);
            self.ensure(rest);
            let prev = self.basis[rest].clone().unwrap();
            // C′_s C′_{w'} = σ_s C′_{w'} + v^{-1} C′_{w'}
            let mut out = prev.left_mul_gen(s);
            for (x, c) in prev.terms() {
                out.add_term(x, c.shift(-1, 0));
            }
            for (z, c) in prev.terms() {
                if z == rest || g.length(g.left_gen(s, z)) > g.length(z) {
                    continue;
                }
                let mu = c.coeff(-1, 0);
                if mu.is_zero() {
                    continue;
                }
                self.ensure(z);
                let cz = self.basis[z].as_ref().unwrap();
                for (x, d) in cz.terms() {
                    out.add_term(x, -d.scale(&mu));
                }
            }
            out
        };
        self.basis[w] = Some(value);
        self.dirty = true;
    }

    pub fn compute_all(&mut self) {
        for w in 0..self.group.len() {
            self.ensure(w);
        }
    }

    /// `C′_w` in the standard basis.
    pub fn basis_element(&mut self, w: usize) -> &HeckeElement {
        self.ensure(w);
        self.basis[w].as_ref().unwrap()
    }

    /// `P_{x,w}`, zero unless `x ≤ w`.
    pub fn polynomial(&mut self, x: usize, w: usize) -> QPoly {
        let lw = self.group.length(w) as i32;
        let lx = self.group.length(x) as i32;
        let c = self.basis_element(w).coeff(x);
        coeff_to_qpoly(&c, lx - lw)
    }

    /// `μ(x, w)`: the coefficient of `q^{(l(w)-l(x)-1)/2}` in `P_{x,w}`.
    pub fn mu(&mut self, x: usize, w: usize) -> i64 {
        self.basis_element(w).coeff(x).coeff(-1, 0).to_i64().unwrap_or(0)
    }

    /// Every nonzero `(x, w, P_{x,w})`, sorted by `(w, x)` enumeration index.
    pub fn entries(&mut self) -> Vec<(usize, usize, QPoly)> {
        self.compute_all();
        let mut out = Vec::new();
        for w in 0..self.group.len() {
            let lw = self.group.length(w) as i32;
            let cw = self.basis[w].as_ref().unwrap();
            for (x, c) in cw.terms() {
                out.push((x, w, coeff_to_qpoly(c, self.group.length(x) as i32 - lw)));
            }
        }
        out
    }

    /// Re-expresses `h` in the basis `{C′_w}` by peeling off longest terms.
    pub fn to_kl_coordinates(&mut self, h: &HeckeElement) -> Result<BTreeMap<usize, BiLaurent>> {
        if h.cartan_type() != self.cartan_type() {
            return Err(Error::TypeMismatch(h.cartan_type().name(), self.cartan_type().name()));
        }
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        while let Some((w, c)) = rest.terms().max_by_key(|(w, _)| *w).map(|(w, c)| (w, c.clone())) {
            let cw = self.basis_element(w).scale(&c);
            rest = &rest - &cw;
            out.insert(w, c);
        }
        Ok(out)
    }

    pub fn to_cache_string(&mut self) -> String {
        let ct = self.cartan_type();
        let mut s = format!("{CACHE_MAGIC} {} {}\n", ct.family, ct.rank);
        for (x, w, p) in self.entries() {
            let coeffs: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
            s.push_str(&format!(
                "{} | {} | {}\n",
                format_word(self.group.word(x)),
                format_word(self.group.word(w)),
                coeffs.join(" ")
            ));
        }
        s
    }

    /// Parses and validates a cache file. The file must describe the whole
    /// group: every pair `x ≤ w` exactly once, in canonical words and order.
    pub fn from_cache_str(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Data(format!("kl cache line {line}: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        let rest = header.strip_prefix(CACHE_MAGIC).ok_or_else(|| bad(1, "bad header"))?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad(1, "bad header"));
        }
        let rank: usize = fields[1].parse().map_err(|_| bad(1, "bad rank"))?;
        let ct = CartanType::new(fields[0].parse()?, rank)?;
        let group = WeylGroup::shared(ct)?;
        let lower = bruhat_lower_sets(&group);

        let mut columns: Vec<BTreeMap<usize, QPoly>> = vec![BTreeMap::new(); group.len()];
        let mut last: Option<(usize, usize)> = None;
        for (i, line) in lines.enumerate() {
            let ln = i + 2;
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad(ln, "expected three fields"));
            }
            let x = canonical_index(&group, parts[0]).map_err(|e| bad(ln, &e.to_string()))?;
            let w = canonical_index(&group, parts[1]).map_err(|e| bad(ln, &e.to_string()))?;
            if last.is_some_and(|p| p >= (w, x)) {
                return Err(bad(ln, "entries out of order or duplicated"));
            }
            last = Some((w, x));
            let coeffs = parts[2]
                .split_whitespace()
                .map(|c| c.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad(ln, "bad coefficient"))?;
            let p = QPoly(coeffs.clone());
            if p.0.is_empty() || p.0.last() == Some(&0) || p.0.iter().any(|&c| c < 0) {
                return Err(bad(ln, "coefficients must be nonnegative with nonzero top term"));
            }
            if !lower[w][x] {
                return Err(bad(ln, "x is not below w in the Bruhat order"));
            }
            if p.coeff(0) != 1 {
                return Err(bad(ln, "constant term must be 1"));
            }
            let gap = group.length(w) - group.length(x);
            if x == w && p != QPoly::one() {
                return Err(bad(ln, "diagonal entry must be 1"));
            }
            if x != w && 2 * p.degree().unwrap() + 1 > gap {
                return Err(bad(ln, "degree bound violated"));
            }
            columns[w].insert(x, p);
        }
        for w in 0..group.len() {
            let expected = lower[w].iter().filter(|&&b| b).count();
            if columns[w].len() != expected {
                return Err(Error::Data(format!(
                    "kl cache: column {} has {} entries, expected {expected}",
                    format_word(group.word(w)),
                    columns[w].len()
                )));
            }
        }
        let basis = columns
            .iter()
            .enumerate()
            .map(|(w, col)| {
                let lw = group.length(w) as i32;
                let mut h = HeckeElement::zero(&group);
                for (&x, p) in col {
                    h.add_term(x, p.to_laurent(group.length(x) as i32 - lw));
                }
                Some(h)
            })
            .collect();
        Ok(Self { group, basis, dirty: false })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_cache_str(&text)
    }

    pub fn save(&mut self, path: &Path) -> Result<()> {
        let text = self.to_cache_string();
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, text)?;
        self.dirty = false;
        Ok(())
    }

    /// Loads the cache at `path` when it exists, otherwise computes the
    /// table and writes it there.
    pub fn load_or_build(ct: CartanType, path: &Path) -> Result<Self> {
        if path.exists() {
            let table = Self::load(path)?;
            if table.cartan_type() != ct {
                return Err(Error::TypeMismatch(table.cartan_type().name(), ct.name()));
            }
            return Ok(table);
        }
        let mut table = Self::new(ct)?;
        table.save(path)?;
        Ok(table)
    }

    /// `$MTK_CACHE_DIR/kl-<family><rank>.txt`, if the variable is set.
    pub fn default_cache_path(ct: CartanType) -> Option<PathBuf> {
        let dir = std::env::var_os("MTK_CACHE_DIR")?;
        Some(PathBuf::from(dir).join(format!("kl-{}{}.txt", ct.family, ct.rank)))
    }
}

fn coeff_to_qpoly(c: &BiLaurent, shift: i32) -> QPoly {
    let mut coeffs = Vec::new();
    for (&(ev, _), a) in c.terms() {
        let k = ((ev - shift) / 2) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = a.to_i64().expect("KL coefficient fits in i64");
    }
    QPoly::new(coeffs)
}

fn canonical_index(group: &WeylGroup, text: &str) -> Result<usize> {
    let word = parse_word(text, group.cartan_type())?;
    let i = group.index_of_word(&word)?;
    if group.word(i) != word.as_slice() {
        return Err(Error::Data(format!("word {text:?} is not the canonical reduced word")));
    }
    Ok(i)
}

/// `lower[w][x]` is true iff `x ≤ w`, using `{x ≤ sw'} = L(w') ∪ s L(w')`.
pub fn bruhat_lower_sets(group: &WeylGroup) -> Vec<Vec<bool>> {
    let n = group.len();
    let mut lower = vec![vec![false; n]; n];
    lower[group.identity()][group.identity()] = true;
    for w in 0..n {
        if w == group.identity() {
            continue;
        }
        let s = group.word(w)[0];
        let rest = group.left_gen(s, w);
        let mut set = lower[rest].clone();
        for x in 0..n {
            if lower[rest][x] {
                set[group.left_gen(s, x)] = true;
            }
        }
        lower[w] = set;
    }
    lower
}
