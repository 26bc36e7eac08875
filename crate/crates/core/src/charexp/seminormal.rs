use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::partition::{
    bipartitions, partitions, standard_bitableaux, standard_tableaux, BiPartition, Partition, Tableau,
};
use crate::coeff::{BiLaurent, RatFn};
use crate::coxeter::{CartanType, Family, WeylGroup};
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;

/// A square matrix of Laurent polynomials over a denominator kept as a list
/// of factors, so that common factors can be cancelled after products.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    dim: usize,
    num: Vec<BiLaurent>,
    factors: Vec<BiLaurent>,
}

impl RatMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut num = vec![BiLaurent::zero(); dim * dim];
        for i in 0..dim {
            num[i * dim + i] = BiLaurent::one();
        }
        Self { dim, num, factors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> BiLaurent {
        self.factors.iter().fold(BiLaurent::one(), |acc, f| &acc * f)
    }

    pub fn entry(&self, i: usize, j: usize) -> RatFn {
        RatFn::new(self.num[i * self.dim + j].clone(), self.den()).expect("nonzero denominator")
    }

    fn reduce(&mut self) {
        let mut i = 0;
        while i < self.factors.len() {
            let f = &self.factors[i];
            let divided: Option<Vec<BiLaurent>> = self.num.iter().map(|e| e.exact_div(f).ok()).collect();
            match divided {
                Some(num) => {
                    self.num = num;
                    self.factors.remove(i);
                }
                None => i += 1,
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut num = vec![BiLaurent::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.num[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.num[k * n + j];
                    if !b.is_zero() {
                        num[i * n + j] += &(a * b);
                    }
                }
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut out = Self { dim: n, num, factors };
        out.reduce();
        out
    }

    /// `self - c·1`
    pub fn sub_scalar(&self, c: &BiLaurent) -> Self {
        let den = self.den();
        let mut out = self.clone();
        for i in 0..self.dim {
            out.num[i * self.dim + i] -= &(c * &den);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(BiLaurent::is_zero)
    }

    /// Exact trace; an error if it is not a Laurent polynomial.
    pub fn trace(&self) -> Result<BiLaurent> {
        let mut acc = BiLaurent::zero();
        for i in 0..self.dim {
            acc += &self.num[i * self.dim + i];
        }
        acc.exact_div(&self.den())
    }
}

impl PartialEq for RatMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let (da, db) = (self.den(), other.den());
        self.num.iter().zip(&other.num).all(|(a, b)| a * &db == b * &da)
    }
}

/// The eigenvalue of the Jucys–Murphy element of a letter, `±v^e`.
type Monomial = (i64, i32);

fn jm_value(family: Family, t: &Tableau, letter: usize) -> Monomial {
    let (comp, _, _) = t.cell(letter);
    let c = 2 * t.content(letter);
    match (family, comp) {
        (Family::A, _) => (1, c),
        (_, 0) => (1, c + 1),
        _ => (-1, c - 1),
    }
}

/// An irreducible representation of the Hecke algebra in seminormal form on
/// the basis of standard (bi)tableaux.
#[derive(Clone, Debug)]
pub struct SeminormalRep {
    ct: CartanType,
    label: String,
    tableaux: Vec<Tableau>,
    gens: Vec<RatMatrix>,
}

impl SeminormalRep {
    /// The representation of `H(A_n)` labelled by a partition of `n + 1`.
    pub fn type_a(shape: &Partition) -> Result<Self> {
        if shape.size() < 2 {
            return Err(Error::InvalidType(format!("partition {shape} labels no H(A_n) with n >= 1")));
        }
        let ct = CartanType::a(shape.size() - 1);
        Ok(Self::build(ct, shape.to_string(), standard_tableaux(shape)))
    }

    /// The representation of `H(B_n)` (equal parameters) labelled by a bipartition of `n`.
    pub fn type_b(shape: &BiPartition) -> Result<Self> {
        if shape.size() < 1 {
            return Err(Error::InvalidType("empty bipartition".into()));
        }
        let ct = CartanType::b(shape.size());
        Ok(Self::build(ct, shape.to_string(), standard_bitableaux(shape)))
    }

    fn build(ct: CartanType, label: String, tableaux: Vec<Tableau>) -> Self {
        let index: HashMap<&Tableau, usize> = tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let gens = (1..=ct.rank)
            .map(|s| {
                let letters = match ct.family {
                    Family::A => Some((s, s + 1)),
                    _ if s == 1 => None,
                    _ => Some((s - 1, s)),
                };
                generator_matrix(ct.family, &tableaux, &index, letters)
            })
            .collect();
        Self { ct, label, tableaux, gens }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ct
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[Tableau] {
        &self.tableaux
    }

    pub fn generator(&self, s: usize) -> &RatMatrix {
        &self.gens[s - 1]
    }

    /// Images of all `σ_w`, in the enumeration order of the group.
    pub fn element_matrices(&self, group: &WeylGroup) -> Vec<RatMatrix> {
        let mut out: Vec<Option<RatMatrix>> = vec![None; group.len()];
        out[group.identity()] = Some(RatMatrix::identity(self.dim()));
        for w in 0..group.len() {
            if w == group.identity() {
                continue;
            }
            let word = group.word(w);
            let s = *word.last().unwrap();
            let prev = group.right_gen(w, s);
            let m = out[prev].as_ref().expect("shorter elements come first").mul(&self.gens[s - 1]);
            out[w] = Some(m);
        }
        out.into_iter().map(Option::unwrap).collect()
    }

    /// Verifies the quadratic relation for every generator and the braid
    /// relation for every pair, symbolically.
    pub fn check_relations(&self) -> std::result::Result<(), String> {
        let (v, vinv) = (BiLaurent::v(), BiLaurent::monomial(1, -1, 0));
        for (i, m) in self.gens.iter().enumerate() {
            let q = m.sub_scalar(&v).mul(&m.sub_scalar(&-&vinv));
            if !q.is_zero() {
                return Err(format!("{}: quadratic relation fails for generator {}", self.label, i + 1));
            }
        }
        for i in 1..=self.ct.rank {
            for j in i + 1..=self.ct.rank {
                let m = self.ct.m(i, j) as usize;
                let alt = |a: usize, b: usize| {
                    (0..m).fold(RatMatrix::identity(self.dim()), |acc, k| {
                        acc.mul(&self.gens[if k % 2 == 0 { a } else { b } - 1])
                    })
                };
                if alt(i, j) != alt(j, i) {
                    return Err(format!("{}: braid relation fails for generators {i}, {j}", self.label));
                }
            }
        }
        Ok(())
    }
}

fn generator_matrix(
    family: Family,
    tableaux: &[Tableau],
    index: &HashMap<&Tableau, usize>,
    letters: Option<(usize, usize)>,
) -> RatMatrix {
    let n = tableaux.len();
    let vdiff = BiLaurent::v_minus_vinv();
    // entries as (numerator, denominator) before clearing denominators
    let mut entries: Vec<(usize, usize, BiLaurent, BiLaurent)> = Vec::new();
    for (i, t) in tableaux.iter().enumerate() {
        let Some((a, b)) = letters else {
            let (sign, e) = jm_value(family, t, 1);
            entries.push((i, i, BiLaurent::monomial(sign, e, 0), BiLaurent::one()));
            continue;
        };
        let (ca, ra, cola) = t.cell(a);
        let (cb, rb, colb) = t.cell(b);
        if ca == cb && ra == rb {
            entries.push((i, i, BiLaurent::v(), BiLaurent::one()));
        } else if ca == cb && cola == colb {
            entries.push((i, i, BiLaurent::monomial(-1, -1, 0), BiLaurent::one()));
        } else {
            let (sa, ea) = jm_value(family, t, a);
            let (sb, eb) = jm_value(family, t, b);
            let x = BiLaurent::monomial(sa * sb, ea - eb, 0);
            let f = &BiLaurent::one() - &x;
            entries.push((i, i, vdiff.clone(), f.clone()));
            let j = index[&t.swapped(a, b)];
            if i < j {
                let f2 = &f * &f;
                // α_T α_T' + 1 with α_T' = -x (v - v^-1) / f
                let c = &(-(&x * &(&vdiff * &vdiff))) + &f2;
                entries.push((i, j, BiLaurent::one(), BiLaurent::one()));
                entries.push((j, i, c, f2));
            }
        }
    }
    let mut dens: Vec<BiLaurent> = Vec::new();
    for (_, _, _, d) in &entries {
        if !d.is_one() && !dens.iter().any(|e| e == d || e.exact_div(d).is_ok()) {
            dens.retain(|e| d.exact_div(e).is_err());
            dens.push(d.clone());
        }
    }
    let den = dens.iter().fold(BiLaurent::one(), |acc, d| &acc * d);
    let mut num = vec![BiLaurent::zero(); n * n];
    for (i, j, a, d) in entries {
        num[i * n + j] = &a * &den.exact_div(&d).expect("denominator divides the common one");
    }
    let mut m = RatMatrix { dim: n, num, factors: dens };
    m.reduce();
    m
}

/// Exact value of the character of `rep` on `h`.
pub fn char_value(rep: &SeminormalRep, h: &HeckeElement) -> Result<RatFn> {
    if rep.cartan_type() != h.cartan_type() {
        return Err(Error::TypeMismatch(rep.cartan_type().name(), h.cartan_type().name()));
    }
    let table = hecke_character_table(rep.cartan_type())?;
    let i = table
        .labels
        .iter()
        .position(|l| l == rep.label())
        .ok_or_else(|| Error::Data(format!("unknown character {}", rep.label())))?;
    Ok(RatFn::from_poly(table.value(i, h)))
}

/// Values `χ_q(σ_w)` of every irreducible Hecke character on every basis element.
#[derive(Debug)]
pub struct HeckeCharacterTable {
    pub ct: CartanType,
    pub labels: Vec<String>,
    /// `values[χ][w]`
    pub values: Vec<Vec<BiLaurent>>,
}

impl HeckeCharacterTable {
    pub fn value(&self, chi: usize, h: &HeckeElement) -> BiLaurent {
        let mut acc = BiLaurent::zero();
        for (w, c) in h.terms() {
            acc += &(c * &self.values[chi][w]);
        }
        acc
    }
}

/// The seminormal representations of `H(ct)`, in label order.
pub fn seminormal_reps(ct: CartanType) -> Result<Vec<SeminormalRep>> {
    match ct.family {
        Family::A => partitions(ct.rank + 1).iter().map(SeminormalRep::type_a).collect(),
        Family::B => bipartitions(ct.rank).iter().map(SeminormalRep::type_b).collect(),
        Family::D => Err(Error::Unsupported(format!("Hecke characters of type {ct}"))),
    }
}

pub fn hecke_character_table(ct: CartanType) -> Result<Arc<HeckeCharacterTable>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<HeckeCharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&ct) {
        return Ok(t.clone());
    }
    let group = WeylGroup::shared(ct)?;
    let reps = seminormal_reps(ct)?;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for rep in &reps {
        let row = rep
            .element_matrices(&group)
            .iter()
            .map(RatMatrix::trace)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Data(format!("character {} is not a Laurent polynomial", rep.label())))?;
        labels.push(rep.label().to_string());
        values.push(row);
    }
    let table = Arc::new(HeckeCharacterTable { ct, labels, values });
    Ok(cache.lock().unwrap().entry(ct).or_insert(table).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::eval_braid;

    fn rep(s: &str) -> SeminormalRep {
        SeminormalRep::type_a(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn one_dimensional_reps() {
        let triv = rep("2");
        assert_eq!(triv.generator(1).entry(0, 0), RatFn::from_poly(BiLaurent::v()));
        let sign = rep("11");
        assert_eq!(sign.generator(1).entry(0, 0), RatFn::from_poly(BiLaurent::monomial(-1, -1, 0)));
    }

    #[test]
    fn two_dimensional_generator() {
        let r = rep("21");
        assert_eq!(r.dim(), 2);
        let m = r.generator(1);
        let tr = m.trace().unwrap();
        assert_eq!(tr, BiLaurent::v_minus_vinv());
        // characteristic polynomial (x - v)(x + v^-1)
        let q = m.sub_scalar(&BiLaurent::v()).mul(&m.sub_scalar(&BiLaurent::monomial(-1, -1, 0)));
        assert!(q.is_zero());
    }

    #[test]
    fn characters_of_cube() {
        let g = WeylGroup::shared(CartanType::a(1)).unwrap();
        let h = eval_braid(&g, &[1, 1, 1]).unwrap();
        assert_eq!(char_value(&rep("2"), &h).unwrap(), RatFn::from_poly(BiLaurent::monomial(1, 3, 0)));
        assert_eq!(char_value(&rep("11"), &h).unwrap(), RatFn::from_poly(BiLaurent::monomial(-1, -3, 0)));
        let g2 = WeylGroup::shared(CartanType::a(2)).unwrap();
        let one = HeckeElement::one(&g2);
        assert_eq!(char_value(&rep("21"), &one).unwrap(), RatFn::from_poly(BiLaurent::constant(2)));
    }

    #[test]
    fn relations_hold_in_small_ranks() {
        for n in 2..=4 {
            for p in partitions(n) {
                rep(&p.to_string()).check_relations().unwrap();
            }
        }
        for n in 1..=3 {
            for b in bipartitions(n) {
                SeminormalRep::type_b(&b).unwrap().check_relations().unwrap();
            }
        }
    }

    #[test]
    fn broken_generator_is_detected() {
        let mut r = rep("21");
        r.gens[0] = RatMatrix::identity(2);
        assert!(r.check_relations().is_err());
    }

    #[test]
    fn dimensions_square_sum_to_group_order() {
        for ct in [CartanType::a(3), CartanType::b(3)] {
            let total: usize = seminormal_reps(ct).unwrap().iter().map(|r| r.dim() * r.dim()).sum();
            assert_eq!(total as u128, ct.order());
        }
    }
}
