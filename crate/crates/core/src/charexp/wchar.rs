use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::partition::{bipartitions, BiPartition};
use super::seminormal::hecke_character_table;
use crate::coxeter::{CartanType, Family, WeylElement, WeylGroup};
use crate::error::{Error, Result};

/// Ordinary character table of a Weyl group.
///
/// Classes are ordered by their smallest element index, so the identity
/// class comes first.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub ct: CartanType,
    pub labels: Vec<String>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `values[χ][class]`
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, chi: usize) -> i64 {
        self.values[chi][0]
    }

    pub fn value(&self, chi: usize, w: usize) -> i64 {
        self.values[chi][self.class_of[w]]
    }

    /// `⟨χ_i, χ_j⟩ = δ_ij` for all pairs.
    pub fn is_orthonormal(&self) -> bool {
        let order: i64 = self.classes.iter().map(|c| c.len() as i64).sum();
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| {
                let s: i64 = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(c, cl)| cl.len() as i64 * self.values[i][c] * self.values[j][c])
                    .sum();
                s == if i == j { order } else { 0 }
            })
        })
    }
}

/// Conjugacy classes, each sorted, listed by smallest element.
pub fn conjugacy_classes(group: &WeylGroup) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut class_of = vec![usize::MAX; group.len()];
    let mut classes = Vec::new();
    for start in 0..group.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![start];
        class_of[start] = id;
        let mut i = 0;
        while i < members.len() {
            let g = members[i];
            for s in 1..=group.rank() {
                let h = group.right_gen(group.left_gen(s, g), s);
                if class_of[h] == usize::MAX {
                    class_of[h] = id;
                    members.push(h);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    (classes, class_of)
}

pub fn character_table(ct: CartanType) -> Result<Arc<CharacterTable>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&ct) {
        return Ok(t.clone());
    }
    let table = Arc::new(match ct.family {
        Family::A | Family::B => specialized_table(ct)?,
        Family::D => type_d_table(ct)?,
    });
    if !table.is_orthonormal() {
        return Err(Error::Data(format!("character table of {ct} fails orthogonality")));
    }
    Ok(cache.lock().unwrap().entry(ct).or_insert(table).clone())
}

/// Hecke characters at `v = 1`.
fn specialized_table(ct: CartanType) -> Result<CharacterTable> {
    let group = WeylGroup::shared(ct)?;
    let (classes, class_of) = conjugacy_classes(&group);
    let hecke = hecke_character_table(ct)?;
    let values = hecke
        .values
        .iter()
        .map(|row| {
            classes
                .iter()
                .map(|c| {
                    let x = row[c[0]].at_v_one();
                    if x.len() > 1 || x.min_t().is_some_and(|e| e != 0) {
                        return Err(Error::Data(format!("character of {ct} depends on t")));
                    }
                    x.coeff(0, 0).to_i64().ok_or_else(|| Error::Data("character value overflow".into()))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterTable { ct, labels: hecke.labels.clone(), classes, class_of, values })
}

fn type_d_table(ct: CartanType) -> Result<CharacterTable> {
    let group = WeylGroup::shared(ct)?;
    let (classes, class_of) = conjugacy_classes(&group);
    let chars = burnside_characters(&group, &classes, &class_of)?;
    let n = ct.rank;
    let bct = CartanType::b(n);
    let bgroup = WeylGroup::shared(bct)?;
    let btable = character_table(bct)?;
    let reps_in_b = classes
        .iter()
        .map(|c| {
            let perm = group.element(c[0]).perm().to_vec();
            let e = WeylElement::from_perm(bct, perm)?;
            bgroup.index_of(&e).ok_or_else(|| Error::Data("D element missing from B".into()))
        })
        .collect::<Result<Vec<usize>>>()?;
    let order = group.len() as i64;
    let inner = |a: &[i64], b: &[i64]| -> i64 {
        classes.iter().enumerate().map(|(j, c)| c.len() as i64 * a[j] * b[j]).sum::<i64>() / order
    };
    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut used = vec![false; chars.len()];
    let mut seen = std::collections::HashSet::new();
    for bp in bipartitions(n) {
        if seen.contains(&BiPartition(bp.1.clone(), bp.0.clone())) {
            continue;
        }
        seen.insert(bp.clone());
        let chi = btable.index_of(&bp.to_string()).expect("bipartition label");
        let restricted: Vec<i64> = reps_in_b.iter().map(|&b| btable.value(chi, b)).collect();
        let parts: Vec<usize> = (0..chars.len()).filter(|&k| inner(&restricted, &chars[k]) > 0).collect();
        match parts.as_slice() {
            [k] if bp.0 != bp.1 => {
                used[*k] = true;
                labels.push(bp.to_string());
                values.push(chars[*k].clone());
            }
            [a, b] if bp.0 == bp.1 => {
                let (x, y) = (&chars[*a], &chars[*b]);
                let first = x.iter().zip(y).position(|(p, q)| p != q).expect("distinct characters");
                let (plus, minus) = if x[first] > y[first] { (x, y) } else { (y, x) };
                used[*a] = true;
                used[*b] = true;
                labels.push(format!("{}.+", bp.0));
                values.push(plus.clone());
                labels.push(format!("{}.-", bp.0));
                values.push(minus.clone());
            }
            _ => return Err(Error::Data(format!("restriction of {bp} to {ct} has unexpected shape"))),
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::Data(format!("unlabelled characters of {ct}")));
    }
    Ok(CharacterTable { ct, labels, classes, class_of, values })
}

const P: i128 = 2_147_483_647;

fn mod_p(x: &BigRational) -> i128 {
    let m = BigInt::from(P);
    let n = (x.numer() % &m + &m) % &m;
    let d = (x.denom() % &m + &m) % &m;
    let (n, d) = (n.to_i128().unwrap(), d.to_i128().unwrap());
    n * inv_mod(d) % P
}

fn inv_mod(a: i128) -> i128 {
    let (mut base, mut e, mut acc) = (a.rem_euclid(P), P - 2, 1i128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    acc
}

/// Rank of the columns `cols` modulo `P`.
fn rank_mod_p(cols: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<i128>> = cols.iter().map(|c| c.iter().map(mod_p).collect()).collect();
    let rows = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for r in 0..rows {
        let Some(p) = (rank..m.len()).find(|&i| m[i][r] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = inv_mod(m[rank][r]);
        let pivot = m[rank].clone();
        for (i, line) in m.iter_mut().enumerate() {
            if i != rank && line[r] != 0 {
                let f = line[r] * inv % P;
                for (x, &p) in line[r..rows].iter_mut().zip(&pivot[r..rows]) {
                    *x = (*x - f * p).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of `{x : Σ_b x_b·cols[b] = 0}`.
fn nullspace(cols: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = cols.len();
    let rows = cols.first().map_or(0, Vec::len);
    // rows of the k × d matrix
    let mut m: Vec<Vec<BigRational>> = (0..rows).map(|r| (0..d).map(|b| cols[b][r].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..d {
        let Some(p) = (row..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = m[row].clone();
        for (i, line) in m.iter_mut().enumerate() {
            if i != row && !line[c].is_zero() {
                let f = line[c].clone();
                for (x, p) in line.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    (0..d)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![BigRational::zero(); d];
            x[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][free].clone();
            }
            x
        })
        .collect()
}

/// Irreducible characters by simultaneous diagonalization of the class
/// multiplication matrices. Central characters are integers for Weyl groups.
pub fn burnside_characters(group: &WeylGroup, classes: &[Vec<usize>], class_of: &[usize]) -> Result<Vec<Vec<i64>>> {
    let k = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    // a[i][j][l] = #{x in C_i : x^-1 g_l in C_j}
    let mut a = vec![vec![vec![0i64; k]; k]; k];
    for (i, ci) in classes.iter().enumerate() {
        for &x in ci {
            let xinv = group.inverse(x);
            for (l, &g) in reps.iter().enumerate() {
                a[i][class_of[group.mul(xinv, g)]][l] += 1;
            }
        }
    }
    let unit =
        |j: usize| (0..k).map(|r| if r == j { BigRational::one() } else { BigRational::zero() }).collect::<Vec<_>>();
    let mut spaces: Vec<Vec<Vec<BigRational>>> = vec![(0..k).map(unit).collect()];
    for (i, ai) in a.iter().enumerate().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let h = classes[i].len() as i64;
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let image: Vec<Vec<BigRational>> = space
                .iter()
                .map(|b| {
                    (0..k).map(|j| (0..k).map(|l| BigRational::from_integer(ai[j][l].into()) * &b[l]).sum()).collect()
                })
                .collect();
            let mut found = 0;
            for lambda in -h..=h {
                let lam = BigRational::from_integer(lambda.into());
                let shifted: Vec<Vec<BigRational>> = image
                    .iter()
                    .zip(&space)
                    .map(|(ib, b)| ib.iter().zip(b).map(|(x, y)| x - &lam * y).collect())
                    .collect();
                if rank_mod_p(&shifted) == space.len() {
                    continue;
                }
                let null = nullspace(&shifted);
                if null.is_empty() {
                    continue;
                }
                found += null.len();
                next.push(
                    null.iter()
                        .map(|c| (0..k).map(|r| c.iter().zip(&space).map(|(x, b)| x * &b[r]).sum()).collect())
                        .collect(),
                );
            }
            if found != space.len() {
                return Err(Error::Data("class algebra is not split over the integers".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(Error::Data("class sums do not separate characters".into()));
    }
    let order = BigRational::from_integer(group.len().into());
    let mut out = Vec::new();
    for space in spaces {
        let b = &space[0];
        let omega: Vec<BigRational> = b.iter().map(|x| x / &b[0]).collect();
        let norm: BigRational =
            omega.iter().zip(classes).map(|(w, c)| w * w / BigRational::from_integer(c.len().into())).sum();
        let deg2 = &order / norm;
        if !deg2.is_integer() {
            return Err(Error::Data("non-integral character degree".into()));
        }
        let deg = deg2.to_integer().sqrt();
        if &deg * &deg != deg2.to_integer() {
            return Err(Error::Data("character degree is not a square root".into()));
        }
        let row = omega
            .iter()
            .zip(classes)
            .map(|(w, c)| {
                let x = w * BigRational::from_integer(deg.clone()) / BigRational::from_integer(c.len().into());
                if x.is_integer() {
                    x.to_integer().to_i64().ok_or_else(|| Error::Data("character value overflow".into()))
                } else {
                    Err(Error::Data("non-integral character value".into()))
                }
            })
            .collect::<Result<Vec<i64>>>()?;
        out.push(row);
    }
    out.sort_by(|x, y| y.cmp(x));
    debug_assert!(out.iter().all(|r| r[0] > 0));
    Ok(out)
}
