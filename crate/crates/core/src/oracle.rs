//! Brute-force reference computations used to cross-check the main
//! algorithms: the Kazhdan–Lusztig basis from the bar involution alone, and
//! Molien series by direct expansion of `Sym ⊗ Λ`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::charexp::character_table;
use crate::coeff::BiLaurent;
use crate::coxeter::{CartanType, Family, WeylGroup};
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;

fn negative_part(p: &BiLaurent) -> BiLaurent {
    BiLaurent::from_big_terms(p.terms().filter(|(e, _)| e.0 < 0).map(|(&e, c)| (c.clone(), e)))
}

/// `C′_w` as the unique bar-invariant element `σ_w + Σ_{x<w} v^{-1}ℤ[v^{-1}]·σ_x`,
/// solved coefficient by coefficient from `bar(σ_y) = Σ_x r_{x,y} σ_x`.
pub fn kl_basis_by_bar_involution(group: &Arc<WeylGroup>) -> Vec<HeckeElement> {
    let n = group.len();
    let bars: Vec<HeckeElement> = (0..n).map(|y| HeckeElement::basis(group, y).bar()).collect();
    let mut by_length: Vec<usize> = (0..n).collect();
    by_length.sort_by_key(|&x| std::cmp::Reverse(group.length(x)));
    (0..n)
        .map(|w| {
            let mut p: HashMap<usize, BiLaurent> = HashMap::new();
            p.insert(w, BiLaurent::one());
            for &x in &by_length {
                if group.length(x) >= group.length(w) {
                    continue;
                }
                // p_x - bar(p_x) = Σ_{y ≠ x} bar(p_y)·r_{x,y}
                let mut rhs = BiLaurent::zero();
                for (&y, py) in &p {
                    let r = bars[y].coeff(x);
                    if !r.is_zero() {
                        rhs += &(&py.bar() * &r);
                    }
                }
                let px = negative_part(&rhs);
                if !px.is_zero() {
                    p.insert(x, px);
                }
            }
            let mut h = HeckeElement::zero(group);
            for (x, c) in p {
                h.add_term(x, c);
            }
            h
        })
        .collect()
}

type Matrix = Vec<Vec<i64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn generator_matrix(ct: CartanType, s: usize) -> Matrix {
    let n = ct.rank;
    if ct.family == Family::A {
        // s_i(α_j) = α_j - a_ij α_i on simple roots
        let mut m: Matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (j, x) in m[s - 1].iter_mut().enumerate() {
            *x -= match (s - 1).abs_diff(j) {
                0 => 2,
                1 => -1,
                _ => 0,
            };
        }
        m
    } else {
        let perm = ct.generator(s).expect("valid generator");
        let mut m = vec![vec![0; n]; n];
        for (j, &x) in perm.iter().enumerate() {
            m[x.unsigned_abs() as usize - 1][j] = x.signum() as i64;
        }
        m
    }
}

/// Matrix of every group element on the reflection representation.
pub fn reflection_matrices(group: &WeylGroup) -> Vec<Matrix> {
    let ct = group.cartan_type();
    let gens: Vec<Matrix> = (1..=ct.rank).map(|s| generator_matrix(ct, s)).collect();
    (0..group.len())
        .map(|w| {
            let id: Matrix = (0..ct.rank).map(|i| (0..ct.rank).map(|j| i64::from(i == j)).collect()).collect();
            group.word(w).iter().fold(id, |acc, &s| mat_mul(&acc, &gens[s - 1]))
        })
        .collect()
}

type Poly = HashMap<Vec<u32>, i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=degree)
        .flat_map(|first| {
            monomials(vars - 1, degree - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Trace on `Sym^k`: substitute `x_i ↦ Σ_j a_ij x_j` into each monomial and
/// read off the diagonal coefficient.
fn sym_trace(a: &Matrix, k: u32) -> i64 {
    let n = a.len();
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a[j][i] != 0)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    (e, a[j][i])
                })
                .collect()
        })
        .collect();
    monomials(n, k)
        .into_iter()
        .map(|m| {
            let mut p: Poly = [(vec![0; n], 1)].into_iter().collect();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    p = poly_mul(&p, &images[i]);
                }
            }
            p.get(&m).copied().unwrap_or(0)
        })
        .sum()
}

fn det(m: &Matrix) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Matrix = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// Trace on `Λ^j`: the sum of principal `j × j` minors.
fn wedge_trace(a: &Matrix, j: usize) -> i64 {
    let n = a.len();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == j)
        .map(|s| {
            let idx: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
            det(&idx.iter().map(|&r| idx.iter().map(|&c| a[r][c]).collect()).collect())
        })
        .sum()
}

/// `M_ν` truncated at total `v`-degree `max_degree`, from the graded
/// characters of `Sym^k ⊗ Λ^j` (weight `q^k (vt)^j`).
pub fn molien_by_expansion(ct: CartanType, label: &str, max_degree: u32) -> Result<BiLaurent> {
    let group = WeylGroup::shared(ct)?;
    let table = character_table(ct)?;
    let chi = table.index_of(label).ok_or_else(|| Error::Data(format!("{ct} has no character labelled {label:?}")))?;
    let mats = reflection_matrices(&group);
    let mut acc = BiLaurent::zero();
    for (class, members) in table.classes.iter().enumerate() {
        let a = &mats[members[0]];
        let weight = members.len() as i64 * table.values[chi][class];
        if weight == 0 {
            continue;
        }
        for j in 0..=ct.rank.min(max_degree as usize) {
            let lam = wedge_trace(a, j);
            if lam == 0 {
                continue;
            }
            for k in 0..=(max_degree - j as u32) / 2 {
                let c = weight * lam * sym_trace(a, k);
                acc += &BiLaurent::monomial(c, 2 * k as i32 + j as i32, j as i32);
            }
        }
    }
    acc.div_integer(&(group.len() as i64).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charexp::molien;
    use crate::coeff::series_expand;
    use crate::hecke::KLTable;

    #[test]
    fn bar_oracle_matches_kl_table() {
        for ct in [CartanType::a(2), CartanType::b(2)] {
            let g = WeylGroup::shared(ct).unwrap();
            let oracle = kl_basis_by_bar_involution(&g);
            let mut kl = KLTable::new(ct).unwrap();
            for (w, c) in oracle.iter().enumerate() {
                assert_eq!(kl.basis_element(w), c, "{ct} {:?}", g.word(w));
            }
        }
    }

    #[test]
    fn sym_and_wedge_traces_of_identity() {
        let id: Matrix = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(sym_trace(&id, 3), 4);
        assert_eq!(wedge_trace(&id, 1), 2);
        assert_eq!(wedge_trace(&id, 2), 1);
    }

    #[test]
    fn reflections_have_determinant_minus_one() {
        for ct in [CartanType::a(3), CartanType::b(3), CartanType::d(4)] {
            for s in 1..=ct.rank {
                assert_eq!(det(&generator_matrix(ct, s)), -1, "{ct} s{s}");
            }
        }
    }

    #[test]
    fn rank_one_expansion() {
        let triv = molien_by_expansion(CartanType::a(1), "2", 10).unwrap();
        // (1 + v^3 t)/(1 - v^4)
        let want = BiLaurent::from_terms([(1, 0, 0), (1, 4, 0), (1, 8, 0), (1, 3, 1), (1, 7, 1)]);
        assert_eq!(triv, want);
        let m = molien(CartanType::a(2), "21").unwrap().value;
        assert_eq!(molien_by_expansion(CartanType::a(2), "21", 10).unwrap(), series_expand(&m, 10).unwrap().to_poly());
    }
}
