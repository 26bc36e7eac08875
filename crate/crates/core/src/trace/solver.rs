//! Exact solution of the trace axioms as a linear system.
//!
//! Unknowns are the numerators `X_w = Tr(σ_w)·(1 - q)^n`, so every equation
//! has polynomial coefficients. The system is first checked modulo a prime at
//! a random point, then eliminated symbolically (Gauss-Jordan, preferring
//! pivots that are units `±v^k`, fraction-free otherwise).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::MarkovParams;
use crate::coeff::{BiLaurent, RatFn};
use crate::coxeter::{CartanType, Family, WeylGroup};
use crate::error::{Error, Result};
use crate::hecke::{eval_braid, HeckeElement};

/// Largest group order the solver accepts.
pub const SOLVER_MAX_ORDER: usize = 400;

const PRIME: u64 = 2_147_483_647;

/// Trace values `Tr(σ_w)` for every element of a Weyl group.
#[derive(Clone, Debug)]
pub struct TraceTable {
    group: Arc<WeylGroup>,
    y: BiLaurent,
    nums: Vec<BiLaurent>,
}

impl TraceTable {
    pub fn cartan_type(&self) -> CartanType {
        self.group.cartan_type()
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn y(&self) -> &BiLaurent {
        &self.y
    }

    /// `Tr(σ_w)·(1 - q)^rank`.
    pub fn numerator(&self, w: usize) -> &BiLaurent {
        &self.nums[w]
    }

    pub fn value(&self, w: usize) -> RatFn {
        RatFn::over_one_minus_q(self.nums[w].clone(), self.group.rank() as u32)
    }

    pub fn evaluate_numerator(&self, h: &HeckeElement) -> Result<BiLaurent> {
        if h.cartan_type() != self.cartan_type() {
            return Err(Error::TypeMismatch(h.cartan_type().name(), self.cartan_type().name()));
        }
        let mut acc = BiLaurent::zero();
        for (w, c) in h.terms() {
            acc += &(c * &self.nums[w]);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, h: &HeckeElement) -> Result<RatFn> {
        Ok(RatFn::over_one_minus_q(self.evaluate_numerator(h)?, self.group.rank() as u32))
    }

    /// `[{"w": [..], "value": {"num": .., "den": ..}}, ...]` in enumeration order.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.group.len())
            .map(|w| json!({"w": self.group.word(w), "value": self.value(w).normalized().to_json()}))
            .collect();
        Value::Array(rows)
    }
}

/// The word of the extra element carrying the parameter `y`, if the type has
/// one at this rank: `T_{n-1}` in type B, `U` at even rank `≥ 4` in type D.
pub fn special_word(ct: CartanType) -> Option<Vec<i64>> {
    let n = ct.rank as i64;
    match ct.family {
        Family::B => {
            let mut w: Vec<i64> = (1..=n).rev().collect();
            w.extend(2..=n);
            let k = n as usize;
            for x in &mut w[k..] {
                *x = -*x;
            }
            Some(w)
        }
        Family::D if n >= 4 && n % 2 == 0 => {
            let mut w: Vec<i64> = (3..=n).rev().collect();
            w.extend([1, 2]);
            w.extend((3..=n).map(|s| -s));
            Some(w)
        }
        _ => None,
    }
}

fn applies_stabilization(ct: CartanType) -> bool {
    !(ct.family == Family::B && ct.rank == 1)
}

type TableCache = Mutex<HashMap<(CartanType, BiLaurent), Arc<TraceTable>>>;

/// The unique trace table with parameter `y` and the geometric constants,
/// cached for the lifetime of the process.
pub fn solve_trace(ct: CartanType, y: &BiLaurent) -> Result<Arc<TraceTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (ct, y.clone());
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let lower = match ct.parabolic() {
        Some(p) => Some(solve_trace(p, y)?),
        None => None,
    };
    let table = Arc::new(solve_level(ct, y, &MarkovParams::geometric(), lower.as_deref())?);
    Ok(cache.lock().unwrap().entry(key).or_insert(table).clone())
}

/// Solves the whole tower up to `ct` with explicit Markov constants.
pub fn solve_trace_with(ct: CartanType, y: &BiLaurent, params: &MarkovParams) -> Result<TraceTable> {
    let lower = match ct.parabolic() {
        Some(p) => Some(solve_trace_with(p, y, params)?),
        None => None,
    };
    solve_level(ct, y, params, lower.as_ref())
}

struct Row {
    coeffs: BTreeMap<usize, BiLaurent>,
    rhs: BiLaurent,
}

impl Row {
    fn new() -> Self {
        Self { coeffs: BTreeMap::new(), rhs: BiLaurent::zero() }
    }

    fn add(&mut self, col: usize, c: BiLaurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(col).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.coeffs.remove(&col);
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.rhs.is_zero()
    }

    /// `a·self - b·other`
    fn combine(&self, a: &BiLaurent, other: &Row, b: &BiLaurent) -> Row {
        let mut out = Row::new();
        for (&k, c) in &self.coeffs {
            out.add(k, c * a);
        }
        for (&k, c) in &other.coeffs {
            out.add(k, -(c * b));
        }
        out.rhs = &(&self.rhs * a) - &(&other.rhs * b);
        out
    }
}

fn build_equations(
    ct: CartanType,
    group: &Arc<WeylGroup>,
    y: &BiLaurent,
    params: &MarkovParams,
    lower: Option<&TraceTable>,
) -> Result<Vec<Row>> {
    let n = ct.rank;
    let one_minus_q = BiLaurent::one_minus_q();
    let lower_values: Vec<(Vec<usize>, BiLaurent)> = match lower {
        Some(t) => (0..t.group.len()).map(|w| (t.group.word(w).to_vec(), t.nums[w].clone())).collect(),
        None => vec![(Vec::new(), BiLaurent::one())],
    };
    let special = match special_word(ct) {
        Some(word) => Some(eval_braid(group, &word)?),
        None => None,
    };
    let mut rows = Vec::new();
    for (word, value) in &lower_values {
        let w = group.index_of_word(word)?;
        let mut r = Row::new();
        r.add(w, BiLaurent::one());
        r.rhs = &params.tower_numerator() * value;
        rows.push(r);
        if applies_stabilization(ct) {
            let mut r = Row::new();
            r.add(group.left_gen(n, w), BiLaurent::one());
            r.rhs = &(&params.stab * &one_minus_q) * value;
            rows.push(r);
        }
        if let Some(sp) = &special {
            let h = sp * &HeckeElement::basis(group, w);
            let mut r = Row::new();
            for (x, c) in h.terms() {
                r.add(x, c.clone());
            }
            r.rhs = &(y * &one_minus_q) * value;
            rows.push(r);
        }
    }
    let corr = BiLaurent::v_minus_vinv();
    for w in 0..group.len() {
        let lw = group.length(w);
        for s in 1..=n {
            let (sw, ws) = (group.left_gen(s, w), group.right_gen(w, s));
            let mut r = Row::new();
            r.add(sw, BiLaurent::one());
            r.add(ws, -BiLaurent::one());
            let d = i64::from(group.length(sw) < lw) - i64::from(group.length(ws) < lw);
            r.add(w, corr.scale(&d.into()));
            if !r.is_trivial() {
                rows.push(r);
            }
        }
    }
    Ok(rows)
}

/// Rank of the coefficient matrix and of the augmented matrix modulo a prime,
/// at a pseudo-random point.
fn modular_ranks(rows: &[Row], unknowns: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = rng.gen_range(2..PRIME);
    let t = rng.gen_range(2..PRIME);
    let p = PRIME;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut rank = 0;
    let mut aug_rank = 0;
    for row in rows {
        let mut dense = vec![0u64; unknowns + 1];
        for (&k, c) in &row.coeffs {
            dense[k] = c.eval_mod(v, t, p);
        }
        dense[unknowns] = row.rhs.eval_mod(v, t, p);
        for (col, b) in &basis {
            let f = dense[*col];
            if f != 0 {
                for (x, y) in dense.iter_mut().zip(b) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        let Some(col) = dense.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = pow_mod(dense[col], p - 2, p);
        for x in dense.iter_mut() {
            *x = *x * inv % p;
        }
        if col < unknowns {
            rank += 1;
        }
        aug_rank += 1;
        basis.push((col, dense));
    }
    (rank, aug_rank)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn solve_level(ct: CartanType, y: &BiLaurent, params: &MarkovParams, lower: Option<&TraceTable>) -> Result<TraceTable> {
    let order = ct.order();
    if order > SOLVER_MAX_ORDER as u128 {
        return Err(Error::GroupTooLarge { name: ct.name(), order, bound: SOLVER_MAX_ORDER });
    }
    let group = WeylGroup::shared(ct)?;
    let unknowns = group.len();
    let rows = build_equations(ct, &group, y, params, lower)?;

    let (rank, aug_rank) = (0..2).map(|seed| modular_ranks(&rows, unknowns, 0x5eed + seed)).max().unwrap();
    if aug_rank > rank {
        return Err(Error::Inconsistent {
            name: ct.name(),
            detail: "the trace conditions contradict each other".into(),
        });
    }
    if rank < unknowns {
        return Err(Error::RankDefect { name: ct.name(), defect: unknowns - rank, unknowns });
    }

    let nums = eliminate(ct, rows, unknowns)?;
    Ok(TraceTable { group, y: y.clone(), nums })
}

/// Streaming Gauss-Jordan elimination; returns the solution numerators.
fn eliminate(ct: CartanType, rows: Vec<Row>, unknowns: usize) -> Result<Vec<BiLaurent>> {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for mut row in rows {
        // reduce against the current pivots
        let hits: Vec<usize> = row.coeffs.keys().copied().filter(|k| pivots.contains_key(k)).collect();
        for col in hits {
            let Some(c) = row.coeffs.get(&col).cloned() else {
                continue;
            };
            let prow = &pivots[&col];
            let p = &prow.coeffs[&col];
            row = match c.exact_div(p) {
                Ok(f) => row.combine(&BiLaurent::one(), prow, &f),
                Err(_) => row.combine(p, prow, &c),
            };
        }
        if row.coeffs.is_empty() {
            if !row.rhs.is_zero() {
                return Err(Error::Inconsistent {
                    name: ct.name(),
                    detail: "an equation reduced to 0 = nonzero".into(),
                });
            }
            continue;
        }
        let col = row
            .coeffs
            .iter()
            .filter(|(_, c)| c.is_unit())
            .map(|(k, _)| *k)
            .next()
            .unwrap_or_else(|| *row.coeffs.iter().min_by_key(|(_, c)| c.len()).unwrap().0);
        let p = row.coeffs[&col].clone();
        // clear the new pivot column from earlier pivot rows
        for other in pivots.values_mut() {
            let Some(c) = other.coeffs.get(&col).cloned() else {
                continue;
            };
            *other = match c.exact_div(&p) {
                Ok(f) => other.combine(&BiLaurent::one(), &row, &f),
                Err(_) => other.combine(&p, &row, &c),
            };
        }
        pivots.insert(col, row);
    }
    if pivots.len() < unknowns {
        return Err(Error::RankDefect { name: ct.name(), defect: unknowns - pivots.len(), unknowns });
    }
    let mut nums = vec![BiLaurent::zero(); unknowns];
    for (col, row) in pivots {
        debug_assert_eq!(row.coeffs.len(), 1);
        nums[col] = row
            .rhs
            .exact_div(&row.coeffs[&col])
            .map_err(|_| Error::Unsupported(format!("trace of {} is not polynomial over (1 - q)^rank", ct.name())))?;
    }
    Ok(nums)
}
