use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::BiLaurent;
use crate::error::{Error, Result};

/// A fraction of two [`BiLaurent`] polynomials.
///
/// Fractions are not reduced to lowest terms; equality is decided by
/// cross-multiplication.
#[derive(Clone)]
pub struct RatFn {
    num: BiLaurent,
    den: BiLaurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFn {
    pub fn new(num: BiLaurent, den: BiLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: BiLaurent) -> Self {
        Self { num: p, den: BiLaurent::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(BiLaurent::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BiLaurent::one())
    }

    /// `z = (1 + v t) / (1 - q)`, the value of the trace on the unit of rank one.
    pub fn z() -> Self {
        Self { num: BiLaurent::from_terms([(1, 0, 0), (1, 1, 1)]), den: BiLaurent::one_minus_q() }
    }

    /// `num / (1 - q)^k`.
    pub fn over_one_minus_q(num: BiLaurent, k: u32) -> Self {
        Self { num, den: BiLaurent::one_minus_q().pow(k) }
    }

    pub fn num(&self) -> &BiLaurent {
        &self.num
    }

    pub fn den(&self) -> &BiLaurent {
        &self.den
    }

    pub fn into_parts(self) -> (BiLaurent, BiLaurent) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
            ArithOp::Div => self.div(other)?,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num: &self.num * &other.den, den: &self.den * &other.num })
    }

    pub fn scale(&self, c: &BiLaurent) -> Self {
        Self { num: &self.num * c, den: self.den.clone() }
    }

    /// Applies a monomial substitution to numerator and denominator.
    pub fn map_monomials<F>(&self, f: F) -> Self
    where
        F: Fn(i32, i32) -> (bool, i32, i32),
    {
        Self { num: self.num.map_monomials(&f), den: self.den.map_monomials(&f) }
    }

    /// Returns the polynomial if the fraction is one, dividing exactly.
    pub fn as_poly(&self) -> Option<BiLaurent> {
        self.num.exact_div(&self.den).ok()
    }

    /// Cancels common `(1 - q)` factors, monomial factors and integer content,
    /// and makes the lowest denominator coefficient positive.
    ///
    /// This is not a full gcd reduction; it suffices for the fractions whose
    /// denominators are products of `(1 - q)` and units.
    pub fn normalized(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if let Ok(p) = self.num.exact_div(&self.den) {
            return Self::from_poly(p);
        }
        let (kn, mut num) = self.num.strip_one_minus_q();
        let (kd, mut den) = self.den.strip_one_minus_q();
        let common = kn.min(kd);
        let f = BiLaurent::one_minus_q();
        num = &num * &f.pow(kn - common);
        den = &den * &f.pow(kd - common);
        let g = num_integer::Integer::gcd(&num.content(), &den.content());
        if !g.is_one() {
            num = num.div_integer(&g).unwrap();
            den = den.div_integer(&g).unwrap();
        }
        // move the denominator's monomial factor into the numerator
        let (dv, dt) = (den.min_v().unwrap(), den.min_t().unwrap());
        den = den.shift(-dv, -dt);
        num = num.shift(-dv, -dt);
        let lowest = den.terms().next().map(|(_, c)| c.clone()).unwrap();
        if lowest.is_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    /// `normalized`, after cancelling the cyclotomic factors `Φ_m(q)` common to
    /// numerator and denominator. Suited to denominators built from `1 - q^d`.
    pub fn reduced(&self) -> Self {
        let base = self.normalized();
        let (mut num, mut den) = (base.num, base.den);
        if num.is_zero() || den.terms().any(|(&(_, et), _)| et != 0) {
            return Self { num, den };
        }
        let span = (den.max_v().unwrap() - den.min_v().unwrap()) / 2;
        let mut cyclo: Vec<BiLaurent> = Vec::new();
        for m in 1..=span.max(0) as usize {
            // q^m - 1 = Π_{d | m} Φ_d(q)
            let mut phi = &BiLaurent::monomial(1, 2 * m as i32, 0) - &BiLaurent::one();
            for d in 1..m {
                if m % d == 0 {
                    phi = phi.exact_div(&cyclo[d - 1]).expect("cyclotomic factor");
                }
            }
            cyclo.push(phi.clone());
            while let (Ok(d), Ok(n)) = (den.exact_div(&phi), num.exact_div(&phi)) {
                den = d;
                num = n;
            }
        }
        Self { num, den }.normalized()
    }

    /// Exact value modulo a prime at `(v, t)`, or `None` if the denominator vanishes there.
    pub fn eval_mod(&self, v: u64, t: u64, p: u64) -> Option<u64> {
        let d = self.den.eval_mod(v, t, p);
        if d == 0 {
            return None;
        }
        let n = self.num.eval_mod(v, t, p);
        Some(super::laurent::mul_mod(n, super::laurent::pow_mod(d, p - 2, p), p))
    }

    pub fn display_with(&self, x: &str, y: &str) -> String {
        let r = self.normalized();
        if r.den.is_one() {
            return r.num.display_with(x, y);
        }
        let wrap = |p: &BiLaurent| {
            let s = p.display_with(x, y);
            if p.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&r.num), wrap(&r.den))
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFn {}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("v", "t"))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn(({}) / ({}))", self.num, self.den)
    }
}

impl From<BiLaurent> for RatFn {
    fn from(p: BiLaurent) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RatFn { num: &self.num * &rhs.den + &rhs.num * &self.den, den: &self.den * &rhs.den }
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl std::iter::Sum for RatFn {
    fn sum<I: Iterator<Item = RatFn>>(iter: I) -> Self {
        iter.fold(RatFn::zero(), |a, b| &a + &b)
    }
}

/// Sums fractions sharing the same denominator base, `Σ a_k / base^{e_k}`,
/// over the single denominator `base^{max e_k}`.
pub fn sum_over_powers(terms: &[(BiLaurent, u32)], base: &BiLaurent) -> RatFn {
    let top = terms.iter().map(|(_, e)| *e).max().unwrap_or(0);
    let mut num = BiLaurent::zero();
    for (a, e) in terms {
        num += &(a * &base.pow(top - e));
    }
    RatFn { num, den: base.pow(top) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BiLaurent {
        BiLaurent::q()
    }

    #[test]
    fn reduced_cancels_cyclotomic_factors() {
        // (1 + q)(1 + vt) / ((1 - q^2)(1 - q^4)) = (1 + vt) / ((1 - q)(1 - q^4))
        let one_plus_q = &BiLaurent::one() + &q();
        let vt = BiLaurent::monomial(1, 1, 1);
        let num = &one_plus_q * &(&BiLaurent::one() + &vt);
        let den = &(&BiLaurent::one() - &q().pow(2)) * &(&BiLaurent::one() - &q().pow(4));
        let f = RatFn::new(num, den).unwrap();
        let r = f.reduced();
        assert_eq!(r, f);
        assert_eq!(r.den().max_v(), Some(10));
        let p = RatFn::new(&BiLaurent::one() - &q().pow(3), BiLaurent::one_minus_q()).unwrap();
        assert_eq!(p.reduced().as_poly(), Some(&(&BiLaurent::one() + &q()) + &q().pow(2)));
    }

    #[test]
    fn telescoping_sum_is_one() {
        let a = RatFn::new(BiLaurent::one(), BiLaurent::one_minus_q()).unwrap();
        let b = RatFn::new(-q(), BiLaurent::one_minus_q()).unwrap();
        assert_eq!(&a + &b, RatFn::one());
    }

    #[test]
    fn cancel_denominator() {
        let z = RatFn::z();
        let prod = &z * &RatFn::from_poly(BiLaurent::one_minus_q());
        assert_eq!(prod, RatFn::from_poly(BiLaurent::from_terms([(1, 0, 0), (1, 1, 1)])));
        assert!(prod.normalized().den().is_one());
    }

    #[test]
    fn self_difference_is_zero() {
        let z = RatFn::z();
        assert!((&z - &z).is_zero());
        assert_eq!(&z - &z, RatFn::zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let z = RatFn::z();
        assert_eq!(z.arith(&RatFn::zero(), ArithOp::Div).unwrap_err(), Error::DivisionByZero);
        assert!(RatFn::new(BiLaurent::one(), BiLaurent::zero()).is_err());
    }

    #[test]
    fn normalized_display_matches_reference_form() {
        // (v^-1 + q t) / (1 - q), written with an extra common factor
        let num = BiLaurent::from_terms([(1, -1, 0), (1, 2, 1)]);
        let f = RatFn::new(&num * &BiLaurent::one_minus_q(), BiLaurent::one_minus_q().pow(2)).unwrap();
        assert_eq!(f.to_string(), "(v^-1 + v^2 t)/(1 - v^2)");
    }
}
