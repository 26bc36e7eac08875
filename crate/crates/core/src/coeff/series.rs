use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{BiLaurent, RatFn};
use crate::error::{Error, Result};

/// A truncated Laurent expansion in `v` whose coefficients are polynomials in `t`.
///
/// `coeffs[k]` is the coefficient of `v^(lead + k)`; the window covers all
/// exponents up to and including `cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesWindow {
    pub lead: i32,
    /// `t`-polynomials, stored as [`BiLaurent`] with `e_v = 0`.
    pub coeffs: Vec<BiLaurent>,
    pub cutoff: i32,
}

impl SeriesWindow {
    pub fn coeff(&self, k: i32) -> BiLaurent {
        if k < self.lead || k > self.cutoff {
            return BiLaurent::zero();
        }
        self.coeffs.get((k - self.lead) as usize).cloned().unwrap_or_default()
    }

    /// `Σ coeffs[k] v^(lead + k)` as a polynomial.
    pub fn to_poly(&self) -> BiLaurent {
        let mut out = BiLaurent::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out += &c.shift(self.lead + k as i32, 0);
        }
        out
    }
}

/// Expands `f` as a Laurent series in `v` through the exponent `cutoff`.
///
/// After shifting the denominator so that its lowest `v`-exponent is zero,
/// its `v^0` coefficient must be a nonzero integer.
pub fn series_expand(f: &RatFn, cutoff: i32) -> Result<SeriesWindow> {
    let (num, den) = (f.num(), f.den());
    let dmin = den.min_v().ok_or(Error::DivisionByZero)?;
    let den = den.shift(-dmin, 0);
    let num = num.shift(-dmin, 0);
    let d0 = den.v_coeff(0);
    if d0.len() != 1 || d0.coeff(0, 0).is_zero() {
        let lowest = d0.shift(dmin, 0);
        return Err(Error::NotInvertible(lowest.to_string()));
    }
    let d0 = d0.coeff(0, 0);
    let Some(lead) = num.min_v() else {
        return Ok(SeriesWindow { lead: cutoff + 1, coeffs: Vec::new(), cutoff });
    };
    let dmax = den.max_v().unwrap();
    let den_parts: Vec<(i32, BiLaurent)> =
        (1..=dmax).map(|j| (j, den.v_coeff(j))).filter(|(_, c)| !c.is_zero()).collect();
    let mut coeffs: Vec<BiLaurent> = Vec::new();
    let mut k = lead;
    while k <= cutoff {
        let mut acc = num.v_coeff(k);
        for (j, dj) in &den_parts {
            let idx = k - j - lead;
            if idx >= 0 {
                acc -= &(dj * &coeffs[idx as usize]);
            }
        }
        coeffs.push(div_exact_int(&acc, &d0)?);
        k += 1;
    }
    Ok(SeriesWindow { lead, coeffs, cutoff })
}

fn div_exact_int(p: &BiLaurent, d: &BigInt) -> Result<BiLaurent> {
    if d == &BigInt::from(1) {
        return Ok(p.clone());
    }
    for (_, c) in p.terms() {
        if !c.is_multiple_of(d) {
            return Err(Error::InexactDivision(format!("series coefficient {p} is not divisible by {d}")));
        }
    }
    p.div_integer(d)
}
