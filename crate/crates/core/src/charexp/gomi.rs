use num_rational::BigRational;
use num_traits::Zero;

use super::fourier::{fourier_block, FourierBlock};
use super::molien::molien_all;
use super::seminormal::hecke_character_table;
use crate::coeff::{BiLaurent, RatFn};
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;

fn scale_rational(f: &RatFn, c: &BigRational) -> RatFn {
    let num = f.num() * &BiLaurent::from_bigint(c.numer().clone());
    let den = f.den() * &BiLaurent::from_bigint(c.denom().clone());
    RatFn::new(num, den).expect("nonzero denominator")
}

/// `Tr(h) = Σ_χ χ_q(h) Σ_χ′ {χ′, χ} M_χ′`.
pub fn gomi_trace_with(h: &HeckeElement, fourier: &FourierBlock) -> Result<RatFn> {
    let ct = h.cartan_type();
    if fourier.ct != ct {
        return Err(Error::TypeMismatch(fourier.ct.name(), ct.name()));
    }
    let chars = hecke_character_table(ct)?;
    let molien = molien_all(ct)?;
    let position = |label: &str| {
        fourier.labels.iter().position(|l| l == label).ok_or_else(|| Error::Data(format!("Fourier data lacks {label}")))
    };
    // weight of χ: Σ_χ′ {χ′, χ} M_χ′
    let mut total = RatFn::zero();
    for (chi, label) in chars.labels.iter().enumerate() {
        let value = chars.value(chi, h);
        if value.is_zero() {
            continue;
        }
        let col = position(label)?;
        let mut weight = RatFn::zero();
        for m in molien.iter() {
            let c = &fourier.matrix[position(&m.label)?][col];
            if !c.is_zero() {
                weight = &weight + &scale_rational(&m.value, c);
            }
        }
        total = &total + &weight.scale(&value);
    }
    Ok(total.reduced())
}

/// [`gomi_trace_with`] using the default Fourier block of the type.
pub fn gomi_trace(h: &HeckeElement) -> Result<RatFn> {
    gomi_trace_with(h, &fourier_block(h.cartan_type(), None)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CartanType, WeylGroup};
    use crate::hecke::KLTable;
    use crate::trace::geometric_trace;

    #[test]
    fn rank_one_values() {
        let g = WeylGroup::shared(CartanType::a(1)).unwrap();
        let s = HeckeElement::basis(&g, 1);
        assert_eq!(gomi_trace(&s).unwrap(), RatFn::from_poly(-BiLaurent::t()));
        assert_eq!(gomi_trace(&HeckeElement::one(&g)).unwrap(), RatFn::z());
    }

    #[test]
    fn agrees_with_geometric_trace_on_kl_basis_of_a2() {
        let mut kl = KLTable::new(CartanType::a(2)).unwrap();
        for w in 0..kl.group().len() {
            let c = kl.basis_element(w).clone();
            assert_eq!(gomi_trace(&c).unwrap(), geometric_trace(&c).unwrap());
        }
    }

    #[test]
    fn bundled_b2_block_matches_solver() {
        let g = WeylGroup::shared(CartanType::b(2)).unwrap();
        let identity = FourierBlock::identity(CartanType::b(2)).unwrap();
        let mut identity_fails = 0;
        for w in 0..g.len() {
            let h = HeckeElement::basis(&g, w);
            let geo = geometric_trace(&h).unwrap();
            assert_eq!(gomi_trace(&h).unwrap(), geo, "{:?}", g.word(w));
            if gomi_trace_with(&h, &identity).unwrap() != geo {
                identity_fails += 1;
            }
        }
        assert!(identity_fails > 0);
    }

    #[test]
    fn type_d_is_unsupported() {
        let g = WeylGroup::shared(CartanType::d(3)).unwrap();
        assert!(gomi_trace(&HeckeElement::one(&g)).is_err());
    }
}
