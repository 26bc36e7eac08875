//! JSON encodings: a [`BiLaurent`] is a list of `[coeff, e_v, e_t]` triples in
//! ascending `(e_v, e_t)` order, and a [`RatFn`] is `{"num": ..., "den": ...}`.
//! Coefficients that do not fit in an `i64` are written as decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{BiLaurent, RatFn};

fn coeff_value(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(x) => json!(x),
        None => json!(c.to_string()),
    }
}

fn parse_coeff(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl BiLaurent {
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|(&(a, b), c)| json!([coeff_value(c), a, b])).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("polynomial must be a JSON array")?;
        let mut out = BiLaurent::zero();
        let mut prev: Option<(i32, i32)> = None;
        for item in arr {
            let triple = item.as_array().filter(|t| t.len() == 3).ok_or("term must be [coeff, e_v, e_t]")?;
            let c = parse_coeff(&triple[0]).ok_or("bad coefficient")?;
            let ev = triple[1].as_i64().and_then(|x| i32::try_from(x).ok()).ok_or("bad e_v")?;
            let et = triple[2].as_i64().and_then(|x| i32::try_from(x).ok()).ok_or("bad e_t")?;
            if prev.is_some_and(|p| p >= (ev, et)) {
                return Err("terms must be strictly ascending in (e_v, e_t)".into());
            }
            if c == BigInt::from(0) {
                return Err("zero coefficient".into());
            }
            prev = Some((ev, et));
            out.add_term(c, (ev, et));
        }
        Ok(out)
    }
}

impl RatFn {
    pub fn to_json(&self) -> Value {
        json!({ "num": self.num().to_json(), "den": self.den().to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let num = BiLaurent::from_json(v.get("num").ok_or("missing num")?)?;
        let den = BiLaurent::from_json(v.get("den").ok_or("missing den")?)?;
        RatFn::new(num, den).map_err(|e| e.to_string())
    }
}

impl Serialize for BiLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        BiLaurent::from_json(&v).map_err(D::Error::custom)
    }
}

impl Serialize for RatFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        RatFn::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_sorted_triples() {
        let p = BiLaurent::from_terms([(1, 2, 1), (1, -1, 0)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,-1,0],[1,2,1]]");
        let r = RatFn::z();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"den":[[1,0,0],[-1,2,0]],"num":[[1,0,0],[1,1,1]]}"#);
    }

    #[test]
    fn big_coefficients_use_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = BiLaurent::big_monomial(big, 0, 3);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"123456789012345678901234567890\""));
        let back: BiLaurent = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        assert!(serde_json::from_str::<BiLaurent>("[[1,2,0],[1,0,0]]").is_err());
    }
}
