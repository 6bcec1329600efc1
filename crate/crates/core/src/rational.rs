//! Exact rational scalars and dense rational vectors.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

/// Arbitrary-precision rational number used throughout the exact code paths.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion of a finite double to a rational.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `p/q`, or a decimal such as `-1.25e-3` exactly.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, d)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(p, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(BigInt::from_str(&all).map_err(|_| err())?);
    let shift = exp - frac_part.len() as i64;
    let ten = Q::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Comma-separated list of rationals, e.g. `1,-1/2,0.25`.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>, ParseRationalError> {
    s.split(',').map(parse_q).collect()
}

/// Deserializes a rational from a JSON number (kept exact) or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactQ(pub Q);

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExactQ;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a \"p/q\" rational string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactQ, E> {
                Ok(ExactQ(q(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactQ, E> {
                Ok(ExactQ(Q::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactQ, E> {
                from_f64(v).map(ExactQ).ok_or_else(|| E::custom("non-finite number"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactQ, E> {
                parse_q(v).map(ExactQ).map_err(E::custom)
            }
            fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> Result<ExactQ, A::Error> {
                // serde_json's arbitrary_precision numbers arrive as a one-entry map.
                let n = serde_json::Number::deserialize(de::value::MapAccessDeserializer::new(map))?;
                parse_q(&n.to_string()).map(ExactQ).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Dense vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QVec(pub Vec<Q>);

impl QVec {
    pub fn zeros(n: usize) -> Self {
        QVec(vec![Q::zero(); n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Q::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        QVec(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &QVec) -> Q {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute entry (zero for the empty vector).
    pub fn max_abs(&self) -> Q {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Q> {
        self.0.iter()
    }
}

impl Index<usize> for QVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVec {
    fn index_mut(&mut self, i: usize) -> &mut Q {
        &mut self.0[i]
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-0.25").unwrap(), qf(-1, 4));
        assert_eq!(parse_q("1.5e2").unwrap(), q(150));
        assert_eq!(parse_q("2E-3").unwrap(), qf(1, 500));
        assert_eq!(parse_q(".5").unwrap(), qf(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("-").is_err());
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(fmt_q(&q(-5)), "-5");
        assert_eq!(fmt_q(&qf(2, -4)), "-1/2");
    }

    #[test]
    fn json_numbers_stay_exact() {
        let v: Vec<ExactQ> = serde_json::from_str(r#"[0.1, "1/3", 7, -2.5e-1]"#).unwrap();
        assert_eq!(v[0].0, qf(1, 10));
        assert_eq!(v[1].0, qf(1, 3));
        assert_eq!(v[2].0, q(7));
        assert_eq!(v[3].0, qf(-1, 4));
    }
}
