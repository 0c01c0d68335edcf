//! Exact rational numbers and their JSON encoding.
//!
//! Every rate, load, capacity and length in the crate is a [`Q`]. On the wire a
//! value is written as a JSON integer when integral, as a JSON float when its
//! shortest decimal form is exact, and as a `"p/q"` string otherwise, so a
//! parse/serialize round trip never loses precision.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `"3"`, `"-1.25"`, `"7/12"` exactly.
pub fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if t.contains(['e', 'E']) {
        let f: f64 = t.parse().map_err(|_| err())?;
        return from_f64(f).ok_or_else(err);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let n = BigInt::from_str(&digits).map_err(|_| err())?;
    let d = num::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(n, d);
    Ok(if neg { -v } else { v })
}

/// Converts a float through its shortest decimal representation, so `0.1`
/// becomes exactly `1/10`.
pub fn from_f64(f: f64) -> Option<Q> {
    if !f.is_finite() {
        return None;
    }
    parse_q(&format!("{f}")).ok()
}

pub fn display_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

struct QVisitor;

impl<'de> Visitor<'de> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a rational string such as \"7/12\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(q(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q::from_integer(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
        from_f64(v).ok_or_else(|| E::custom(format!("non-finite number {v}")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        parse_q(v).map_err(E::custom)
    }
}

fn write_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    if x.is_integer() {
        if let Some(i) = x.to_integer().to_i64() {
            return s.serialize_i64(i);
        }
    } else if let Some(f) = x.to_f64() {
        if from_f64(f).as_ref() == Some(x) {
            return s.serialize_f64(f);
        }
    }
    s.serialize_str(&display_q(x))
}

/// `#[serde(with = "crate::rational::serde_q")]` for a single value.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        write_q(x, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

/// Transparent serde wrapper used for nested collections of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSer(pub Q);

impl serde::Serialize for QSer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write_q(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for QSer {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(QVisitor).map(QSer)
    }
}

pub mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().cloned().map(QSer).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Ok(Vec::<QSer>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod serde_q_mat {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(xs: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(|row| row.iter().cloned().map(QSer).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        Ok(Vec::<Vec<QSer>>::deserialize(d)?.into_iter().map(|row| row.into_iter().map(|x| x.0).collect()).collect())
    }
}

pub mod serde_q_opt {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.clone().map(QSer).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Ok(Option::<QSer>::deserialize(d)?.map(|x| x.0))
    }
}

pub mod serde_q_opt_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(xs: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
        xs.as_ref().map(|v| v.iter().cloned().map(QSer).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
        Ok(Option::<Vec<QSer>>::deserialize(d)?.map(|v| v.into_iter().map(|x| x.0).collect()))
    }
}

/// Largest natural number strictly below `x`; zero when `x <= 1`.
pub fn strict_floor(x: &Q) -> u64 {
    if x <= &Q::one() {
        return 0;
    }
    let f = x.floor();
    let f = if &f == x { f - Q::one() } else { f };
    f.to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn ceil_nonneg(x: &Q) -> u64 {
    if x.is_negative() {
        return 0;
    }
    x.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_fraction_and_integer_forms() {
        assert_eq!(parse_q("7/12").unwrap(), qr(7, 12));
        assert_eq!(parse_q("-1.25").unwrap(), qr(-5, 4));
        assert_eq!(parse_q("0.1").unwrap(), qr(1, 10));
        assert_eq!(parse_q("42").unwrap(), q(42));
        assert_eq!(parse_q("1e-3").unwrap(), qr(1, 1000));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q(".").is_err());
    }

    #[test]
    fn json_encoding_is_exact() {
        for x in [q(3), qr(1, 10), qr(1, 3), qr(-7, 8), qr(2, 3)] {
            let s = serde_json::to_string(&QSer(x.clone())).unwrap();
            let back: QSer = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0, x, "{s}");
        }
        assert_eq!(serde_json::to_string(&QSer(qr(1, 3))).unwrap(), "\"1/3\"");
        assert_eq!(serde_json::to_string(&QSer(qr(1, 4))).unwrap(), "0.25");
    }

    #[test]
    fn strict_floor_matches_definition() {
        assert_eq!(strict_floor(&q(2)), 1);
        assert_eq!(strict_floor(&qr(5, 2)), 2);
        assert_eq!(strict_floor(&q(4)), 3);
        assert_eq!(strict_floor(&qr(3, 2)), 1);
        assert_eq!(strict_floor(&q(1)), 0);
        assert_eq!(strict_floor(&qr(1, 2)), 0);
    }
}
