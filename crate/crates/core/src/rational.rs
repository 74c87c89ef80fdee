//! Exact rationals and their text form.
//!
//! Rationals are written as a decimal integer (`"3"`, `"-2"`) or as
//! `"p/q"` with `q > 0`. Output is always in lowest terms, and integers are
//! written without a denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

pub fn parse(s: &str) -> Result<Q> {
    let bad = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        None => parse_int(s, true).map(Q::from_integer).ok_or_else(bad),
        Some((n, d)) => {
            let n = parse_int(n, true).ok_or_else(bad)?;
            let d = parse_int(d, false).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
    }
}

pub fn format(value: &Q) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde wrapper writing a rational as its `"p/q"` string.
///
/// Deserialization also accepts plain JSON integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Q);

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(&self.0))
    }
}

impl From<Q> for RatStr {
    fn from(value: Q) -> Self {
        RatStr(value)
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = RatStr;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"p/q\", a decimal integer string, or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatStr, E> {
                parse(v).map(RatStr).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(Q::from_integer(BigInt::from(v))))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}
