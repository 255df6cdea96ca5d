//! Exact rational scalars and the `a/b` literal form used in instance and
//! result documents.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational used for every computed quantity.
pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Converts an integer rational to `i64`, `None` when fractional or out of range.
pub fn to_i64(v: &Rat) -> Option<i64> {
    if v.is_integer() {
        v.to_integer().to_i64()
    } else {
        None
    }
}

pub fn floor_i64(v: &Rat) -> Option<i64> {
    v.floor().to_integer().to_i64()
}

pub fn from_ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x * y)
}

/// Parses `a`, `-a`, or `a/b` (b nonzero). Whitespace around the parts is rejected.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = parse_int(num)?;
    match den {
        None => Some(Rat::from_integer(num)),
        Some(d) => {
            let d: BigInt = parse_int(d)?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(num, d))
            }
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Displays a rational in lowest terms as `a` or `a/b`.
pub struct Lit<'a>(pub &'a Rat);

impl fmt::Display for Lit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Serde wrapper: integers that fit in `i64` are written as JSON numbers,
/// everything else as an `"a/b"` string. Reading accepts either form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatLit(pub Rat);

impl From<Rat> for RatLit {
    fn from(v: Rat) -> Self {
        RatLit(v)
    }
}

impl Serialize for RatLit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match to_i64(&self.0) {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&Lit(&self.0).to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for RatLit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = RatLit;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational literal \"a/b\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatLit, E> {
                Ok(RatLit(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatLit, E> {
                Ok(RatLit(Rat::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<RatLit, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} not allowed; write a/b"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RatLit, E> {
                parse_rational(v)
                    .map(RatLit)
                    .ok_or_else(|| E::custom(format!("invalid rational literal {v:?}")))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

pub fn is_negative(v: &Rat) -> bool {
    v.is_negative()
}

pub fn is_positive(v: &Rat) -> bool {
    v.is_positive()
}
