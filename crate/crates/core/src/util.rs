//! Exact rational values with a string-based serde form (`"-3/4"`).

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Rational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Q(pub Rational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(Rational::from((num, den)))
    }

    pub fn int(n: i64) -> Self {
        Q(Rational::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::int(n)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        if t.contains('/') {
            return Err(Error::DomainError(format!("malformed rational `{s}`")));
        }
        let neg = int.starts_with('-');
        let digits: String = int
            .trim_start_matches(['-', '+'])
            .chars()
            .chain(frac.chars())
            .collect();
        let num: rug::Integer = digits
            .parse()
            .map_err(|_| Error::DomainError(format!("malformed rational `{s}`")))?;
        let den = rug::Integer::from(10).pow(frac.len() as u32);
        let r = Rational::from((num, den));
        return Ok(if neg { -r } else { r });
    }
    Rational::from_str(t).map_err(|_| Error::DomainError(format!("malformed rational `{s}`")))
}

impl FromStr for Q {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Q)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if *self.0.denom() == 1 {
            if let Some(n) = self.0.numer().to_i64() {
                return s.serialize_i64(n);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

struct QVisitor;

impl<'de> Visitor<'de> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string such as \"-3/4\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
        Ok(Q::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
        Ok(Q(Rational::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
        Rational::from_f64(v)
            .map(Q)
            .ok_or_else(|| E::custom("non-finite number"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
        parse_rational(v).map(Q).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}
