//! Exact GPL letters: zero, or `q·(√2−1)^p·(2−√3)^r·e^{2πi·turn}`.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::util::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polar {
    /// positive rational modulus factor
    pub q: Rational,
    /// exponent of √2 − 1
    pub p: i32,
    /// exponent of 2 − √3
    pub r: i32,
    /// argument as a fraction of a full turn, in `[0, 1)`
    pub turn: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    Polar(Polar),
}

fn reduce_turn(t: Rational) -> Rational {
    let fl = t.clone().floor();
    t - fl
}

impl Letter {
    pub fn polar(q: Rational, p: i32, r: i32, turn: Rational) -> Result<Self> {
        if q <= 0 {
            return Err(Error::RegistryError(format!(
                "modulus factor {q} must be positive"
            )));
        }
        Ok(Letter::Polar(Polar {
            q,
            p,
            r,
            turn: reduce_turn(turn),
        }))
    }

    pub fn rational(q: Rational) -> Self {
        if q == 0 {
            return Letter::Zero;
        }
        let turn = if q < 0 {
            Rational::from((1, 2))
        } else {
            Rational::new()
        };
        Letter::Polar(Polar {
            q: q.abs(),
            p: 0,
            r: 0,
            turn,
        })
    }

    pub fn int(n: i64) -> Self {
        Letter::rational(Rational::from(n))
    }

    pub fn one() -> Self {
        Letter::int(1)
    }

    /// `e^{2πik/n}`
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        Letter::Polar(Polar {
            q: Rational::from(1),
            p: 0,
            r: 0,
            turn: reduce_turn(Rational::from((k, n as i64))),
        })
    }

    pub fn i() -> Self {
        Letter::root_of_unity(1, 4)
    }

    pub fn minus_i() -> Self {
        Letter::root_of_unity(3, 4)
    }

    pub fn surd(name: &str) -> Result<Self> {
        let (p, r) = match name {
            "sqrt2_minus_1" => (1, 0),
            "1_plus_sqrt2" => (-1, 0),
            "2_minus_sqrt3" => (0, 1),
            "2_plus_sqrt3" => (0, -1),
            other => {
                return Err(Error::RegistryError(format!(
                    "unknown surd letter `{other}`"
                )))
            }
        };
        Ok(Letter::Polar(Polar {
            q: Rational::from(1),
            p,
            r,
            turn: Rational::new(),
        }))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Letter::Zero)
    }

    pub fn is_one(&self) -> bool {
        match self {
            Letter::Zero => false,
            Letter::Polar(pl) => pl.q == 1 && pl.p == 0 && pl.r == 0 && pl.turn == 0,
        }
    }

    pub fn has_unit_modulus(&self) -> bool {
        matches!(self, Letter::Polar(pl) if pl.q == 1 && pl.p == 0 && pl.r == 0)
    }

    /// Rational value when the letter is a real rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Letter::Zero => Some(Rational::new()),
            Letter::Polar(pl) if pl.p == 0 && pl.r == 0 => {
                if pl.turn == 0 {
                    Some(pl.q.clone())
                } else if pl.turn == (1, 2) {
                    Some(-pl.q.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// True for zero and for `N`-th roots of unity.
    pub fn in_level(&self, n: u32) -> bool {
        match self {
            Letter::Zero => true,
            Letter::Polar(pl) => {
                self.has_unit_modulus() && Rational::from(&pl.turn * n).denom() == &1u32
            }
        }
    }

    pub fn mul(&self, other: &Letter) -> Letter {
        match (self, other) {
            (Letter::Zero, _) | (_, Letter::Zero) => Letter::Zero,
            (Letter::Polar(a), Letter::Polar(b)) => Letter::Polar(Polar {
                q: Rational::from(&a.q * &b.q),
                p: a.p + b.p,
                r: a.r + b.r,
                turn: reduce_turn(Rational::from(&a.turn + &b.turn)),
            }),
        }
    }

    pub fn inv(&self) -> Result<Letter> {
        match self {
            Letter::Zero => Err(Error::DomainError("zero letter has no inverse".into())),
            Letter::Polar(a) => Ok(Letter::Polar(Polar {
                q: Rational::from(a.q.recip_ref()),
                p: -a.p,
                r: -a.r,
                turn: reduce_turn(-a.turn.clone()),
            })),
        }
    }

    pub fn div(&self, other: &Letter) -> Result<Letter> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Letter {
        self.mul(&Letter::int(-1))
    }

    pub fn modulus(&self, prec: u32) -> Float {
        match self {
            Letter::Zero => Float::new(prec),
            Letter::Polar(pl) => {
                let mut m = Float::with_val(prec, &pl.q);
                if pl.p != 0 {
                    let s = Float::with_val(prec, 2).sqrt() - 1u32;
                    m *= s.pow(pl.p);
                }
                if pl.r != 0 {
                    let s = 2u32 - Float::with_val(prec, 3).sqrt();
                    m *= s.pow(pl.r);
                }
                m
            }
        }
    }

    pub fn modulus_f64(&self) -> f64 {
        self.modulus(64).to_f64()
    }

    pub fn value(&self, prec: u32) -> Complex {
        match self {
            Letter::Zero => Complex::zero(prec),
            Letter::Polar(pl) => {
                let m = self.modulus(prec);
                let nu = Rational::from(&pl.turn * 2u32);
                Complex::unit_root(&nu, prec).scale(&m)
            }
        }
    }

    pub fn to_descriptor(&self) -> Value {
        if let Some(q) = self.as_rational() {
            if q == 0 {
                return json!({"kind": "zero"});
            }
            let s = if *q.denom() == 1 {
                json!(q.numer().to_i64())
            } else {
                json!(q.to_string())
            };
            return json!({"kind": "rational", "params": {"q": s}});
        }
        let Letter::Polar(pl) = self else {
            unreachable!()
        };
        if self.has_unit_modulus() {
            return json!({"kind": "root_of_unity", "params": {
                "k": pl.turn.numer().to_i64(), "n": pl.turn.denom().to_u32()}});
        }
        if pl.q == 1 && pl.turn == 0 && (pl.p.abs() + pl.r.abs()) == 1 {
            let name = match (pl.p, pl.r) {
                (1, 0) => "sqrt2_minus_1",
                (-1, 0) => "1_plus_sqrt2",
                (0, 1) => "2_minus_sqrt3",
                _ => "2_plus_sqrt3",
            };
            return json!({"kind": "surd", "params": {"name": name}});
        }
        json!({"kind": "polar", "params": {
            "q": pl.q.to_string(), "p": pl.p, "r": pl.r, "turn": pl.turn.to_string()}})
    }

    /// Parses a `{kind, params}` descriptor, or a bare number / `"i"` / `"-i"`
    /// / `"p/q"` string.
    pub fn from_descriptor(v: &Value) -> Result<Letter> {
        let bad = |m: String| Error::RegistryError(m);
        match v {
            Value::Number(n) => {
                let q = if let Some(i) = n.as_i64() {
                    Rational::from(i)
                } else {
                    parse_rational(&n.to_string())?
                };
                Ok(Letter::rational(q))
            }
            Value::String(s) => match s.trim() {
                "i" => Ok(Letter::i()),
                "-i" => Ok(Letter::minus_i()),
                t => Ok(Letter::rational(
                    parse_rational(t).map_err(|_| bad(format!("unrecognized letter `{t}`")))?,
                )),
            },
            Value::Object(map) => {
                let kind = map
                    .get("kind")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("letter descriptor needs a `kind`".into()))?;
                let params = map.get("params").cloned().unwrap_or(Value::Null);
                let q_of = |key: &str| -> Result<Rational> {
                    match params.get(key) {
                        Some(Value::Number(n)) => parse_rational(&n.to_string()),
                        Some(Value::String(s)) => parse_rational(s),
                        _ => Err(bad(format!("`{kind}` letter needs `{key}`"))),
                    }
                };
                let i_of = |key: &str, default: Option<i64>| -> Result<i64> {
                    match params.get(key).and_then(Value::as_i64) {
                        Some(x) => Ok(x),
                        None => {
                            default.ok_or_else(|| bad(format!("`{kind}` letter needs `{key}`")))
                        }
                    }
                };
                match kind {
                    "zero" => Ok(Letter::Zero),
                    "rational" => Ok(Letter::rational(q_of("q")?)),
                    "root_of_unity" => {
                        let n = i_of("n", None)?;
                        if n <= 0 {
                            return Err(bad(format!("root of unity order {n} must be positive")));
                        }
                        Ok(Letter::root_of_unity(i_of("k", None)?, n as u32))
                    }
                    "surd" => {
                        let name = params
                            .get("name")
                            .and_then(Value::as_str)
                            .ok_or_else(|| bad("surd letter needs `name`".into()))?;
                        let l = Letter::surd(name)?;
                        Ok(if i_of("sign", Some(1))? < 0 {
                            l.neg()
                        } else {
                            l
                        })
                    }
                    "polar" => Letter::polar(
                        q_of("q")?,
                        i_of("p", Some(0))? as i32,
                        i_of("r", Some(0))? as i32,
                        q_of("turn").unwrap_or_default(),
                    ),
                    other => Err(bad(format!("unknown letter kind `{other}`"))),
                }
            }
            other => Err(bad(format!("cannot read a letter from {other}"))),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Letter::from_descriptor(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let Letter::Polar(pl) = self else {
            unreachable!()
        };
        if *pl == *Letter::i().as_polar() {
            return write!(f, "i");
        }
        if *pl == *Letter::minus_i().as_polar() {
            return write!(f, "-i");
        }
        let mut parts = Vec::new();
        if pl.q != 1 {
            parts.push(pl.q.to_string());
        }
        if pl.p != 0 {
            parts.push(format!("(√2-1)^{}", pl.p));
        }
        if pl.r != 0 {
            parts.push(format!("(2-√3)^{}", pl.r));
        }
        if pl.turn != 0 {
            parts.push(format!("e^(2πi·{})", pl.turn));
        }
        write!(f, "{}", parts.join("·"))
    }
}

impl Letter {
    fn as_polar(&self) -> &Polar {
        match self {
            Letter::Polar(p) => p,
            Letter::Zero => panic!("zero letter has no polar form"),
        }
    }
}
