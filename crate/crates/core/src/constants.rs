//! Closed registry of named exact constants.
//!
//! The table ships as `data/constants.json`. Values are memoized per
//! `(symbol, working precision)` behind a reader-writer lock.

use std::collections::{HashMap, HashSet};
use std::sync::{LazyLock, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::polylog;
use crate::precision::PrecisionContext;
use crate::util::Q;

/// Fixed table of real algebraic numbers usable as letters, points and
/// logarithm arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Surd {
    #[serde(rename = "sqrt2")]
    Sqrt2,
    #[serde(rename = "sqrt3")]
    Sqrt3,
    #[serde(rename = "sqrt5")]
    Sqrt5,
    #[serde(rename = "sqrt6")]
    Sqrt6,
    #[serde(rename = "sqrt2_minus_1")]
    Sqrt2Minus1,
    #[serde(rename = "1_plus_sqrt2")]
    OnePlusSqrt2,
    #[serde(rename = "2_minus_sqrt3")]
    TwoMinusSqrt3,
    #[serde(rename = "2_plus_sqrt3")]
    TwoPlusSqrt3,
    #[serde(rename = "inv_sqrt2")]
    InvSqrt2,
    #[serde(rename = "sqrt3_minus_1_over_2")]
    Sqrt3Minus1Over2,
    #[serde(rename = "1_minus_sqrt3_over_2")]
    OneMinusSqrt3Over2,
    #[serde(rename = "golden_ratio")]
    GoldenRatio,
    #[serde(rename = "sqrt_1_plus_inv_sqrt2")]
    Sqrt1PlusInvSqrt2,
    #[serde(rename = "sqrt_1_minus_inv_sqrt2")]
    Sqrt1MinusInvSqrt2,
}

impl Surd {
    pub const ALL: [Surd; 14] = [
        Surd::Sqrt2,
        Surd::Sqrt3,
        Surd::Sqrt5,
        Surd::Sqrt6,
        Surd::Sqrt2Minus1,
        Surd::OnePlusSqrt2,
        Surd::TwoMinusSqrt3,
        Surd::TwoPlusSqrt3,
        Surd::InvSqrt2,
        Surd::Sqrt3Minus1Over2,
        Surd::OneMinusSqrt3Over2,
        Surd::GoldenRatio,
        Surd::Sqrt1PlusInvSqrt2,
        Surd::Sqrt1MinusInvSqrt2,
    ];

    pub fn value(self, prec: u32) -> Float {
        let sqrt = |n: u32| Float::with_val(prec, n).sqrt();
        match self {
            Surd::Sqrt2 => sqrt(2),
            Surd::Sqrt3 => sqrt(3),
            Surd::Sqrt5 => sqrt(5),
            Surd::Sqrt6 => sqrt(6),
            Surd::Sqrt2Minus1 => sqrt(2) - 1u32,
            Surd::OnePlusSqrt2 => sqrt(2) + 1u32,
            Surd::TwoMinusSqrt3 => 2u32 - sqrt(3),
            Surd::TwoPlusSqrt3 => sqrt(3) + 2u32,
            Surd::InvSqrt2 => sqrt(2).recip(),
            Surd::Sqrt3Minus1Over2 => (sqrt(3) - 1u32) / 2u32,
            Surd::OneMinusSqrt3Over2 => 1u32 - sqrt(3) / 2u32,
            Surd::GoldenRatio => (sqrt(5) + 1u32) / 2u32,
            Surd::Sqrt1PlusInvSqrt2 => (sqrt(2).recip() + 1u32).sqrt(),
            Surd::Sqrt1MinusInvSqrt2 => (1u32 - sqrt(2).recip()).sqrt(),
        }
    }

    /// Minimal polynomial over Q, coefficients in ascending degree.
    pub fn minimal_polynomial(self) -> Vec<Rational> {
        let q = |n: i64, d: i64| Rational::from((n, d));
        match self {
            Surd::Sqrt2 => vec![q(-2, 1), q(0, 1), q(1, 1)],
            Surd::Sqrt3 => vec![q(-3, 1), q(0, 1), q(1, 1)],
            Surd::Sqrt5 => vec![q(-5, 1), q(0, 1), q(1, 1)],
            Surd::Sqrt6 => vec![q(-6, 1), q(0, 1), q(1, 1)],
            Surd::Sqrt2Minus1 => vec![q(-1, 1), q(2, 1), q(1, 1)],
            Surd::OnePlusSqrt2 => vec![q(-1, 1), q(-2, 1), q(1, 1)],
            Surd::TwoMinusSqrt3 | Surd::TwoPlusSqrt3 => vec![q(1, 1), q(-4, 1), q(1, 1)],
            Surd::InvSqrt2 => vec![q(-1, 2), q(0, 1), q(1, 1)],
            Surd::Sqrt3Minus1Over2 => vec![q(-1, 2), q(1, 1), q(1, 1)],
            Surd::OneMinusSqrt3Over2 => vec![q(1, 4), q(-2, 1), q(1, 1)],
            Surd::GoldenRatio => vec![q(-1, 1), q(-1, 1), q(1, 1)],
            Surd::Sqrt1PlusInvSqrt2 | Surd::Sqrt1MinusInvSqrt2 => {
                vec![q(1, 2), q(0, 1), q(-2, 1), q(0, 1), q(1, 1)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trig {
    Cos,
    Sin,
}

/// Exact evaluation point for polylogarithm constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Rational {
        q: Q,
    },
    Algebraic {
        a: Surd,
    },
    /// `e^{iπν}`
    UnitRoot {
        nu: Q,
    },
    Gaussian {
        re: Q,
        im: Q,
    },
    /// `coeff · f(νπ)^power`
    TrigPower {
        coeff: Q,
        func: Trig,
        nu: Q,
        power: u32,
    },
}

impl Point {
    pub fn value(&self, prec: u32) -> Complex {
        match self {
            Point::Rational { q } => Complex::from_rational(&q.0, prec),
            Point::Algebraic { a } => Complex::from_real(a.value(prec)),
            Point::UnitRoot { nu } => Complex::unit_root(&nu.0, prec),
            Point::Gaussian { re, im } => {
                Complex::new(Float::with_val(prec, &re.0), Float::with_val(prec, &im.0))
            }
            Point::TrigPower {
                coeff,
                func,
                nu,
                power,
            } => {
                let t = trig_pi(*func, &nu.0, prec);
                Complex::from_real(t.pow(*power) * Float::with_val(prec, &coeff.0))
            }
        }
    }
}

pub fn trig_pi(func: Trig, nu: &Rational, prec: u32) -> Float {
    let theta = Float::with_val(prec, Constant::Pi) * Float::with_val(prec, nu);
    match func {
        Trig::Cos => theta.cos(),
        Trig::Sin => theta.sin(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    tag = "definition_kind",
    content = "parameters",
    rename_all = "snake_case"
)]
pub enum ConstantDef {
    Pi,
    ImaginaryUnit,
    Catalan,
    LogRational {
        q: Q,
    },
    LogAlgebraic {
        a: Surd,
    },
    Algebraic {
        a: Surd,
    },
    Zeta {
        n: u32,
    },
    PolylogAt {
        k: u32,
        point: Point,
    },
    RePolylogAt {
        k: u32,
        point: Point,
    },
    ImPolylogAt {
        k: u32,
        point: Point,
    },
    CosPiRational {
        nu: Q,
    },
    SinPiRational {
        nu: Q,
    },
    #[serde(rename = "log_2sin_pi_rational")]
    Log2SinPiRational {
        nu: Q,
    },
}

impl ConstantDef {
    fn validate(&self) -> Result<()> {
        match self {
            ConstantDef::LogRational { q } if q.0 <= 0 => Err(Error::DomainError(format!(
                "log of non-positive rational {q}"
            ))),
            ConstantDef::Zeta { n } if *n < 2 => Err(Error::DomainError(format!(
                "zeta({n}) is not a finite constant"
            ))),
            ConstantDef::PolylogAt { k, .. }
            | ConstantDef::RePolylogAt { k, .. }
            | ConstantDef::ImPolylogAt { k, .. }
                if *k == 0 =>
            {
                Err(Error::DomainError("polylog weight must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Numeric value at `prec` bits.
    pub fn eval(&self, prec: u32) -> Result<Complex> {
        let real = |f: Float| Ok(Complex::from_real(f));
        match self {
            ConstantDef::Pi => real(Float::with_val(prec, Constant::Pi)),
            ConstantDef::ImaginaryUnit => Ok(Complex::i(prec)),
            ConstantDef::Catalan => real(Float::with_val(prec, Constant::Catalan)),
            ConstantDef::LogRational { q } => real(Float::with_val(prec, &q.0).ln()),
            ConstantDef::LogAlgebraic { a } => real(a.value(prec + 8).ln()),
            ConstantDef::Algebraic { a } => real(a.value(prec)),
            ConstantDef::Zeta { n } => real(polylog::zeta(*n, prec)),
            ConstantDef::PolylogAt { k, point } => {
                polylog::li_prec(*k, &point.value(prec + 16), prec)
            }
            ConstantDef::RePolylogAt { k, point } => {
                polylog::li_prec(*k, &point.value(prec + 16), prec)
                    .map(|v| Complex::from_real(v.re))
            }
            ConstantDef::ImPolylogAt { k, point } => {
                polylog::li_prec(*k, &point.value(prec + 16), prec)
                    .map(|v| Complex::from_real(v.im))
            }
            ConstantDef::CosPiRational { nu } => real(trig_pi(Trig::Cos, &nu.0, prec)),
            ConstantDef::SinPiRational { nu } => real(trig_pi(Trig::Sin, &nu.0, prec)),
            ConstantDef::Log2SinPiRational { nu } => {
                let s = trig_pi(Trig::Sin, &nu.0, prec + 8) * 2u32;
                if s <= 0 {
                    return Err(Error::DomainError(format!("log(2 sin({nu}π)) is not real")));
                }
                real(s.ln())
            }
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(
            self,
            ConstantDef::ImaginaryUnit | ConstantDef::PolylogAt { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub symbol: String,
    #[serde(flatten)]
    pub definition: ConstantDef,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegistryFile {
    version: u32,
    constants: Vec<ConstantEntry>,
}

/// Injective map from symbol to definition.
#[derive(Debug, Clone)]
pub struct Registry {
    version: u32,
    entries: Vec<ConstantEntry>,
    index: HashMap<String, usize>,
}

impl Registry {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegistryFile = serde_json::from_str(text)
            .map_err(|e| Error::schema("constants", "", e.to_string()))?;
        let mut index = HashMap::new();
        let mut seen = HashSet::new();
        for (i, e) in file.constants.iter().enumerate() {
            e.definition
                .validate()
                .map_err(|err| Error::schema(&e.symbol, "parameters", err.to_string()))?;
            if index.insert(e.symbol.clone(), i).is_some() {
                return Err(Error::schema(&e.symbol, "symbol", "duplicate symbol"));
            }
            if !seen.insert(e.definition.clone()) {
                return Err(Error::schema(
                    &e.symbol,
                    "parameters",
                    "definition already registered",
                ));
            }
        }
        Ok(Registry {
            version: file.version,
            entries: file.constants,
            index,
        })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn get(&self, symbol: &str) -> Option<&ConstantDef> {
        self.index.get(symbol).map(|&i| &self.entries[i].definition)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.symbol.as_str())
    }

    pub fn entries(&self) -> &[ConstantEntry] {
        &self.entries
    }
}

static REGISTRY: LazyLock<Registry> = LazyLock::new(|| {
    Registry::from_json(include_str!("../data/constants.json"))
        .expect("bundled constant table is valid")
});

type Memo = RwLock<HashMap<(String, u32), Complex>>;
static MEMO: LazyLock<Memo> = LazyLock::new(|| RwLock::new(HashMap::new()));

pub fn registry() -> &'static Registry {
    &REGISTRY
}

/// Value of a registered constant at the working precision of `ctx`.
pub fn resolve_constant(symbol: &str, ctx: &PrecisionContext) -> Result<Complex> {
    resolve_bits(symbol, ctx.bits())
}

pub fn resolve_bits(symbol: &str, prec: u32) -> Result<Complex> {
    let key = (symbol.to_string(), prec);
    if let Some(v) = MEMO.read().expect("constant memo poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = compute_constant(symbol, prec)?;
    MEMO.write()
        .expect("constant memo poisoned")
        .entry(key)
        .or_insert_with(|| v.clone());
    Ok(v)
}

/// Uncached evaluation.
pub fn compute_constant(symbol: &str, prec: u32) -> Result<Complex> {
    let def = registry()
        .get(symbol)
        .ok_or_else(|| Error::UnknownConstant(symbol.to_string()))?;
    def.eval(prec)
}
