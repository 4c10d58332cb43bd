//! Series descriptions and their JSON form.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::harmonic::HarmonicKey;
use crate::closed_form::{eval_closed_form, ClosedForm};
use crate::constants::{trig_pi, Trig};
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::util::Q;

/// Which binomial coefficient drives the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binomial {
    /// `C(2k, k)`
    TwoK,
    /// `C(3k, k)`
    ThreeK,
    /// `C(4k, 2k)`
    FourK,
}

impl Binomial {
    /// Exact `b_{k+1}/b_k`.
    pub fn ratio(self, k: u64) -> Rational {
        let k = Integer::from(k);
        match self {
            Binomial::TwoK => {
                Rational::from((Integer::from(2) * (Integer::from(2) * &k + 1u32), k + 1u32))
            }
            Binomial::ThreeK => {
                let num = (Integer::from(3) * &k + 1u32) * (Integer::from(3) * &k + 2u32) * 3u32;
                let den = (Integer::from(&k) + 1u32) * (Integer::from(2) * &k + 1u32) * 2u32;
                Rational::from((num, den))
            }
            Binomial::FourK => {
                let num = (Integer::from(4) * &k + 1u32) * (Integer::from(4) * &k + 3u32) * 2u32;
                let den = (Integer::from(2) * &k + 1u32) * (Integer::from(&k) + 1u32);
                Rational::from((num, den))
            }
        }
    }

    /// Limit of the successive ratio.
    pub fn growth(self) -> f64 {
        match self {
            Binomial::TwoK => 4.0,
            Binomial::ThreeK => 6.75,
            Binomial::FourK => 16.0,
        }
    }

    pub fn factorial_value(self, k: u64) -> Integer {
        let k32 = u32::try_from(k).expect("index fits in u32");
        match self {
            Binomial::TwoK => Integer::from(Integer::binomial_u(2 * k32, k32)),
            Binomial::ThreeK => Integer::from(Integer::binomial_u(3 * k32, k32)),
            Binomial::FourK => Integer::from(Integer::binomial_u(4 * k32, 2 * k32)),
        }
    }
}

/// Successive binomial coefficients from exact ratio updates.
#[derive(Debug, Clone)]
pub struct BinomStream {
    kind: Binomial,
    k: u64,
    value: Integer,
}

impl BinomStream {
    pub fn new(kind: Binomial) -> Self {
        BinomStream {
            kind,
            k: 0,
            value: Integer::from(1),
        }
    }
}

impl Iterator for BinomStream {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        let out = self.value.clone();
        let next = Rational::from(&self.value) * self.kind.ratio(self.k);
        debug_assert_eq!(*next.denom(), 1);
        self.value = next.into_numer_denom().0;
        self.k += 1;
        Some(out)
    }
}

/// `k`-th coefficient of the given family.
pub fn binom_stream(kind: Binomial, k: u64) -> Integer {
    BinomStream::new(kind)
        .nth(k as usize)
        .expect("stream is infinite")
}

/// Series family. Each term is `c_k x^k p_k w_k` with `c_k` a binomial
/// power, `p_k` the `s`-dependent factor and `w_k` the weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `C(2k,k) x^k / k^s`
    Central,
    /// `C(2k,k) x^k / (2k+1)^s`
    CentralOdd,
    /// `x^k / (k^s C(3k,k))`
    #[serde(rename = "inverse_3k")]
    Inverse3k,
    /// `C(3k,k) x^k / k^s`
    #[serde(rename = "forward_3k")]
    Forward3k,
    /// `C(4k,2k) x^k / k^s`
    #[serde(rename = "forward_4k")]
    Forward4k,
    /// `C(2k,k)^n x^k / k^s`
    Generic { n: i32 },
}

impl SeriesKind {
    pub fn binomial(&self) -> Binomial {
        match self {
            SeriesKind::Central | SeriesKind::CentralOdd | SeriesKind::Generic { .. } => {
                Binomial::TwoK
            }
            SeriesKind::Inverse3k | SeriesKind::Forward3k => Binomial::ThreeK,
            SeriesKind::Forward4k => Binomial::FourK,
        }
    }

    /// Exponent of the binomial coefficient.
    pub fn binomial_power(&self) -> i32 {
        match self {
            SeriesKind::Inverse3k => -1,
            SeriesKind::Generic { n } => *n,
            _ => 1,
        }
    }

    /// Whether the `s`-factor is `(2k+1)^{−s}` rather than `k^{−s}`.
    pub fn odd_denominator(&self) -> bool {
        matches!(self, SeriesKind::CentralOdd)
    }

    pub fn default_argument(&self) -> Option<Rational> {
        match self {
            SeriesKind::Inverse3k => Some(Rational::from((1, 2))),
            _ => None,
        }
    }
}

/// The real argument `x` of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Argument {
    Rational(Q),
    /// `coeff · cos²(mult · angle · π)`
    Parametric {
        coeff: Q,
        mult: Q,
        angle: Q,
    },
    Closed(ClosedForm),
}

impl Argument {
    pub fn rational(num: i64, den: i64) -> Self {
        Argument::Rational(Q::new(num, den))
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Float> {
        let prec = ctx.bits();
        match self {
            Argument::Rational(q) => Ok(Float::with_val(prec, &q.0)),
            Argument::Parametric { coeff, mult, angle } => {
                let nu = Rational::from(&mult.0 * &angle.0);
                let c = trig_pi(Trig::Cos, &nu, prec + 16);
                Ok(Float::with_val(prec, c.square() * &coeff.0))
            }
            Argument::Closed(expr) => {
                let v = eval_closed_form(expr, ctx)?;
                let tol = Float::with_val(prec, v.re.abs_ref()) * ctx.epsilon() + ctx.epsilon();
                if Float::with_val(prec, v.im.abs_ref()) > tol {
                    return Err(Error::DomainError(format!(
                        "series argument {expr} is not real"
                    )));
                }
                Ok(v.re)
            }
        }
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::Rational(q) => write!(f, "{q}"),
            Argument::Parametric { coeff, mult, angle } => {
                write!(f, "{coeff}·cos²({mult}·{angle}π)")
            }
            Argument::Closed(c) => write!(f, "{c}"),
        }
    }
}

/// One multiplicative factor of a weight term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Factor {
    /// `H_{mult·k + offset}^{(order)}`, written `H[m,o,r]`
    H(HarmonicKey),
    /// `3H_{3k} − 2H_{2k} − H_k − 3 log 3`, written `hbar`
    Hbar,
    /// `k^p`, written `k^p`
    K(i32),
    /// `(2k+1)^p`, written `odd^p`
    Odd(i32),
}

impl Factor {
    pub fn h(mult: u32, offset: u32, order: u32) -> Self {
        Factor::H(HarmonicKey {
            mult,
            offset,
            order,
        })
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::DomainError(format!("malformed weight factor `{s}`"));
        if t == "hbar" {
            return Ok(Factor::Hbar);
        }
        if t == "k" {
            return Ok(Factor::K(1));
        }
        if let Some(p) = t.strip_prefix("k^") {
            return p.parse().map(Factor::K).map_err(|_| bad());
        }
        if let Some(p) = t.strip_prefix("odd^") {
            return p.parse().map(Factor::Odd).map_err(|_| bad());
        }
        if t == "H" {
            return Ok(Factor::h(1, 0, 1));
        }
        if let Some(inner) = t.strip_prefix("H[").and_then(|r| r.strip_suffix(']')) {
            let parts: Vec<u32> = inner
                .split(',')
                .map(|p| p.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let (mult, offset, order) = match parts.as_slice() {
                [m] => (*m, 0, 1),
                [m, o] => (*m, *o, 1),
                [m, o, r] => (*m, *o, *r),
                _ => return Err(bad()),
            };
            if mult == 0 || order == 0 {
                return Err(bad());
            }
            return Ok(Factor::h(mult, offset, order));
        }
        Err(bad())
    }
}

impl TryFrom<String> for Factor {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Factor> for String {
    fn from(f: Factor) -> String {
        f.to_string()
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::H(k) => write!(f, "H[{},{},{}]", k.mult, k.offset, k.order),
            Factor::Hbar => write!(f, "hbar"),
            Factor::K(p) => write!(f, "k^{p}"),
            Factor::Odd(p) => write!(f, "odd^{p}"),
        }
    }
}

/// `coeff · constant · Π factors`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTerm {
    #[serde(default = "one_q")]
    pub coeff: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    #[serde(default)]
    pub factors: Vec<Factor>,
}

fn one_q() -> Q {
    Q::int(1)
}

impl WeightTerm {
    pub fn new(coeff: Q, factors: Vec<Factor>) -> Self {
        WeightTerm {
            coeff,
            constant: None,
            factors,
        }
    }

    pub fn unit() -> Self {
        WeightTerm::new(Q::int(1), vec![])
    }
}

fn default_start() -> u32 {
    1
}

/// A convergent binomial-harmonic series `Σ_{k ≥ start} c_k x^k p_k w_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    #[serde(default)]
    pub s: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub argument: Option<Argument>,
    /// empty means the constant weight 1
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weight: Vec<WeightTerm>,
    #[serde(default = "default_start")]
    pub start: u32,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, s: i32, argument: Option<Argument>) -> Self {
        SeriesSpec {
            kind,
            s,
            argument,
            weight: vec![],
            start: 1,
        }
    }

    pub fn with_weight(mut self, weight: Vec<WeightTerm>) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_start(mut self, start: u32) -> Self {
        self.start = start;
        self
    }

    pub fn weight_terms(&self) -> Vec<WeightTerm> {
        if self.weight.is_empty() {
            vec![WeightTerm::unit()]
        } else {
            self.weight.clone()
        }
    }

    pub fn argument_value(&self, ctx: &PrecisionContext) -> Result<Float> {
        match (&self.argument, self.kind.default_argument()) {
            (Some(a), _) => a.eval(ctx),
            (None, Some(q)) => Ok(Float::with_val(ctx.bits(), &q)),
            (None, None) => Err(Error::DivergentSpec(format!(
                "{:?} series needs an argument",
                self.kind
            ))),
        }
    }

    /// Structural checks that do not depend on the argument value.
    pub fn validate(&self) -> Result<()> {
        if self.start > 1 {
            return Err(Error::DivergentSpec("start index must be 0 or 1".into()));
        }
        if self.start == 0 {
            if self.s > 0 && !self.kind.odd_denominator() {
                return Err(Error::DivergentSpec(format!(
                    "k^{{-{}}} is undefined at k = 0",
                    self.s
                )));
            }
            for t in &self.weight {
                if t.factors
                    .iter()
                    .any(|f| matches!(f, Factor::K(p) if *p < 0))
                {
                    return Err(Error::DivergentSpec("negative power of k at k = 0".into()));
                }
            }
        }
        if let Some(Argument::Closed(c)) = &self.argument {
            c.check_symbols()?;
        }
        for t in &self.weight {
            if let Some(c) = &t.constant {
                if !crate::constants::registry().contains(c) {
                    return Err(Error::UnknownConstant(c.clone()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_stream(Binomial::TwoK, 2), 6);
        assert_eq!(binom_stream(Binomial::ThreeK, 2), 15);
        assert_eq!(binom_stream(Binomial::FourK, 2), 70);
        assert_eq!(binom_stream(Binomial::TwoK, 0), 1);
    }

    #[test]
    fn stream_matches_factorials() {
        for kind in [Binomial::TwoK, Binomial::ThreeK, Binomial::FourK] {
            for (k, v) in BinomStream::new(kind).take(60).enumerate() {
                assert_eq!(v, kind.factorial_value(k as u64), "{kind:?} k={k}");
            }
        }
    }

    #[test]
    fn factor_strings_round_trip() {
        for s in [
            "H[1,0,1]", "H[3,0,2]", "H[2,1,1]", "hbar", "k^1", "k^-2", "odd^-1",
        ] {
            let f: Factor = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("H".parse::<Factor>().unwrap(), Factor::h(1, 0, 1));
        assert_eq!("H[2]".parse::<Factor>().unwrap(), Factor::h(2, 0, 1));
        assert!("H[0]".parse::<Factor>().is_err());
        assert!("G[1]".parse::<Factor>().is_err());
    }

    #[test]
    fn spec_json_forms() {
        let j = r#"{"kind":"central_odd","s":2,"argument":"-1/16","start":0,
            "weight":[{"coeff":5,"factors":["H[2,1,1]"]},{"coeff":12,"factors":["odd^-1"]}]}"#;
        let spec: SeriesSpec = serde_json::from_str(j).unwrap();
        assert_eq!(spec.kind, SeriesKind::CentralOdd);
        assert_eq!(spec.weight.len(), 2);
        assert_eq!(spec.argument, Some(Argument::rational(-1, 16)));
        let back: SeriesSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);

        let j = r#"{"kind":"forward_3k","argument":{"coeff":"4/27","mult":"3/2","angle":"1/6"}}"#;
        let spec: SeriesSpec = serde_json::from_str(j).unwrap();
        assert!(matches!(spec.argument, Some(Argument::Parametric { .. })));
        let ctx = PrecisionContext::with_target(30);
        let x = spec.argument_value(&ctx).unwrap();
        assert!((x.to_f64() - 2.0 / 27.0).abs() < 1e-15);

        let j = r#"{"kind":{"generic":{"n":-1}},"s":3,"argument":1}"#;
        let spec: SeriesSpec = serde_json::from_str(j).unwrap();
        assert_eq!(spec.kind, SeriesKind::Generic { n: -1 });
    }

    #[test]
    fn start_zero_rules() {
        let spec =
            SeriesSpec::new(SeriesKind::Central, 1, Some(Argument::rational(1, 8))).with_start(0);
        assert!(matches!(spec.validate(), Err(Error::DivergentSpec(_))));
        let spec = SeriesSpec::new(SeriesKind::CentralOdd, 2, Some(Argument::rational(1, 8)))
            .with_start(0);
        assert!(spec.validate().is_ok());
    }
}
