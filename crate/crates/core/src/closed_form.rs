//! Expression trees over the constant registry with rational coefficients.

use std::collections::BTreeSet;
use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::constants;
use crate::error::{Error, Result};
use crate::precision::{ErrorBudget, PrecisionContext};
use crate::util::Q;

/// A closed-form right-hand side.
///
/// The `terms` variant is shorthand for a sum of monomials
/// `coeff · s₁^e₁ · s₂^e₂ ⋯`, written in JSON as
/// `["-12", "sqrt2", "lambda_t^2"]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Rational(Q),
    Constant(String),
    Sum(Vec<ClosedForm>),
    Product(Vec<ClosedForm>),
    Power {
        base: Box<ClosedForm>,
        exp: i32,
    },
    /// `coeff · √radicand`
    SurdScale {
        radicand: u32,
        coeff: Q,
    },
    Terms(Vec<Monomial>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<MonoItem>", into = "Vec<MonoItem>")]
pub struct Monomial {
    pub coeff: Q,
    pub factors: Vec<(String, i32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MonoItem {
    Int(i64),
    Text(String),
}

impl TryFrom<Vec<MonoItem>> for Monomial {
    type Error = String;

    fn try_from(items: Vec<MonoItem>) -> std::result::Result<Self, String> {
        let mut coeff = Q::int(1);
        let mut factors = Vec::new();
        for (i, item) in items.into_iter().enumerate() {
            match item {
                MonoItem::Int(n) if i == 0 => coeff = Q::int(n),
                MonoItem::Int(n) => return Err(format!("stray integer {n} inside a monomial")),
                MonoItem::Text(s) => {
                    if i == 0 {
                        if let Ok(q) = s.parse::<Q>() {
                            coeff = q;
                            continue;
                        }
                    }
                    factors.push(parse_factor(&s)?);
                }
            }
        }
        Ok(Monomial { coeff, factors })
    }
}

fn parse_factor(s: &str) -> std::result::Result<(String, i32), String> {
    match s.split_once('^') {
        Some((sym, e)) => {
            let e: i32 = e
                .parse()
                .map_err(|_| format!("bad exponent in factor `{s}`"))?;
            Ok((sym.to_string(), e))
        }
        None => Ok((s.to_string(), 1)),
    }
}

impl From<Monomial> for Vec<MonoItem> {
    fn from(m: Monomial) -> Self {
        let mut out = vec![MonoItem::Text(m.coeff.to_string())];
        for (s, e) in m.factors {
            out.push(MonoItem::Text(if e == 1 { s } else { format!("{s}^{e}") }));
        }
        out
    }
}

impl Monomial {
    pub fn new(coeff: Q, factors: &[(&str, i32)]) -> Self {
        Monomial {
            coeff,
            factors: factors.iter().map(|(s, e)| (s.to_string(), *e)).collect(),
        }
    }
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm::Rational(Q::int(0))
    }

    pub fn constant(symbol: &str) -> Self {
        ClosedForm::Constant(symbol.to_string())
    }

    /// Every constant symbol referenced by the tree.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            ClosedForm::Constant(s) => {
                out.insert(s.clone());
            }
            ClosedForm::Sum(v) | ClosedForm::Product(v) => {
                v.iter().for_each(|c| c.collect_symbols(out))
            }
            ClosedForm::Power { base, .. } => base.collect_symbols(out),
            ClosedForm::Terms(ms) => {
                for m in ms {
                    for (s, _) in &m.factors {
                        out.insert(s.clone());
                    }
                }
            }
            ClosedForm::Rational(_) | ClosedForm::SurdScale { .. } => {}
        }
    }

    /// Mutable handles on every rational coefficient, in tree order.
    pub fn coefficients_mut(&mut self) -> Vec<&mut Q> {
        let mut out = Vec::new();
        self.collect_coeffs(&mut out);
        out
    }

    fn collect_coeffs<'a>(&'a mut self, out: &mut Vec<&'a mut Q>) {
        match self {
            ClosedForm::Rational(q) => out.push(q),
            ClosedForm::SurdScale { coeff, .. } => out.push(coeff),
            ClosedForm::Sum(v) | ClosedForm::Product(v) => {
                v.iter_mut().for_each(|c| c.collect_coeffs(out))
            }
            ClosedForm::Power { base, .. } => base.collect_coeffs(out),
            ClosedForm::Terms(ms) => ms.iter_mut().for_each(|m| out.push(&mut m.coeff)),
            ClosedForm::Constant(_) => {}
        }
    }

    pub fn check_symbols(&self) -> Result<()> {
        let reg = constants::registry();
        for s in self.symbols() {
            if !reg.contains(&s) {
                return Err(Error::UnknownConstant(s));
            }
        }
        Ok(())
    }

    fn eval_inner(&self, prec: u32, budget: &mut ErrorBudget) -> Result<Complex> {
        match self {
            ClosedForm::Rational(q) => Ok(Complex::from_rational(&q.0, prec)),
            ClosedForm::Constant(s) => {
                let v = constants::resolve_bits(s, prec)?;
                budget.charge(&v.abs());
                Ok(v)
            }
            ClosedForm::Sum(items) => {
                let mut acc = Complex::zero(prec);
                for it in items {
                    acc += &it.eval_inner(prec, budget)?;
                    budget.charge(&acc.abs());
                }
                Ok(acc)
            }
            ClosedForm::Product(items) => {
                let mut acc = Complex::one(prec);
                for it in items {
                    acc = &acc * &it.eval_inner(prec, budget)?;
                    budget.charge(&acc.abs());
                }
                Ok(acc)
            }
            ClosedForm::Power { base, exp } => {
                let b = base.eval_inner(prec, budget)?;
                if b.is_zero() && *exp < 0 {
                    return Err(Error::DomainError("zero raised to a negative power".into()));
                }
                let v = b.powi(*exp);
                for _ in 0..exp.unsigned_abs().max(1) {
                    budget.charge(&v.abs());
                }
                Ok(v)
            }
            ClosedForm::SurdScale { radicand, coeff } => {
                let r = Float::with_val(prec, *radicand).sqrt() * Float::with_val(prec, &coeff.0);
                budget.charge(&r);
                Ok(Complex::from_real(r))
            }
            ClosedForm::Terms(ms) => {
                let mut acc = Complex::zero(prec);
                for m in ms {
                    let mut t = Complex::from_rational(&m.coeff.0, prec);
                    for (s, e) in &m.factors {
                        let v = constants::resolve_bits(s, prec)?;
                        if v.is_zero() && *e < 0 {
                            return Err(Error::DomainError(format!("{s} is zero")));
                        }
                        t = &t * &v.powi(*e);
                        budget.charge(&t.abs());
                    }
                    acc += &t;
                    budget.charge(&acc.abs());
                }
                Ok(acc)
            }
        }
    }
}

/// Evaluates `expr` at the working precision of `ctx`, failing when the
/// accumulated rounding budget exceeds the target accuracy.
pub fn eval_closed_form(expr: &ClosedForm, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.bits();
    let mut budget = ErrorBudget::new(prec);
    let v = expr.eval_inner(prec, &mut budget)?;
    budget.check(ctx)?;
    Ok(v)
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Rational(q) => write!(f, "{q}"),
            ClosedForm::Constant(s) => write!(f, "{s}"),
            ClosedForm::Sum(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            ClosedForm::Product(v) => {
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            ClosedForm::Power { base, exp } => write!(f, "({base})^{exp}"),
            ClosedForm::SurdScale { radicand, coeff } => write!(f, "{coeff}·√{radicand}"),
            ClosedForm::Terms(ms) => {
                if ms.is_empty() {
                    return write!(f, "0");
                }
                for (i, m) in ms.iter().enumerate() {
                    let neg = m.coeff.0 < 0;
                    if i == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    let abs = Q(m.coeff.0.clone().abs());
                    let unit = abs.0 == 1 && !m.factors.is_empty();
                    if !unit {
                        write!(f, "{abs}")?;
                    }
                    for (j, (s, e)) in m.factors.iter().enumerate() {
                        if j > 0 || !unit {
                            write!(f, "·")?;
                        }
                        if *e == 1 {
                            write!(f, "{s}")?;
                        } else {
                            write!(f, "{s}^{e}")?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn zero_is_zero() {
        assert!(eval_closed_form(&ClosedForm::zero(), &ctx())
            .unwrap()
            .is_zero());
        let empty = ClosedForm::Terms(vec![]);
        assert!(eval_closed_form(&empty, &ctx()).unwrap().is_zero());
    }

    #[test]
    fn terms_shorthand_parses_and_evaluates() {
        let json = r#"{"terms": [["1/24", "pi^2"], ["-1/2", "lambda^2"]]}"#;
        let cf: ClosedForm = serde_json::from_str(json).unwrap();
        let v = eval_closed_form(&cf, &ctx()).unwrap();
        let p = ctx().bits();
        let pi = Float::with_val(p, Constant::Pi);
        let l = Float::with_val(p, Constant::Log2);
        let want = pi.square() / 24u32 - l.square() / 2u32;
        assert!((v.re - want).abs().to_f64() < 1e-60);
        let back = serde_json::to_string(&cf).unwrap();
        let again: ClosedForm = serde_json::from_str(&back).unwrap();
        assert_eq!(cf, again);
    }

    #[test]
    fn tree_nodes_evaluate() {
        let cf = ClosedForm::Sum(vec![
            ClosedForm::Product(vec![
                ClosedForm::SurdScale {
                    radicand: 2,
                    coeff: Q::new(1, 2),
                },
                ClosedForm::Power {
                    base: Box::new(ClosedForm::constant("sqrt2")),
                    exp: -1,
                },
            ]),
            ClosedForm::Rational(Q::new(-1, 2)),
        ]);
        let v = eval_closed_form(&cf, &ctx()).unwrap();
        assert!(v.abs().to_f64() < 1e-60);
    }

    #[test]
    fn unknown_symbols_surface() {
        let cf = ClosedForm::constant("not_a_constant");
        assert!(matches!(
            eval_closed_form(&cf, &ctx()),
            Err(Error::UnknownConstant(_))
        ));
        assert!(cf.check_symbols().is_err());
    }

    #[test]
    fn refinement_is_stable() {
        let cf: ClosedForm = serde_json::from_str(
            r#"{"terms": [["25/12", "re_li3_e_2pi5"], ["1/2", "zeta3"], ["-12", "sqrt2", "li2_sqrt2m1"]]}"#,
        )
        .unwrap();
        let a = eval_closed_form(&cf, &ctx()).unwrap();
        let b = eval_closed_form(&cf, &ctx().doubled()).unwrap();
        assert!((&a - &b.with_prec(a.prec())).abs().to_f64() < 1e-50);
    }

    #[test]
    fn starved_budget_is_reported() {
        let cf: ClosedForm = serde_json::from_str(r#"{"terms": [["1", "pi"]]}"#).unwrap();
        let thin = PrecisionContext::new(200, 10, 210).unwrap();
        let v = cf.eval_inner(64, &mut ErrorBudget::new(64));
        assert!(v.is_ok());
        let mut b = ErrorBudget::new(64);
        cf.eval_inner(64, &mut b).unwrap();
        assert!(b.check(&thin).is_err());
    }

    #[test]
    fn coefficient_handles_and_display() {
        let mut cf: ClosedForm =
            serde_json::from_str(r#"{"terms": [["-33/16", "zeta3"], ["pi", "catalan"]]}"#).unwrap();
        assert_eq!(cf.coefficients_mut().len(), 2);
        *cf.coefficients_mut()[1] = Q::int(2);
        assert_eq!(cf.to_string(), "-33/16·zeta3 + 2·pi·catalan");
    }
}
