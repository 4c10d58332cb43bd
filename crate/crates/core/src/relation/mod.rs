//! Integer-relation detection and closed-form reconstruction.

mod presets;
mod pslq;

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::closed_form::{eval_closed_form, ClosedForm, Monomial};
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::series::{eval_series, SeriesSpec};
use crate::util::Q;

pub use presets::{preset, Basis, Preset, PRESETS};
pub use pslq::{pslq, required_digits, residual, Relation, RelationProblem};

/// A candidate reduction; advisory only.
#[derive(Debug, Clone, Serialize)]
pub struct HuntOutcome {
    pub basis: String,
    pub closed_form: ClosedForm,
    pub labels: Vec<String>,
    pub relation: Relation,
    pub precision_digits: u32,
    /// `log₁₀` of the residual recomputed at twice the detection precision
    pub confirm_residual_log10: f64,
}

fn element_form(factors: &[String]) -> Result<ClosedForm> {
    let mut parsed = Vec::with_capacity(factors.len());
    for f in factors {
        parsed.push(match f.split_once('^') {
            Some((s, e)) => {
                let e: i32 = e.parse().map_err(|_| {
                    Error::InvalidProblem(format!("bad exponent in basis factor `{f}`"))
                })?;
                (s.to_string(), e)
            }
            None => (f.clone(), 1),
        });
    }
    let cf = ClosedForm::Terms(vec![Monomial {
        coeff: Q::int(1),
        factors: parsed,
    }]);
    cf.check_symbols()?;
    Ok(cf)
}

fn real_value(cf: &ClosedForm, ctx: &PrecisionContext) -> Result<Float> {
    let v = eval_closed_form(cf, ctx)?;
    if Float::with_val(64, v.im.abs_ref()) > ctx.epsilon() {
        return Err(Error::InvalidProblem(format!(
            "basis element {cf} is not real"
        )));
    }
    Ok(v.re)
}

fn basis_values(b: &Basis, ctx: &PrecisionContext) -> Result<Vec<(String, Float)>> {
    b.elements
        .iter()
        .map(|e| Ok((e.join("·"), real_value(&element_form(e)?, ctx)?)))
        .collect()
}

/// Hunts a reduction of a series value over a constant pool.
pub fn hunt_reduction(
    series: &SeriesSpec,
    basis: &Basis,
    ctx: &PrecisionContext,
) -> Result<HuntOutcome> {
    series.validate()?;
    hunt_value(|c| Ok(eval_series(series, c)?.re), basis, ctx)
}

/// Hunts a reduction of `target`, computed at the detection precision and
/// again at twice that precision for confirmation.
pub fn hunt_value<F>(target: F, basis: &Basis, ctx: &PrecisionContext) -> Result<HuntOutcome>
where
    F: Fn(&PrecisionContext) -> Result<Float>,
{
    if basis.elements.is_empty() {
        return Err(Error::InvalidProblem("basis is empty".into()));
    }
    let digits = ctx.target_digits().max(required_digits(
        basis.max_coeff_digits,
        basis.elements.len(),
    ));
    let detect = PrecisionContext::with_target(digits);
    let problem = RelationProblem {
        target: target(&detect)?,
        basis: basis_values(basis, &detect)?,
        max_coeff_digits: basis.max_coeff_digits,
        precision_digits: digits,
    };
    let relation = pslq(&problem)?.ok_or_else(|| {
        Error::NoRelationFound(format!("basis {} at {digits} digits", basis.name))
    })?;
    if relation.coeffs[0] == 0 {
        return Err(Error::NoRelationFound(format!(
            "basis {} is linearly dependent; the relation omits the target",
            basis.name
        )));
    }

    let confirm = PrecisionContext::with_target(2 * digits);
    let mut values = vec![target(&confirm)?];
    values.extend(basis_values(basis, &confirm)?.into_iter().map(|(_, v)| v));
    let r = residual(&relation.coeffs, &values);
    let limit = Float::with_val(64, 10).pow(-(2 * digits as i32 - 30));
    if r >= limit {
        return Err(Error::NoRelationFound(format!(
            "candidate over {} did not persist at {} digits",
            basis.name,
            2 * digits
        )));
    }
    let confirm_residual_log10 = if r.is_zero() {
        f64::NEG_INFINITY
    } else {
        r.log10().to_f64()
    };

    let c0 = Rational::from(&relation.coeffs[0]);
    let mut terms = Vec::new();
    for (c, e) in relation.coeffs[1..].iter().zip(&basis.elements) {
        if *c == 0 {
            continue;
        }
        let q = -Rational::from(c) / &c0;
        let ClosedForm::Terms(mut m) = element_form(e)? else {
            unreachable!()
        };
        m[0].coeff = Q(q);
        terms.extend(m);
    }
    let closed_form = if terms.is_empty() {
        ClosedForm::zero()
    } else {
        ClosedForm::Terms(terms)
    };
    Ok(HuntOutcome {
        basis: basis.name.clone(),
        closed_form,
        labels: problem.basis.into_iter().map(|(l, _)| l).collect(),
        relation,
        precision_digits: digits,
        confirm_residual_log10,
    })
}

/// A `terms` closed form as a map from sorted factor lists to coefficients;
/// `None` for other expression shapes.
pub fn canonical_terms(cf: &ClosedForm) -> Option<BTreeMap<Vec<(String, i32)>, Rational>> {
    let ClosedForm::Terms(ms) = cf else {
        return None;
    };
    let mut out: BTreeMap<Vec<(String, i32)>, Rational> = BTreeMap::new();
    for m in ms {
        let mut powers: BTreeMap<String, i32> = BTreeMap::new();
        for (s, e) in &m.factors {
            *powers.entry(s.clone()).or_default() += e;
        }
        let key: Vec<_> = powers.into_iter().filter(|(_, e)| *e != 0).collect();
        *out.entry(key).or_default() += &m.coeff.0;
    }
    out.retain(|_, c| *c != 0);
    Some(out)
}
