//! Shared inputs for the criterion benches.

use cmzv_core::catalog::{bundled_catalog, IdentityRecord};
use cmzv_core::closed_form::{eval_closed_form, ClosedForm};
use cmzv_core::relation::{preset, RelationProblem};
use cmzv_core::series::eval_series;
use cmzv_core::{PrecisionContext, Result};

pub const DIGITS: [u32; 3] = [50, 100, 200];

pub fn record(id: &str) -> IdentityRecord {
    bundled_catalog()
        .get(id)
        .unwrap_or_else(|| panic!("no record {id}"))
        .clone()
}

/// The relation problem for a catalog series over a named preset, built at
/// `digits` without running the search.
pub fn relation_problem(id: &str, preset_name: &str, digits: u32) -> Result<RelationProblem> {
    let ctx = PrecisionContext::with_target(digits);
    let p = preset(preset_name).unwrap_or_else(|| panic!("no preset {preset_name}"));
    let mut basis = Vec::new();
    for e in p.elements {
        let factors: Vec<(&str, i32)> = e
            .iter()
            .map(|f| match f.split_once('^') {
                Some((s, k)) => (s, k.parse().expect("integer exponent")),
                None => (*f, 1),
            })
            .collect();
        let cf = ClosedForm::Terms(vec![cmzv_core::closed_form::Monomial::new(
            1.into(),
            &factors,
        )]);
        basis.push((e.join("·"), eval_closed_form(&cf, &ctx)?.re));
    }
    Ok(RelationProblem {
        target: eval_series(&record(id).series, &ctx)?.re,
        basis,
        max_coeff_digits: p.max_coeff_digits,
        precision_digits: digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmzv_core::relation::pslq;

    #[test]
    fn fixtures_are_solvable() {
        let p = relation_problem("sun-3k-s3", "level4-w3", 60).unwrap();
        assert!(pslq(&p).unwrap().is_some());
    }
}
