use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{IdentityRecord, Side};
use crate::closed_form::eval_closed_form;
use crate::complex::Complex;
use crate::contour::eval_integral;
use crate::error::{Error, Result};
use crate::precision::{agreed_digits, PrecisionContext};
use crate::series::{eval_series, Argument};
use crate::util::Q;

/// Digits below the target a pair may lose and still pass.
pub const SLACK_DIGITS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Agreement between two sides, possibly at one grid angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub a: Side,
    pub b: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<Q>,
    /// decimal digits of absolute agreement, rounded to 0.01
    pub digits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub group: String,
    pub status: Status,
    pub target_digits: u32,
    pub required_digits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_digits: Option<f64>,
    pub checks: Vec<PairCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// overrides the number of grid angles of parametric records
    pub angles: Option<u32>,
}

pub fn verify(record: &IdentityRecord, ctx: &PrecisionContext) -> VerificationReport {
    verify_with(record, ctx, &VerifyOptions::default())
}

pub fn verify_with(
    record: &IdentityRecord,
    ctx: &PrecisionContext,
    opts: &VerifyOptions,
) -> VerificationReport {
    let start = Instant::now();
    let required = ctx.target_digits().saturating_sub(SLACK_DIGITS);
    let cap = ctx.working_digits();
    let mut checks = Vec::new();
    let outcome = if record.angle_grid.is_some() {
        record
            .grid_angles(opts.angles)
            .iter()
            .try_for_each(|nu| compare(&grid_sides(record, nu, ctx)?, Some(nu), cap, &mut checks))
    } else {
        fixed_sides(record, ctx).and_then(|sides| compare(&sides, None, cap, &mut checks))
    };
    let min_digits = checks.iter().map(|c| c.digits).reduce(f64::min);
    let ok =
        outcome.is_ok() && !checks.is_empty() && min_digits.is_some_and(|d| d >= required as f64);
    VerificationReport {
        id: record.id.clone(),
        group: record.group.clone(),
        status: if ok { Status::Pass } else { Status::Fail },
        target_digits: ctx.target_digits(),
        required_digits: required,
        min_digits,
        checks,
        error: outcome.err().map(|e| e.to_string()),
        wall_ms: Some(start.elapsed().as_millis() as u64),
    }
}

fn fixed_sides(record: &IdentityRecord, ctx: &PrecisionContext) -> Result<Vec<(Side, Complex)>> {
    let mut out = vec![(Side::Series, eval_series(&record.series, ctx)?)];
    if let Some(int) = &record.integral {
        out.push((Side::Integral, eval_integral(int, ctx)?));
    }
    if let Some(cf) = &record.closed_form {
        out.push((Side::Closed, eval_closed_form(cf, ctx)?));
    }
    Ok(out)
}

fn at_angle(arg: &Argument, nu: &Q) -> Argument {
    match arg {
        Argument::Parametric { coeff, mult, .. } => Argument::Parametric {
            coeff: coeff.clone(),
            mult: mult.clone(),
            angle: nu.clone(),
        },
        other => other.clone(),
    }
}

fn grid_sides(
    record: &IdentityRecord,
    nu: &Q,
    ctx: &PrecisionContext,
) -> Result<Vec<(Side, Complex)>> {
    let grid = record.angle_grid.as_ref().expect("grid record");
    let end = grid.family.interval_end();
    if nu.0 <= 0 || nu.0 >= end {
        return Err(Error::AngleOutOfRange {
            angle: format!("{nu}π"),
            interval: format!("(0, {end}π)"),
        });
    }
    let mut series = record.series.clone();
    series.argument = series.argument.as_ref().map(|a| at_angle(a, nu));
    let mut out = vec![(Side::Series, eval_series(&series, ctx)?)];
    if let Some(int) = &record.integral {
        let mut int = int.clone();
        int.x = at_angle(&int.x, nu);
        out.push((Side::Integral, eval_integral(&int, ctx)?));
    }
    let closed = grid.family.closed_side(&nu.0, ctx.bits() + 16);
    out.push((Side::Closed, Complex::from_real(closed)));
    Ok(out)
}

fn compare(
    sides: &[(Side, Complex)],
    angle: Option<&Q>,
    cap: u32,
    out: &mut Vec<PairCheck>,
) -> Result<()> {
    for (i, (sa, va)) in sides.iter().enumerate() {
        for (sb, vb) in &sides[i + 1..] {
            let diff = (va - vb).abs();
            let digits = (agreed_digits(&diff, cap) * 100.0).floor() / 100.0;
            out.push(PairCheck {
                a: *sa,
                b: *sb,
                angle: angle.cloned(),
                digits,
            });
        }
    }
    Ok(())
}

/// Verifies records in parallel; reports come back in input order.
pub fn verify_all(
    records: &[&IdentityRecord],
    ctx: &PrecisionContext,
    opts: &VerifyOptions,
    threads: Option<usize>,
) -> Result<Vec<VerificationReport>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidContext(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        records
            .par_iter()
            .map(|r| verify_with(r, ctx, opts))
            .collect()
    }))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub groups: BTreeMap<String, GroupSummary>,
}

pub fn summarize(reports: &[VerificationReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        let g = s.groups.entry(r.group.clone()).or_default();
        s.total += 1;
        if r.passed() {
            s.passed += 1;
            g.passed += 1;
        } else {
            s.failed += 1;
            g.failed += 1;
        }
    }
    s
}

/// One JSON object per line; `timing = false` drops the wall-clock field so
/// that repeated runs are byte-identical.
pub fn to_jsonl(reports: &[VerificationReport], timing: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let line = if timing {
            serde_json::to_string(r)
        } else {
            serde_json::to_string(&VerificationReport {
                wall_ms: None,
                ..r.clone()
            })
        };
        out.push_str(&line.expect("reports serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::bundled_catalog;
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_target(30)
    }

    #[test]
    fn elementary_record_passes() {
        let c = bundled_catalog();
        let r = verify(c.get("sun-3k-s2").unwrap(), &ctx());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 1);
        assert!(r.min_digits.unwrap() >= 25.0);
    }

    #[test]
    fn three_sided_record_has_three_pairs() {
        let c = bundled_catalog();
        let r = verify(c.get("sun-2k8-H2k2").unwrap(), &ctx());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn sign_flip_fails() {
        let c = bundled_catalog();
        let rec = c.get("sun-3k-s3").unwrap();
        for i in 0..rec.mutation_count() {
            let m = rec.mutated(i, |q| Q(rug::Rational::from(-&q.0))).unwrap();
            let r = verify(&m, &ctx());
            assert_eq!(r.status, Status::Fail, "coefficient {i}");
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn grid_record_checks_every_angle() {
        let c = bundled_catalog();
        let rec = c.get("param-3k-H3k-H2k").unwrap();
        let r = verify_with(rec, &ctx(), &VerifyOptions { angles: Some(4) });
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 4);
        assert!(r.checks.iter().all(|c| c.angle.is_some()));
    }

    #[test]
    fn evaluation_error_is_reported_not_raised() {
        let c = bundled_catalog();
        let mut rec = c.get("sun-3k-s2").unwrap().clone();
        rec.series.argument = Some(Argument::rational(7, 1));
        let r = verify(&rec, &ctx());
        assert_eq!(r.status, Status::Fail);
        assert!(r.error.is_some());
    }

    #[test]
    fn jsonl_is_deterministic_and_summary_counts() {
        let c = bundled_catalog();
        let recs: Vec<_> = ["sun-3k-s1", "sun-3k-s2", "level5-odd3"]
            .iter()
            .map(|id| c.get(id).unwrap())
            .collect();
        let a = verify_all(&recs, &ctx(), &VerifyOptions::default(), Some(3)).unwrap();
        let b = verify_all(&recs, &ctx(), &VerifyOptions::default(), Some(1)).unwrap();
        assert_eq!(to_jsonl(&a, false), to_jsonl(&b, false));
        assert_eq!(
            a.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(),
            ["sun-3k-s1", "sun-3k-s2", "level5-odd3"]
        );
        let s = summarize(&a);
        assert_eq!((s.total, s.passed), (3, 3));
        assert_eq!(s.groups["inverse-3k"].passed, 2);
        assert_eq!(to_jsonl(&a, false).lines().count(), 3);
    }
}
