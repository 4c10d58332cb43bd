//! The identity catalog: records with two or three independently
//! evaluable sides, schema validation and bulk verification.

mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::closed_form::ClosedForm;
use crate::contour::IntegralSpec;
use crate::error::{Error, Result};
use crate::series::{Argument, ParametricFamily, SeriesSpec};
use crate::util::Q;

pub use verify::{
    summarize, to_jsonl, verify, verify_all, verify_with, GroupSummary, PairCheck, Status, Summary,
    VerificationReport, VerifyOptions,
};

const BUNDLED: &str = include_str!("../../data/catalog.json");

/// Levels admitted in a space tag.
pub const LEVELS: [u32; 9] = [2, 4, 5, 8, 9, 12, 16, 18, 24];

/// One of the evaluable sides of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Series,
    Integral,
    Closed,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Series => "series",
            Side::Integral => "integral",
            Side::Closed => "closed",
        })
    }
}

/// Algebraic prefactor multiplying the period space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prefactor {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "sqrt2")]
    Sqrt2,
    #[serde(rename = "sqrt3")]
    Sqrt3,
    #[serde(rename = "sqrt_1_pm_inv_sqrt2")]
    Sqrt1PmInvSqrt2,
    #[serde(rename = "c_2_9")]
    C29,
    #[serde(rename = "c_4_9")]
    C49,
    #[serde(rename = "mixed")]
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceTag {
    pub weight: u32,
    pub level: u32,
    pub prefactor: Prefactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    #[serde(rename = "ref")]
    pub reference: String,
    pub quote: String,
}

/// A record whose sides hold for every angle of a family; verified on
/// `points` equispaced interior angles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub family: ParametricFamily,
    pub points: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRecord {
    pub id: String,
    pub group: String,
    pub series: SeriesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<IntegralSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceTag>,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_grid: Option<AngleGrid>,
}

impl IdentityRecord {
    /// Sides present in the record; a grid record always has a closed side.
    pub fn sides(&self) -> Vec<Side> {
        let mut out = vec![Side::Series];
        if self.integral.is_some() {
            out.push(Side::Integral);
        }
        if self.closed_form.is_some() || self.angle_grid.is_some() {
            out.push(Side::Closed);
        }
        out
    }

    /// Number of rational coefficients in the closed side.
    pub fn mutation_count(&self) -> usize {
        self.closed_form
            .as_ref()
            .map_or(0, |c| c.clone().coefficients_mut().len())
    }

    /// Copy with the `index`-th closed-form coefficient replaced by `f(c)`.
    pub fn mutated(&self, index: usize, f: impl FnOnce(&Q) -> Q) -> Option<IdentityRecord> {
        let mut out = self.clone();
        let cf = out.closed_form.as_mut()?;
        let mut coeffs = cf.coefficients_mut();
        let slot = coeffs.get_mut(index)?;
        **slot = f(slot);
        Some(out)
    }

    /// The grid angles `ν_j = j·u/(n+1)`, `j = 1..n`, for a family on `(0, uπ)`.
    pub fn grid_angles(&self, points_override: Option<u32>) -> Vec<Q> {
        let Some(grid) = &self.angle_grid else {
            return Vec::new();
        };
        let n = points_override.unwrap_or(grid.points);
        let end = grid.family.interval_end();
        (1..=n)
            .map(|j| Q(&end * rug::Rational::from((j, n + 1))))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let err = |path: &str, message: String| Error::SchemaError {
            record: self.id.clone(),
            path: path.into(),
            message,
        };
        if self.id.trim().is_empty() {
            return Err(err("id", "record id is empty".into()));
        }
        if self.group.trim().is_empty() {
            return Err(err("group", "group is empty".into()));
        }
        if self.sides().len() < 2 {
            return Err(err(
                "",
                "a record needs at least two evaluable sides".into(),
            ));
        }
        if self.source.reference.trim().is_empty() || self.source.quote.trim().is_empty() {
            return Err(err(
                "source",
                "reference and quote must be non-empty".into(),
            ));
        }
        self.series
            .validate()
            .map_err(|e| err("series", e.to_string()))?;
        check_argument(self.series.argument.as_ref())
            .map_err(|e| err("series.argument", e.to_string()))?;
        if let Some(cf) = &self.closed_form {
            cf.check_symbols()
                .map_err(|e| err("closed_form", e.to_string()))?;
        }
        if let Some(int) = &self.integral {
            int.validate().map_err(|e| err("integral", e.to_string()))?;
            check_argument(Some(&int.x)).map_err(|e| err("integral.x", e.to_string()))?;
            let twin = int.counterpart_series();
            if twin.kind != self.series.kind
                || !same_weight(&twin, &self.series)
                || self.series.s != 0
                || Some(&int.x) != self.series.argument.as_ref()
            {
                return Err(err(
                    "integral",
                    "integral does not represent the series side".into(),
                ));
            }
        }
        match (&self.angle_grid, &self.space) {
            (Some(grid), _) => {
                if grid.points == 0 {
                    return Err(err(
                        "angle_grid.points",
                        "grid needs at least one point".into(),
                    ));
                }
                let Some(Argument::Parametric { angle, .. }) = &self.series.argument else {
                    return Err(err(
                        "series.argument",
                        "grid records need a parametric argument".into(),
                    ));
                };
                let twin = grid.family.series_spec(angle);
                if twin.kind != self.series.kind
                    || twin.s != self.series.s
                    || twin.weight_terms() != self.series.weight_terms()
                    || twin.argument != self.series.argument
                {
                    return Err(err(
                        "series",
                        format!("series is not the {} family", grid.family.name()),
                    ));
                }
            }
            (None, None) => return Err(err("space", "missing space tag".into())),
            (None, Some(space)) => {
                if !LEVELS.contains(&space.level) {
                    return Err(err(
                        "space.level",
                        format!("level {} is not admitted", space.level),
                    ));
                }
                if space.weight == 0 {
                    return Err(err("space.weight", "weight must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Weight equality up to the order of factors inside each term.
fn same_weight(a: &SeriesSpec, b: &SeriesSpec) -> bool {
    let norm = |s: &SeriesSpec| {
        let mut ts: Vec<String> = s
            .weight_terms()
            .iter()
            .map(|t| {
                let mut fs: Vec<String> =
                    t.factors.iter().map(|f| String::from(f.clone())).collect();
                fs.sort();
                format!("{}|{:?}|{}", t.coeff, t.constant, fs.join(","))
            })
            .collect();
        ts.sort();
        ts
    };
    norm(a) == norm(b)
}

fn check_argument(arg: Option<&Argument>) -> Result<()> {
    match arg {
        Some(Argument::Closed(cf)) => cf.check_symbols(),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub records: Vec<IdentityRecord>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Group names in first-appearance order.
    pub fn groups(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.records
            .iter()
            .filter(|r| seen.insert(r.group.as_str()))
            .map(|r| r.group.as_str())
            .collect()
    }

    /// Records matching an optional group and optional id.
    pub fn select(&self, group: Option<&str>, id: Option<&str>) -> Vec<&IdentityRecord> {
        self.records
            .iter()
            .filter(|r| group.is_none_or(|g| r.group == g))
            .filter(|r| id.is_none_or(|i| r.id == i))
            .collect()
    }
}

/// The catalog shipped with the crate.
pub fn bundled_catalog() -> Catalog {
    parse_catalog(BUNDLED).expect("bundled catalog is valid")
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::SchemaError {
        record: "<file>".into(),
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_catalog(&text)
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let file_err = |path: &str, message: String| Error::SchemaError {
        record: "<file>".into(),
        path: path.into(),
        message,
    };
    if text.trim().is_empty() {
        return Err(file_err("", "catalog file is empty".into()));
    }
    let root: Value = serde_json::from_str(text).map_err(|e| file_err("", e.to_string()))?;
    let version = root
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| file_err("version", "missing or non-integer version".into()))?;
    let raw = root
        .get("records")
        .and_then(Value::as_array)
        .ok_or_else(|| file_err("records", "missing records array".into()))?;
    if raw.is_empty() {
        return Err(file_err("records", "catalog has no records".into()));
    }
    let mut records = Vec::with_capacity(raw.len());
    let mut ids = BTreeSet::new();
    for (i, v) in raw.iter().enumerate() {
        let label = v
            .get("id")
            .and_then(Value::as_str)
            .map_or_else(|| format!("#{i}"), str::to_owned);
        let rec: IdentityRecord =
            serde_path_to_error::deserialize(v).map_err(|e| Error::SchemaError {
                record: label.clone(),
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        rec.validate()?;
        if !ids.insert(rec.id.clone()) {
            return Err(Error::SchemaError {
                record: rec.id,
                path: "id".into(),
                message: "duplicate id".into(),
            });
        }
        records.push(rec);
    }
    Ok(Catalog {
        version: version as u32,
        records,
    })
}
