use std::io::Write;
use std::path::Path;

use cmzv_core::relation::{hunt_value, preset, Basis, HuntOutcome, PRESETS};
use cmzv_core::series::{eval_series, SeriesSpec};
use cmzv_core::PrecisionContext;
use rug::ops::Pow;
use rug::Float;
use serde::Deserialize;
use serde_json::json;

use super::{catalog, csv_table};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::parse;

const CUSTOM_MAX_DIGITS: u32 = 3;

pub struct HuntArgs {
    /// a catalog id, inline JSON, or a JSON file
    pub target: String,
    pub preset: Option<String>,
    pub basis: Option<String>,
    pub max_digits: Option<u32>,
    pub perturb: Option<u32>,
}

/// `{target_spec, basis_labels, digits}`; labels are `*`-joined factors and
/// `digits` raises, never lowers, the configured precision.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Problem {
    target_spec: SeriesSpec,
    basis_labels: Vec<String>,
    digits: Option<u32>,
    max_coeff_digits: Option<u32>,
}

struct Target {
    name: String,
    series: SeriesSpec,
    basis: Option<Basis>,
    digits: Option<u32>,
    /// `level{N}-w{k}` from the record's space tag
    implied_preset: Option<String>,
}

fn inline_target(text: &str) -> CliResult<Target> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("target_spec").is_some() {
        let p: Problem = parse(text)?;
        let max = p.max_coeff_digits.unwrap_or(CUSTOM_MAX_DIGITS);
        return Ok(Target {
            name: "problem".into(),
            series: p.target_spec,
            basis: Some(Basis::parse(&p.basis_labels.join(","), max)),
            digits: p.digits,
            implied_preset: None,
        });
    }
    Ok(Target {
        name: "inline".into(),
        series: parse(text)?,
        basis: None,
        digits: None,
        implied_preset: None,
    })
}

fn resolve_target(arg: &str, cfg: &RunConfig) -> CliResult<Target> {
    if arg.trim_start().starts_with('{') {
        return inline_target(arg);
    }
    let cat = catalog(cfg)?;
    if let Some(r) = cat.get(arg) {
        return Ok(Target {
            name: r.id.clone(),
            series: r.series.clone(),
            basis: None,
            digits: None,
            implied_preset: r
                .space
                .as_ref()
                .map(|s| format!("level{}-w{}", s.level, s.weight)),
        });
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return inline_target(&text);
    }
    Err(CliError::Usage(format!(
        "`{arg}` is neither a catalog id, inline JSON, nor a file"
    )))
}

fn named_preset(name: &str) -> CliResult<Basis> {
    preset(name).map(|p| p.basis()).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Usage(format!(
            "unknown preset `{name}`; available: {}",
            names.join(", ")
        ))
    })
}

fn choose_basis(args: &HuntArgs, target: &mut Target) -> CliResult<Basis> {
    let mut basis = match (&args.preset, &args.basis, target.basis.take()) {
        (Some(name), _, _) => named_preset(name)?,
        (None, Some(text), _) => Basis::parse(text, CUSTOM_MAX_DIGITS),
        (None, None, Some(b)) => b,
        (None, None, None) => match target.implied_preset.as_deref().and_then(preset) {
            Some(p) => p.basis(),
            None => return Err(CliError::Usage("no basis: pass --preset or --basis".into())),
        },
    };
    if let Some(d) = args.max_digits {
        basis.max_coeff_digits = d;
    }
    Ok(basis)
}

pub fn run(args: HuntArgs, cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let mut target = resolve_target(&args.target, cfg)?;
    let basis = choose_basis(&args, &mut target)?;
    target.series.validate()?;

    let ctx = match target.digits {
        Some(d) if d > cfg.digits => PrecisionContext::with_target(d),
        _ => cfg.context(),
    };
    let series = &target.series;
    let shift = args.perturb;
    let value = |c: &PrecisionContext| {
        let v = eval_series(series, c)?.re;
        Ok(match shift {
            Some(e) => v + Float::with_val(c.bits(), 10).pow(-(e as i32)),
            None => v,
        })
    };
    let found = hunt_value(value, &basis, &ctx)?;

    let text = match cfg.output {
        Format::Pretty => pretty(&target.name, &basis, &found),
        Format::Json => format!("{}\n", json!({"target": target.name, "outcome": found})),
        Format::Csv => csv_table(
            &[
                "target",
                "basis",
                "closed_form",
                "coefficients",
                "precision_digits",
                "confirm_residual_log10",
            ],
            [vec![
                target.name.clone(),
                found.basis.clone(),
                found.closed_form.to_string(),
                coeff_list(&found),
                found.precision_digits.to_string(),
                found.confirm_residual_log10.to_string(),
            ]],
        )?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn coeff_list(h: &HuntOutcome) -> String {
    h.relation
        .coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn pretty(name: &str, basis: &Basis, h: &HuntOutcome) -> String {
    let mut rel = String::new();
    for (i, c) in h.relation.coeffs.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        let label = if i == 0 {
            "x"
        } else {
            h.labels[i - 1].as_str()
        };
        let sign = if *c < 0 { "-" } else { "+" };
        if rel.is_empty() {
            rel = format!(
                "{}{}·{label}",
                if *c < 0 { "-" } else { "" },
                c.clone().abs()
            );
        } else {
            rel.push_str(&format!(" {sign} {}·{label}", c.clone().abs()));
        }
    }
    format!(
        "target     {name}\nbasis      {} ({} elements, coefficients below 10^{})\nrelation   {} = 0\ncandidate  x = {}\nresidual   10^{:.1} at {} digits, 10^{:.1} at {} digits\n",
        basis.name,
        basis.elements.len(),
        basis.max_coeff_digits,
        rel,
        h.closed_form,
        h.relation.residual_log10,
        h.precision_digits,
        h.confirm_residual_log10,
        2 * h.precision_digits,
    )
}
