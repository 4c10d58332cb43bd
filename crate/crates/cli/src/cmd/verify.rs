use std::fs;
use std::io::Write;
use std::path::PathBuf;

use cmzv_core::catalog::{
    summarize, to_jsonl, verify_all, IdentityRecord, Summary, VerificationReport, VerifyOptions,
};
use glob::Pattern;

use super::{catalog, csv_table};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

pub struct VerifyArgs {
    pub group: Option<String>,
    /// glob over record ids
    pub id: Option<String>,
    pub angles: Option<u32>,
    pub report_dir: Option<PathBuf>,
    pub timing: bool,
}

pub fn run(args: VerifyArgs, cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    if args.angles == Some(0) {
        return Err(CliError::Usage("--angles must be positive".into()));
    }
    let cat = catalog(cfg)?;
    let pattern = match &args.id {
        Some(p) => Some(
            Pattern::new(p).map_err(|e| CliError::Usage(format!("bad id pattern `{p}`: {e}")))?,
        ),
        None => None,
    };
    let selected: Vec<&IdentityRecord> = cat
        .records
        .iter()
        .filter(|r| args.group.as_ref().is_none_or(|g| &r.group == g))
        .filter(|r| pattern.as_ref().is_none_or(|p| p.matches(&r.id)))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Usage(
            "no catalog records match the filter".into(),
        ));
    }

    let opts = VerifyOptions {
        angles: args.angles,
    };
    let reports = verify_all(&selected, &cfg.context(), &opts, Some(cfg.parallelism))?;
    let summary = summarize(&reports);

    if let Some(dir) = &args.report_dir {
        write_reports(dir, &reports, &summary, args.timing)?;
    }
    let text = match cfg.output {
        Format::Pretty => pretty(&reports, &summary),
        Format::Json => format!(
            "{}{}\n",
            to_jsonl(&reports, args.timing),
            serde_json::json!({ "summary": summary })
        ),
        Format::Csv => csv(&reports, args.timing)?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;

    if summary.failed > 0 {
        return Err(CliError::VerifyFailed {
            failed: summary.failed,
            total: summary.total,
        });
    }
    Ok(())
}

fn write_reports(
    dir: &PathBuf,
    reports: &[VerificationReport],
    summary: &Summary,
    timing: bool,
) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files = [
        ("reports.jsonl", to_jsonl(reports, timing)),
        ("reports.csv", csv(reports, timing)?),
        (
            "summary.json",
            serde_json::to_string_pretty(summary)? + "\n",
        ),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

fn pretty(reports: &[VerificationReport], summary: &Summary) -> String {
    let mut s = String::new();
    for r in reports {
        let mark = if r.passed() { "PASS" } else { "FAIL" };
        let digits = r
            .min_digits
            .map_or_else(|| "-".to_string(), |d| format!("{d:.1}"));
        s.push_str(&format!(
            "{mark}  {:<22} {:<18} {digits:>6} / {} digits",
            r.id, r.group, r.required_digits
        ));
        if let Some(e) = &r.error {
            s.push_str(&format!("  ({e})"));
        }
        s.push('\n');
    }
    s.push('\n');
    for (g, c) in &summary.groups {
        s.push_str(&format!(
            "{g:<18} {:>3} passed {:>3} failed\n",
            c.passed, c.failed
        ));
    }
    s.push_str(&format!(
        "{:<18} {:>3} passed {:>3} failed\n",
        "total", summary.passed, summary.failed
    ));
    s
}

fn csv(reports: &[VerificationReport], timing: bool) -> CliResult<String> {
    let mut header = vec![
        "id",
        "group",
        "status",
        "target_digits",
        "required_digits",
        "min_digits",
        "error",
    ];
    if timing {
        header.push("wall_ms");
    }
    let rows = reports.iter().map(|r| {
        let mut row = vec![
            r.id.clone(),
            r.group.clone(),
            if r.passed() { "pass" } else { "fail" }.to_string(),
            r.target_digits.to_string(),
            r.required_digits.to_string(),
            r.min_digits.map(|d| d.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ];
        if timing {
            row.push(r.wall_ms.map(|t| t.to_string()).unwrap_or_default());
        }
        row
    });
    csv_table(&header, rows)
}
