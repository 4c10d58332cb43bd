use std::io::Write;

use cmzv_core::catalog::{load_catalog, Catalog};
use serde_json::json;

use super::{catalog, csv_table};
use crate::cache::Cache;
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn sides(r: &cmzv_core::catalog::IdentityRecord) -> Vec<String> {
    r.sides().iter().map(|s| s.to_string()).collect()
}

pub fn catalog_list(group: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let cat = catalog(cfg)?;
    let records = cat.select(group, None);
    let text = match cfg.output {
        Format::Pretty => records
            .iter()
            .map(|r| format!("{:<22} {:<18} {}\n", r.id, r.group, sides(r).join("+")))
            .collect(),
        Format::Json => records
            .iter()
            .map(|r| {
                format!(
                    "{}\n",
                    json!({"id": r.id, "group": r.group, "sides": sides(r), "space": r.space})
                )
            })
            .collect(),
        Format::Csv => csv_table(
            &["id", "group", "sides"],
            records
                .iter()
                .map(|r| vec![r.id.clone(), r.group.clone(), sides(r).join("+")]),
        )?,
    };
    emit(out, &text)
}

pub fn catalog_validate(
    path: Option<&std::path::Path>,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> CliResult<()> {
    let cat: Catalog = match path {
        Some(p) => load_catalog(p)?,
        None => catalog(cfg)?,
    };
    let groups = cat.groups();
    let text = match cfg.output {
        Format::Json => format!(
            "{}\n",
            json!({"valid": true, "records": cat.records.len(), "groups": groups})
        ),
        _ => format!(
            "ok: {} records in {} groups\n",
            cat.records.len(),
            groups.len()
        ),
    };
    emit(out, &text)
}

pub fn cache_stats(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let cache = Cache::new(&cfg.cache_dir);
    let s = cache.stats()?;
    let dir = cache.dir().display().to_string();
    let text = match cfg.output {
        Format::Json => format!(
            "{}\n",
            json!({"dir": dir, "entries": s.entries, "bytes": s.bytes})
        ),
        Format::Csv => csv_table(
            &["dir", "entries", "bytes"],
            [vec![dir, s.entries.to_string(), s.bytes.to_string()]],
        )?,
        Format::Pretty => format!("{dir}: {} entries, {} bytes\n", s.entries, s.bytes),
    };
    emit(out, &text)
}

pub fn cache_clear(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let cache = Cache::new(&cfg.cache_dir);
    let n = cache.clear()?;
    emit(
        out,
        &format!("removed {n} entries from {}\n", cache.dir().display()),
    )
}
