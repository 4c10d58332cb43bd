pub mod admin;
pub mod eval;
pub mod hunt;
pub mod verify;

use cmzv_core::catalog::{bundled_catalog, load_catalog, Catalog};

use crate::config::RunConfig;
use crate::error::CliResult;

pub fn catalog(cfg: &RunConfig) -> CliResult<Catalog> {
    Ok(match &cfg.catalog_path {
        Some(p) => load_catalog(p)?,
        None => bundled_catalog(),
    })
}

/// CSV text from a header and rows.
pub fn csv_table(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
