//! On-disk value cache. Entries are JSON files named by the SHA-256 of the
//! canonical spec and the working precision; floats are stored as exact
//! hexadecimal strings.

use std::fs;
use std::path::{Path, PathBuf};

use cmzv_core::Complex;
use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Entry {
    pub kind: String,
    pub spec: Value,
    pub working_digits: u32,
    pub prec: u32,
    pub re: String,
    pub im: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub extra: Value,
}

impl Entry {
    pub fn new(
        kind: &str,
        spec: &Value,
        working_digits: u32,
        value: &Complex,
        extra: Value,
    ) -> Entry {
        Entry {
            kind: kind.to_string(),
            spec: spec.clone(),
            working_digits,
            prec: value.prec(),
            re: value.re.to_string_radix(16, None),
            im: value.im.to_string_radix(16, None),
            extra,
        }
    }

    pub fn value(&self) -> Option<Complex> {
        let part = |s: &str| {
            Float::parse_radix(s, 16)
                .ok()
                .map(|p| Float::with_val(self.prec, p))
        };
        Some(Complex::new(part(&self.re)?, part(&self.im)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub entries: usize,
    pub bytes: u64,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// serde_json maps are ordered, so equal specs hash equally regardless
    /// of how the input was laid out.
    pub fn key(kind: &str, spec: &Value, working_digits: u32) -> String {
        let material = json!({"kind": kind, "spec": spec, "working_digits": working_digits});
        hex::encode(Sha256::digest(material.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Unreadable or mismatched entries count as misses.
    pub fn get(&self, key: &str, kind: &str, spec: &Value, working_digits: u32) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.kind == kind && &e.spec == spec && e.working_digits == working_digits).then_some(e)
    }

    pub fn put(&self, key: &str, entry: &Entry) -> CliResult<()> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let tmp = self.dir.join(format!(".{key}.tmp"));
        let body = serde_json::to_string_pretty(entry)?;
        fs::write(&tmp, body).map_err(|e| CliError::io(&tmp, e))?;
        let dest = self.path(key);
        fs::rename(&tmp, &dest).map_err(|e| CliError::io(dest, e))
    }

    fn entries(&self) -> CliResult<Vec<(PathBuf, u64)>> {
        let iter = match fs::read_dir(&self.dir) {
            Ok(it) => it,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(CliError::io(&self.dir, e)),
        };
        let mut out = Vec::new();
        for item in iter {
            let item = item.map_err(|e| CliError::io(&self.dir, e))?;
            let path = item.path();
            if path.extension().is_some_and(|x| x == "json") {
                let len = item.metadata().map_err(|e| CliError::io(&path, e))?.len();
                out.push((path, len));
            }
        }
        Ok(out)
    }

    pub fn stats(&self) -> CliResult<Stats> {
        let entries = self.entries()?;
        Ok(Stats {
            entries: entries.len(),
            bytes: entries.iter().map(|(_, n)| n).sum(),
        })
    }

    pub fn clear(&self) -> CliResult<usize> {
        let entries = self.entries()?;
        for (path, _) in &entries {
            fs::remove_file(path).map_err(|e| CliError::io(path, e))?;
        }
        Ok(entries.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let prec = 300;
        let v = Complex::new(
            Float::with_val(prec, 2).sqrt(),
            Float::with_val(prec, -1) / 3u32,
        );
        let spec = json!({"k": 2});
        let key = Cache::key("li", &spec, 90);
        cache
            .put(&key, &Entry::new("li", &spec, 90, &v, Value::Null))
            .unwrap();
        let back = cache.get(&key, "li", &spec, 90).unwrap().value().unwrap();
        assert_eq!(back.re, v.re);
        assert_eq!(back.im, v.im);
        assert!(cache.get(&key, "li", &spec, 91).is_none());
        assert_eq!(cache.stats().unwrap().entries, 1);
        assert_eq!(cache.clear().unwrap(), 1);
        assert_eq!(
            cache.stats().unwrap(),
            Stats {
                entries: 0,
                bytes: 0
            }
        );
    }

    #[test]
    fn key_ignores_layout_but_not_precision() {
        let a: Value = serde_json::from_str(r#"{"s": 1, "kind": "inverse_3k"}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{ "kind":"inverse_3k","s":1 }"#).unwrap();
        assert_eq!(Cache::key("series", &a, 65), Cache::key("series", &b, 65));
        assert_ne!(Cache::key("series", &a, 65), Cache::key("series", &a, 66));
        assert_ne!(Cache::key("series", &a, 65), Cache::key("li", &a, 65));
    }

    #[test]
    fn missing_dir_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("absent"));
        assert_eq!(cache.stats().unwrap().entries, 0);
        assert_eq!(cache.clear().unwrap(), 0);
    }
}
