//! Content-addressed result cache.
//!
//! Reports are stored as JSON files named by the sha256 of
//! (version, command, config). A stored report is served again only if
//! its embedded version, command, and config echo all match the current
//! request; anything unreadable or mismatched counts as corrupt and is
//! recomputed (with a warning).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::report::Report;

/// Resolve the cache directory: `DMCT_CACHE_DIR`, else `~/.cache/dmct`,
/// else `.dmct-cache` in the working directory.
pub fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("DMCT_CACHE_DIR") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    if let Ok(home) = std::env::var("HOME") {
        if !home.is_empty() {
            return Path::new(&home).join(".cache").join("dmct");
        }
    }
    PathBuf::from(".dmct-cache")
}

/// The content address of a request.
pub fn cache_key(version: &str, command: &str, config: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(version.as_bytes());
    h.update([0u8]);
    h.update(command.as_bytes());
    for (k, v) in config {
        h.update([0u8]);
        h.update(k.as_bytes());
        h.update([1u8]);
        h.update(v.as_bytes());
    }
    format!("{:x}", h.finalize())
}

pub enum Loaded {
    Hit(Report),
    Miss,
    /// The warning to print before recomputing.
    Corrupt(String),
}

pub fn load(dir: &Path, key: &str, command: &str, config: &BTreeMap<String, String>) -> Loaded {
    let path = dir.join(format!("{key}.json"));
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(_) => return Loaded::Miss,
    };
    match serde_json::from_str::<Report>(&text) {
        Ok(report)
            if report.version == env!("CARGO_PKG_VERSION")
                && report.command == command
                && report.config == *config =>
        {
            Loaded::Hit(report)
        }
        Ok(_) => Loaded::Corrupt(format!(
            "cache entry {} does not match the request; recomputing",
            path.display()
        )),
        Err(e) => Loaded::Corrupt(format!(
            "cache entry {} is unreadable ({e}); recomputing",
            path.display()
        )),
    }
}

/// Store a report; errors are returned as printable warnings with paths.
pub fn store(dir: &Path, key: &str, report: &Report) -> Result<(), String> {
    fs::create_dir_all(dir)
        .map_err(|e| format!("cannot create cache directory {}: {e}", dir.display()))?;
    let path = dir.join(format!("{key}.json"));
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
