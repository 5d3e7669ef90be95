//! Timestamped report files for regression diffs between runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub written_at_ns: u128,
    pub wall_time_ms: u128,
    pub report: VerificationReport,
}

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    fn suite_dir(&self, suite: &str) -> PathBuf {
        self.root.join(suite)
    }

    /// Most recent entry for this suite whose params match `report`.
    pub fn latest_matching(&self, report: &VerificationReport) -> Result<Option<(PathBuf, CacheEntry)>> {
        let dir = self.suite_dir(&report.suite);
        if !dir.is_dir() {
            return Ok(None);
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for path in files.into_iter().rev() {
            let entry = read_entry(&path)?;
            if entry.report.params == report.params {
                return Ok(Some((path, entry)));
            }
        }
        Ok(None)
    }

    pub fn write(&self, report: &VerificationReport, wall_time_ms: u128) -> Result<PathBuf> {
        let dir = self.suite_dir(&report.suite);
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let now = SystemTime::now().duration_since(UNIX_EPOCH)?.as_nanos();
        let mut path = dir.join(format!("{now:020}.json"));
        let mut bump = 0;
        while path.exists() {
            bump += 1;
            path = dir.join(format!("{now:020}-{bump}.json"));
        }
        let entry = CacheEntry {
            written_at_ns: now,
            wall_time_ms,
            report: report.clone(),
        };
        fs::write(&path, serde_json::to_string_pretty(&entry)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn read_entry(path: &Path) -> Result<CacheEntry> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
