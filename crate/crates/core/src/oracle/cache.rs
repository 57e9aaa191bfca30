//! Append-only on-disk cache of oracle results, one JSON object per line.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use web_time::{SystemTime, UNIX_EPOCH};

use super::{OracleConfig, OracleQuery, OracleResult, Witness};
use crate::{Error, Result, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub value: u64,
    pub witness: Witness,
    pub version: u32,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn from_result(r: &OracleResult) -> Self {
        CacheEntry {
            key: r.cache_key.clone(),
            value: r.value,
            witness: r.witness.clone(),
            version: SCHEMA_VERSION,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    /// Parses the key and re-evaluates the witness against the stored value.
    pub fn revalidate(&self) -> Result<OracleResult> {
        let query: OracleQuery = self.key.parse()?;
        let result = OracleResult {
            query,
            value: self.value,
            witness: self.witness.clone(),
            explored: 0,
            elapsed: Duration::ZERO,
            cache_key: query.key(),
        };
        if result.cache_key != self.key {
            return Err(Error::WitnessInvalid(format!("non-canonical key {:?}", self.key)));
        }
        result.revalidate()?;
        Ok(result)
    }
}

/// Result of checking every cached record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub corrupt_lines: usize,
    /// `(key, reason)` for each record whose witness failed.
    pub failures: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Serialized access to a cache file.
pub struct OracleCache {
    path: PathBuf,
    lock: Mutex<()>,
}

impl OracleCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        OracleCache {
            path: path.into(),
            lock: Mutex::new(()),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All parseable records (last one wins per key) and the number of
    /// corrupt lines skipped.
    fn read(&self) -> Result<(BTreeMap<String, CacheEntry>, usize)> {
        let mut entries = BTreeMap::new();
        let mut corrupt = 0;
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((entries, 0)),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheEntry>(&line) {
                Ok(e) => {
                    entries.insert(e.key.clone(), e);
                }
                Err(err) => {
                    corrupt += 1;
                    log::warn!("{}:{}: skipping corrupt cache line: {err}", self.path.display(), i + 1);
                }
            }
        }
        Ok((entries, corrupt))
    }

    /// Loads every record that still revalidates.
    pub fn load(&self) -> Result<BTreeMap<String, OracleResult>> {
        let _guard = self.lock.lock().expect("cache lock poisoned");
        let (entries, _) = self.read()?;
        let mut out = BTreeMap::new();
        for (key, e) in entries {
            match e.revalidate() {
                Ok(r) => {
                    out.insert(key, r);
                }
                Err(err) => log::warn!("dropping cached {key}: {err}"),
            }
        }
        Ok(out)
    }

    pub fn get(&self, query: &OracleQuery) -> Result<Option<OracleResult>> {
        let _guard = self.lock.lock().expect("cache lock poisoned");
        let (entries, _) = self.read()?;
        Ok(entries.get(&query.key()).and_then(|e| match e.revalidate() {
            Ok(r) => Some(r),
            Err(err) => {
                log::warn!("ignoring cached {}: {err}", e.key);
                None
            }
        }))
    }

    pub fn append(&self, result: &OracleResult) -> Result<()> {
        let _guard = self.lock.lock().expect("cache lock poisoned");
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let line = serde_json::to_string(&CacheEntry::from_result(result)).map_err(|e| Error::Io(e.to_string()))?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{line}")?;
        Ok(())
    }

    /// Cached result if present and valid, otherwise computes and appends.
    pub fn run(&self, query: &OracleQuery, cfg: &OracleConfig) -> Result<OracleResult> {
        if let Some(r) = self.get(query)? {
            return Ok(r);
        }
        let r = query.run(cfg)?;
        self.append(&r)?;
        Ok(r)
    }

    pub fn verify(&self) -> Result<VerifyReport> {
        let _guard = self.lock.lock().expect("cache lock poisoned");
        let (entries, corrupt_lines) = self.read()?;
        let mut report = VerifyReport {
            corrupt_lines,
            ..Default::default()
        };
        for (key, e) in entries {
            report.checked += 1;
            if let Err(err) = e.revalidate() {
                report.failures.push((key, err.to_string()));
            }
        }
        Ok(report)
    }

    pub fn clear(&self) -> Result<()> {
        let _guard = self.lock.lock().expect("cache lock poisoned");
        match fs::remove_file(&self.path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
            _ => Ok(()),
        }
    }
}
