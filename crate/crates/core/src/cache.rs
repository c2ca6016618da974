//! On-disk artifact cache: one JSON file per artifact named `{kind}-{n}.json`.
//!
//! Writes go to a temporary file in the same directory followed by a rename,
//! so readers never observe a partial file and concurrent writers of the same
//! artifact simply replace each other's identical content.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "QES_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub name: String,
    pub bytes: u64,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$QES_CACHE_DIR` if set, otherwise `.qes-cache` in the working
    /// directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".qes-cache")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: &str, n: usize) -> PathBuf {
        self.dir.join(format!("{kind}-{n}.json"))
    }

    /// The cached value, or `None` when absent or unreadable.
    pub fn get<T: DeserializeOwned>(&self, kind: &str, n: usize) -> Option<T> {
        let bytes = fs::read(self.path(kind, n)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    pub fn put<T: Serialize>(&self, kind: &str, n: usize, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(kind, n);
        let tmp = self.dir.join(format!(".{kind}-{n}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    /// Returns the cached value or computes, stores and returns it.
    pub fn get_or_insert_with<T, F>(&self, kind: &str, n: usize, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(kind, n) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(kind, n, &v)?;
        Ok(v)
    }

    /// Cached artifacts sorted by name.
    pub fn list(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in rd {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.ends_with(".json") && !name.starts_with('.') {
                out.push(CacheEntry { name, bytes: entry.metadata()?.len() });
            }
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(out)
    }

    /// Removes every cached artifact and returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.list()?;
        for e in &entries {
            fs::remove_file(self.dir.join(&e.name))?;
        }
        Ok(entries.len())
    }
}
