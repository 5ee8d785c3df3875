//! On-disk slice cache: one JSON file per `(instance hash, q, l)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use logjac::{SliceKey, ENGINE_VERSION};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub hash: String,
    pub key: SliceKey,
    pub dim: usize,
    /// Rank of the ideal inside `A_q(l)`.
    pub rank: usize,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub engine_version: String,
}

impl CacheEntry {
    pub fn new(hash: &str, key: SliceKey, dim: usize, rank: usize) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        CacheEntry { hash: hash.into(), key, dim, rank, timestamp, engine_version: ENGINE_VERSION.into() }
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        Self::with_version(dir, ENGINE_VERSION)
    }

    /// A cache that only accepts entries stamped with `version`.
    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir, version: version.into() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, hash: &str, key: SliceKey) -> PathBuf {
        self.dir.join(format!("{hash}_q{}_l{}.json", key.q, key.l))
    }

    /// Unreadable, mismatched or stale entries are misses.
    pub fn get(&self, hash: &str, key: SliceKey) -> Option<CacheEntry> {
        let bytes = fs::read(self.path(hash, key)).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
        (entry.engine_version == self.version && entry.hash == hash && entry.key == key).then_some(entry)
    }

    /// Write-temp-then-rename, so readers see either nothing or a whole entry.
    pub fn put(&self, entry: &CacheEntry) -> std::io::Result<()> {
        let target = self.path(&entry.hash, entry.key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            target.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&serde_json::to_vec_pretty(entry).expect("cache entry serializes"))?;
        file.sync_all()?;
        drop(file);
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}
