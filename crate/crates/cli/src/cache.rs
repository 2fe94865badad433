//! Content-addressed cache of computed cells: one JSON file per record, named
//! by the SHA-256 of the key. Writes go to a temporary file that is renamed
//! into place, so a reader never sees a half-written record.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use syzlab_core::koszul::CellResult;
use syzlab_core::ENGINE_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub b: i64,
    pub d: u32,
    pub p: usize,
    pub q: i64,
    pub field_tag: String,
    pub engine_version: String,
}

impl CacheKey {
    pub fn new(n: usize, b: i64, d: u32, p: usize, q: i64, field_tag: String) -> Self {
        CacheKey {
            n,
            b,
            d,
            p,
            q,
            field_tag,
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("key serialises");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheValue {
    pub kpq: u64,
    pub middle_dim: u64,
    pub rank_out: u64,
    pub rank_in: u64,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub value: CacheValue,
    pub created_unix: u64,
}

impl CacheRecord {
    pub fn from_cell(key: CacheKey, c: &CellResult, wall_time_ms: u64) -> Self {
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        CacheRecord {
            key,
            value: CacheValue {
                kpq: c.value,
                middle_dim: c.middle_dim,
                rank_out: c.rank_out,
                rank_in: c.rank_in,
                wall_time_ms,
            },
            created_unix,
        }
    }

    pub fn cell(&self) -> CellResult {
        CellResult {
            p: self.key.p,
            q: self.key.q,
            value: self.value.kpq,
            middle_dim: self.value.middle_dim,
            rank_out: self.value.rank_out,
            rank_in: self.value.rank_in,
        }
    }
}

pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn path_of(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// The stored record, or `None` on a miss. Unreadable or mismatching
    /// records are reported on stderr and treated as misses.
    pub fn get(&self, key: &CacheKey) -> Option<CacheRecord> {
        let path = self.path_of(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache record {}: {e}", path.display());
                return None;
            }
        };
        match serde_json::from_str::<CacheRecord>(&text) {
            Ok(r) if r.key == *key && r.value.kpq + r.value.rank_in + r.value.rank_out == r.value.middle_dim => Some(r),
            Ok(_) => {
                eprintln!("warning: ignoring inconsistent cache record {}", path.display());
                None
            }
            Err(e) => {
                eprintln!("warning: ignoring corrupt cache record {}: {e}", path.display());
                None
            }
        }
    }

    pub fn put(&self, record: &CacheRecord) -> std::io::Result<()> {
        let path = self.path_of(&record.key);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(record).expect("record serialises").as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, &path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> CacheKey {
        CacheKey::new(2, 0, 3, 7, 2, "GF(32003)".into())
    }

    fn cell() -> CellResult {
        CellResult {
            p: 7,
            q: 2,
            value: 1,
            middle_dim: 36,
            rank_out: 0,
            rank_in: 35,
        }
    }

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert!(cache.get(&key()).is_none());
        let rec = CacheRecord::from_cell(key(), &cell(), 5);
        cache.put(&rec).unwrap();
        assert_eq!(cache.get(&key()), Some(rec));
    }

    #[test]
    fn version_is_part_of_the_key() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        cache.put(&CacheRecord::from_cell(key(), &cell(), 5)).unwrap();
        let mut old = key();
        old.engine_version = "syzlab-engine-0.0.0".into();
        assert_ne!(old.digest(), key().digest());
        assert!(cache.get(&old).is_none());
    }

    #[test]
    fn corrupt_record_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        fs::write(cache.path_of(&key()), "{ not json").unwrap();
        assert!(cache.get(&key()).is_none());
        let mut rec = CacheRecord::from_cell(key(), &cell(), 5);
        rec.value.kpq = 9;
        cache.put(&rec).unwrap();
        assert!(cache.get(&key()).is_none());
    }
}
