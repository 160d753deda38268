//! One JSON document per computed cell, keyed by `(kind, parity, p, k)`.
//!
//! Entries are written to a temporary file in the cache directory and
//! renamed into place, so concurrent readers never observe a torn file. An
//! entry is only trusted if its schema and engine versions match and the
//! stored hash equals the SHA-256 of the stored payload.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use knotcalc_core::{Parity, ENGINE_VERSION};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cohomology,
    E1,
    D1,
    E2,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Cohomology => "cohomology",
            Kind::E1 => "e1",
            Kind::D1 => "d1",
            Kind::E2 => "e2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Key {
    pub kind: Kind,
    pub parity: Parity,
    pub p: u32,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub engine_version: String,
    pub key: Key,
    pub payload: Value,
    pub hash: String,
}

/// Hex SHA-256 of the canonical serialization of `payload`.
pub fn content_hash(payload: &Value) -> String {
    let text = serde_json::to_string(payload).expect("json values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl CacheEntry {
    pub fn new(key: Key, payload: Value) -> CacheEntry {
        let hash = content_hash(&payload);
        CacheEntry { schema_version: SCHEMA_VERSION, engine_version: ENGINE_VERSION.to_string(), key, payload, hash }
    }

    fn is_valid_for(&self, key: &Key) -> bool {
        self.schema_version == SCHEMA_VERSION
            && self.engine_version == ENGINE_VERSION
            && self.key == *key
            && self.hash == content_hash(&self.payload)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: Some(dir.into()) }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(dir: &Path, key: &Key) -> PathBuf {
        dir.join(format!("{}_{}_p{}_k{}.json", key.kind.as_str(), key.parity, key.p, key.k))
    }

    /// The payload for `key`, or `None` on a miss or an untrusted entry.
    pub fn get(&self, key: &Key) -> Option<Value> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Self::path(dir, key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        entry.is_valid_for(key).then_some(entry.payload)
    }

    pub fn put(&self, key: Key, payload: Value) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let entry = CacheEntry::new(key, payload);
        let text = serde_json::to_string_pretty(&entry).expect("entries serialize");
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
        let tmp = dir.join(format!(".tmp-{}-{}-{nanos}", std::process::id(), key.kind.as_str()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, Self::path(dir, &key))
    }
}
