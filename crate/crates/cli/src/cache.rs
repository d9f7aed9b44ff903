//! On-disk result cache.
//!
//! Each entry is one JSON file holding a canonical payload string and its
//! sha256 digest. Entries are written once, through a temporary file renamed
//! into place, while holding an exclusive lock on `.lock` in the cache
//! directory. Readers take no lock. An entry whose digest does not match is
//! removed and treated as missing.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENV_VAR: &str = "FERMAT_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    Level,
    Basis,
    Standard,
    Report,
}

impl Kind {
    fn tag(self) -> &'static str {
        match self {
            Kind::Level => "level",
            Kind::Basis => "basis",
            Kind::Standard => "standard",
            Kind::Report => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Key {
    pub kind: Kind,
    pub m: u32,
    pub level: Option<u32>,
    /// Distinguishes entries of one kind computed with different settings.
    pub variant: String,
}

impl Key {
    pub fn new(kind: Kind, m: u32) -> Self {
        Key { kind, m, level: None, variant: String::new() }
    }

    pub fn level(m: u32, y: u32) -> Self {
        Key { level: Some(y), ..Key::new(Kind::Level, m) }
    }

    pub fn with_variant(mut self, v: impl Into<String>) -> Self {
        self.variant = v.into();
        self
    }

    fn file_name(&self) -> String {
        let mut s = format!("{}-m{}", self.kind.tag(), self.m);
        if let Some(y) = self.level {
            s.push_str(&format!("-y{y}"));
        }
        if !self.variant.is_empty() {
            s.push('-');
            s.push_str(&self.variant);
        }
        s + ".json"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub schema_version: u32,
    pub m: u32,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
    pub variant: String,
    pub payload: String,
    pub content_digest: String,
}

pub fn digest(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// What happened on a lookup, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Invalid,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `flag`, then `$FERMAT_CACHE_DIR`, then the platform data directory.
    pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
        if let Some(p) = flag {
            return p.to_path_buf();
        }
        if let Some(p) = std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()) {
            return PathBuf::from(p);
        }
        dirs::data_dir().unwrap_or_else(std::env::temp_dir).join("fermat-hodge")
    }

    pub fn open(dir: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn path(&self, key: &Key) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// The payload stored under `key`, if present and intact.
    pub fn get(&self, key: &Key) -> (Lookup, Option<String>) {
        let path = self.path(key);
        let Ok(text) = fs::read_to_string(&path) else { return (Lookup::Miss, None) };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e)
                if e.schema_version == SCHEMA_VERSION
                    && e.kind == key.kind
                    && e.m == key.m
                    && e.level == key.level
                    && e.variant == key.variant
                    && digest(&e.payload) == e.content_digest =>
            {
                (Lookup::Hit, Some(e.payload))
            }
            _ => {
                let _ = self.with_lock(|| fs::remove_file(&path));
                (Lookup::Invalid, None)
            }
        }
    }

    /// Stores `payload` unless an entry already exists.
    pub fn put(&self, key: &Key, payload: &str) -> std::io::Result<()> {
        let entry = Entry {
            schema_version: SCHEMA_VERSION,
            m: key.m,
            kind: key.kind,
            level: key.level,
            variant: key.variant.clone(),
            payload: payload.to_string(),
            content_digest: digest(payload),
        };
        let text = serde_json::to_string(&entry).map_err(std::io::Error::other)?;
        let path = self.path(key);
        self.with_lock(|| {
            if path.exists() {
                return Ok(());
            }
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(&path).map_err(|e| e.error)?;
            Ok(())
        })
    }

    fn with_lock<T>(&self, f: impl FnOnce() -> std::io::Result<T>) -> std::io::Result<T> {
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(".lock"))?;
        File::lock(&lock)?;
        let out = f();
        let _ = lock.unlock();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_poisoning() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().to_path_buf()).unwrap();
        let key = Key::level(5, 2);
        assert_eq!(cache.get(&key), (Lookup::Miss, None));
        cache.put(&key, "1,1,1,1;2").unwrap();
        assert_eq!(cache.get(&key), (Lookup::Hit, Some("1,1,1,1;2".to_string())));

        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("1,1,1,1;2", "2,0,0,2;2");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.get(&key).0, Lookup::Invalid);
        assert!(!path.exists());
    }

    #[test]
    fn entries_are_immutable() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().to_path_buf()).unwrap();
        let key = Key::new(Kind::Report, 7).with_variant("n4");
        cache.put(&key, "a").unwrap();
        cache.put(&key, "b").unwrap();
        assert_eq!(cache.get(&key).1.as_deref(), Some("a"));
        assert_ne!(cache.path(&key), cache.path(&Key::new(Kind::Report, 7)));
    }

    #[test]
    fn flag_wins_over_env() {
        assert_eq!(Cache::resolve_dir(Some(Path::new("/x"))), PathBuf::from("/x"));
    }
}
