//! Content-addressed layout files under `<data_dir>/layouts`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use commentmap::corpus::Comment;
use commentmap::map::canonicalize;
use commentmap::pipeline::PipelineConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Hash of everything a song's layout depends on.
pub fn content_hash(song_id: &str, comments: &[&Comment], config: &PipelineConfig) -> String {
    let mut h = Sha256::new();
    h.update(song_id.as_bytes());
    h.update([0]);
    for c in comments {
        h.update(c.id.as_bytes());
        h.update([0x1f]);
        h.update(c.timestamp.to_le_bytes());
        h.update(c.text.as_bytes());
        h.update([0x1e]);
    }
    h.update([0]);
    h.update(serde_json::to_vec(config).expect("config serializes"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LayoutCacheEntry {
    pub song_id: String,
    pub content_hash: String,
    pub created_at: u64,
    pub layout: Value,
}

#[derive(Debug, Clone)]
pub struct LayoutCache {
    dir: PathBuf,
}

impl LayoutCache {
    pub fn open(data_dir: &Path) -> io::Result<Self> {
        let dir = data_dir.join("layouts");
        fs::create_dir_all(&dir)?;
        Ok(LayoutCache { dir })
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    /// Canonical layout text, if a valid entry exists for `hash`.
    pub fn get(&self, song_id: &str, hash: &str) -> Option<String> {
        let bytes = fs::read(self.path(hash)).ok()?;
        let entry: LayoutCacheEntry = serde_json::from_slice(&bytes).ok()?;
        if entry.content_hash != hash || entry.song_id != song_id {
            return None;
        }
        let mut s = serde_json::to_string_pretty(&canonicalize(entry.layout)).ok()?;
        s.push('\n');
        Some(s)
    }

    /// Writes through a temporary file and renames it into place, so
    /// readers never see a partial entry.
    pub fn put(&self, song_id: &str, hash: &str, layout: Value) -> io::Result<()> {
        let entry = LayoutCacheEntry {
            song_id: song_id.to_string(),
            content_hash: hash.to_string(),
            created_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            layout,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(hash)).map_err(|e| e.error)?;
        Ok(())
    }
}
