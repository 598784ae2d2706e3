//! Comment records, ingestion and export.
//!
//! A [`CommentSet`] is the immutable, timestamp-sorted view of a corpus that
//! every later stage reads from. It is built once by [`CommentSet::ingest`] or
//! [`CommentSet::from_comments`] and shared read-only afterwards.

mod stats;

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use stats::{compute_stats, split_sentences, CorpusStats, EmoticonMatcher};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate comment id `{id}`")]
    DuplicateId { id: String, line: usize },
    #[error("corpus is empty")]
    Empty,
    #[error("unknown song `{0}`")]
    UnknownSong(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl InputFormat {
    /// Guesses the format from a file extension, defaulting to JSON lines.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Jsonl,
        }
    }
}

/// One user comment as it appears on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub id: String,
    pub song_id: String,
    pub text: String,
    pub timestamp: i64,
    pub like_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_id: Option<String>,
}

impl Comment {
    /// Length in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.text.trim().is_empty() {
            return Err(format!("comment `{}` has empty text", self.id));
        }
        if self.timestamp <= 0 {
            return Err(format!("comment `{}` has non-positive timestamp", self.id));
        }
        Ok(())
    }
}

/// Song metadata. `comment_ids` is ordered by timestamp ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Song {
    pub id: String,
    pub title: String,
    pub artist: String,
    pub album: String,
    #[serde(default)]
    pub comment_ids: Vec<String>,
}

/// Optional catalog entry supplying display metadata for a song id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SongInfo {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub artist: String,
    #[serde(default)]
    pub album: String,
}

#[derive(Debug, Clone, Default)]
pub struct CommentSet {
    comments: Vec<Comment>,
    by_id: HashMap<String, usize>,
    by_song: BTreeMap<String, Vec<usize>>,
    catalog: BTreeMap<String, SongInfo>,
}

impl CommentSet {
    /// Reads a corpus file. Records are validated and sorted by timestamp.
    pub fn ingest(path: &Path, format: InputFormat) -> Result<Self, CorpusError> {
        let file = File::open(path)?;
        let records = match format {
            InputFormat::Jsonl => read_jsonl(BufReader::new(file))?,
            InputFormat::Csv => read_csv(file)?,
        };
        Self::from_records(records)
    }

    /// Builds a set from in-memory comments; line numbers in errors are
    /// 1-based positions in `comments`.
    pub fn from_comments(comments: Vec<Comment>) -> Result<Self, CorpusError> {
        Self::from_records(comments.into_iter().enumerate().map(|(i, c)| (i + 1, c)).collect())
    }

    fn from_records(records: Vec<(usize, Comment)>) -> Result<Self, CorpusError> {
        if records.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut seen = HashMap::with_capacity(records.len());
        for (line, c) in &records {
            c.validate()
                .map_err(|reason| CorpusError::Malformed { line: *line, reason })?;
            if seen.insert(c.id.clone(), *line).is_some() {
                return Err(CorpusError::DuplicateId {
                    id: c.id.clone(),
                    line: *line,
                });
            }
        }
        let mut comments: Vec<Comment> = records.into_iter().map(|(_, c)| c).collect();
        comments.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
        Ok(Self::index(comments, BTreeMap::new()))
    }

    fn index(comments: Vec<Comment>, catalog: BTreeMap<String, SongInfo>) -> Self {
        let mut by_id = HashMap::with_capacity(comments.len());
        let mut by_song: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, c) in comments.iter().enumerate() {
            by_id.insert(c.id.clone(), i);
            by_song.entry(c.song_id.clone()).or_default().push(i);
        }
        CommentSet {
            comments,
            by_id,
            by_song,
            catalog,
        }
    }

    /// Attaches display metadata. Entries for songs without comments are kept
    /// but do not create songs.
    pub fn with_catalog(mut self, entries: impl IntoIterator<Item = SongInfo>) -> Self {
        self.catalog.extend(entries.into_iter().map(|s| (s.id.clone(), s)));
        self
    }

    /// Returns a new set with `comment` added. Fails on duplicate ids or
    /// invalid records.
    pub fn with_comment(&self, comment: Comment) -> Result<Self, CorpusError> {
        comment.validate().map_err(|reason| CorpusError::Malformed {
            line: self.comments.len() + 1,
            reason,
        })?;
        if self.by_id.contains_key(&comment.id) {
            return Err(CorpusError::DuplicateId {
                id: comment.id,
                line: self.comments.len() + 1,
            });
        }
        let mut comments = self.comments.clone();
        let pos =
            comments.partition_point(|c| (c.timestamp, c.id.as_str()) <= (comment.timestamp, comment.id.as_str()));
        comments.insert(pos, comment);
        Ok(Self::index(comments, self.catalog.clone()))
    }

    pub fn len(&self) -> usize {
        self.comments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.is_empty()
    }

    /// All comments, timestamp ascending.
    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    pub fn get(&self, id: &str) -> Option<&Comment> {
        self.by_id.get(id).map(|&i| &self.comments[i])
    }

    pub fn song_ids(&self) -> impl Iterator<Item = &str> {
        self.by_song.keys().map(String::as_str)
    }

    pub fn contains_song(&self, song_id: &str) -> bool {
        self.by_song.contains_key(song_id)
    }

    /// Comments of one song, timestamp ascending.
    pub fn song_comments(&self, song_id: &str) -> Vec<&Comment> {
        self.by_song
            .get(song_id)
            .map(|idx| idx.iter().map(|&i| &self.comments[i]).collect())
            .unwrap_or_default()
    }

    pub fn song(&self, song_id: &str) -> Option<Song> {
        let idx = self.by_song.get(song_id)?;
        let info = self.catalog.get(song_id);
        Some(Song {
            id: song_id.to_string(),
            title: info
                .map(|s| s.title.clone())
                .filter(|t| !t.is_empty())
                .unwrap_or_else(|| song_id.to_string()),
            artist: info.map(|s| s.artist.clone()).unwrap_or_default(),
            album: info.map(|s| s.album.clone()).unwrap_or_default(),
            comment_ids: idx.iter().map(|&i| self.comments[i].id.clone()).collect(),
        })
    }

    pub fn songs(&self) -> Vec<Song> {
        self.song_ids().filter_map(|id| self.song(id)).collect()
    }

    pub fn song_counts(&self) -> BTreeMap<String, usize> {
        self.by_song.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }

    /// Writes the set as sorted JSON lines.
    pub fn export_jsonl<W: Write>(&self, mut out: W) -> Result<(), CorpusError> {
        for c in &self.comments {
            serde_json::to_writer(&mut out, c).map_err(std::io::Error::other)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<(usize, Comment)>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let c: Comment = serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            line: line_no,
            reason: e.to_string(),
        })?;
        out.push((line_no, c));
    }
    Ok(out)
}

/// CSV with the fixed header `id,song_id,text,timestamp,like_count,user_id`.
fn read_csv<R: std::io::Read>(reader: R) -> Result<Vec<(usize, Comment)>, CorpusError> {
    const HEADER: [&str; 6] = ["id", "song_id", "text", "timestamp", "like_count", "user_id"];
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| CorpusError::Malformed {
        line: 1,
        reason: e.to_string(),
    })?;
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 5 || cols[..] != HEADER[..cols.len()] {
        return Err(CorpusError::Malformed {
            line: 1,
            reason: format!("expected header `{}`", HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CorpusError::Malformed {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let field = |i: usize, name: &str| {
            rec.get(i)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| CorpusError::Malformed {
                    line,
                    reason: format!("missing field `{name}`"),
                })
        };
        let parse_int = |i: usize, name: &str| -> Result<i64, CorpusError> {
            field(i, name)?.trim().parse().map_err(|_| CorpusError::Malformed {
                line,
                reason: format!("field `{name}` is not an integer"),
            })
        };
        let like_count = parse_int(4, "like_count")?;
        if like_count < 0 {
            return Err(CorpusError::Malformed {
                line,
                reason: "negative like_count".into(),
            });
        }
        out.push((
            line,
            Comment {
                id: field(0, "id")?.to_string(),
                song_id: field(1, "song_id")?.to_string(),
                text: field(2, "text")?.to_string(),
                timestamp: parse_int(3, "timestamp")?,
                like_count: like_count as u64,
                user_id: rec.get(5).filter(|s| !s.is_empty()).map(str::to_string),
            },
        ));
    }
    Ok(out)
}

/// Reads a song catalog: JSON lines of `{"id","title","artist","album"}`.
pub fn read_catalog(path: &Path) -> Result<Vec<SongInfo>, CorpusError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            line: i + 1,
            reason: e.to_string(),
        })?);
    }
    Ok(out)
}
