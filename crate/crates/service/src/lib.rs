//! HTTP API: song list with preview tags, per-song layouts backed by a file
//! cache, raw comments with labels, and comment posting.
//!
//! Routes:
//! - `GET /songs`
//! - `GET /songs/{id}/layout`
//! - `GET /comments/{id}`
//! - `POST /songs/{id}/comments` with `{"text", "user_id"?}`
//!
//! Errors are `{"error": ..., "stage"?: ...}`.

mod cache;

use std::collections::{BTreeMap, HashMap};
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use commentmap::corpus::{Comment, CommentSet, CorpusError, InputFormat};
use commentmap::nlp::{Keyword, MechanismLabel, Prediction, SentimentLabel};
use commentmap::pipeline::{song_layout, song_tag_set, song_tags, Analyzer, CommentAnalysis, PipelineConfig};
use commentmap::tags::PreviewTag;
use commentmap::Execution;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

pub use cache::{content_hash, LayoutCache, LayoutCacheEntry};

/// Longest accepted comment, in characters.
pub const MAX_COMMENT_CHARS: usize = 280;

const POSTED_FILE: &str = "posted.jsonl";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub pipeline: PipelineConfig,
    pub exec: Execution,
}

struct Loaded {
    set: Arc<CommentSet>,
    tags: BTreeMap<String, Vec<PreviewTag>>,
}

struct Inner {
    config: ServiceConfig,
    analyzer: Analyzer,
    cache: LayoutCache,
    corpus: RwLock<Option<Loaded>>,
    song_locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    /// Opens the data directory. Without a corpus every route answers 503
    /// until [`AppState::load`] is called.
    pub fn new(config: ServiceConfig) -> io::Result<Self> {
        std::fs::create_dir_all(&config.data_dir)?;
        let cache = LayoutCache::open(&config.data_dir)?;
        let analyzer = Analyzer::baseline(&config.pipeline.keywords);
        Ok(AppState(Arc::new(Inner {
            config,
            analyzer,
            cache,
            corpus: RwLock::new(None),
            song_locks: Mutex::new(HashMap::new()),
        })))
    }

    /// Installs a corpus, merging comments previously posted to this data
    /// directory.
    pub fn load(&self, mut set: CommentSet) -> Result<(), CorpusError> {
        let posted = self.0.config.data_dir.join(POSTED_FILE);
        if posted.exists() {
            let extra = CommentSet::ingest(&posted, InputFormat::Jsonl)?;
            for c in extra.comments() {
                if set.get(&c.id).is_none() {
                    set = set.with_comment(c.clone())?;
                }
            }
        }
        let tags = song_tags(&set, &self.0.analyzer, self.0.config.exec)
            .into_iter()
            .map(|t| (t.song_id, t.tags))
            .collect();
        *self.0.corpus.write().unwrap() = Some(Loaded {
            set: Arc::new(set),
            tags,
        });
        Ok(())
    }

    pub fn data_dir(&self) -> &Path {
        &self.0.config.data_dir
    }

    fn snapshot(&self) -> Result<Arc<CommentSet>, ApiError> {
        self.0
            .corpus
            .read()
            .unwrap()
            .as_ref()
            .map(|l| l.set.clone())
            .ok_or_else(ApiError::not_loaded)
    }

    fn song_lock(&self, song_id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.0
            .song_locks
            .lock()
            .unwrap()
            .entry(song_id.to_string())
            .or_default()
            .clone()
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage: Option<String>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.into(),
                stage: None,
            },
        }
    }

    fn not_loaded() -> Self {
        Self::new(StatusCode::SERVICE_UNAVAILABLE, "corpus not loaded")
    }

    fn internal(err: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/songs", get(list_songs))
        .route("/songs/{id}/layout", get(get_layout))
        .route("/songs/{id}/comments", post(post_comment))
        .route("/comments/{id}", get(get_comment))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> io::Result<()> {
    axum::serve(listener, router(state)).await
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SongSummary {
    pub id: String,
    pub title: String,
    pub artist: String,
    pub album: String,
    pub comment_count: usize,
    pub tags: Vec<PreviewTag>,
}

async fn list_songs(State(app): State<AppState>) -> Result<Json<Vec<SongSummary>>, ApiError> {
    let guard = app.0.corpus.read().unwrap();
    let loaded = guard.as_ref().ok_or_else(ApiError::not_loaded)?;
    Ok(Json(
        loaded
            .set
            .songs()
            .into_iter()
            .map(|s| SongSummary {
                tags: loaded.tags.get(&s.id).cloned().unwrap_or_default(),
                comment_count: s.comment_ids.len(),
                id: s.id,
                title: s.title,
                artist: s.artist,
                album: s.album,
            })
            .collect(),
    ))
}

async fn get_layout(State(app): State<AppState>, UrlPath(song_id): UrlPath<String>) -> Result<Response, ApiError> {
    let lock = app.song_lock(&song_id);
    let _held = lock.lock().await;
    let set = app.snapshot()?;
    if !set.contains_song(&song_id) {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown song {song_id}")));
    }
    let config = &app.0.config;
    let hash = content_hash(&song_id, &set.song_comments(&song_id), &config.pipeline);
    if let Some(body) = app.0.cache.get(&song_id, &hash) {
        return Ok(json_text(body));
    }

    let worker = app.clone();
    let id = song_id.clone();
    let result = tokio::task::spawn_blocking(move || {
        let cfg = &worker.0.config;
        song_layout(&set, &id, &cfg.pipeline, &worker.0.analyzer, cfg.exec)
    })
    .await
    .map_err(ApiError::internal)?;
    let layout = result.map_err(|e| {
        let mut err = ApiError::internal(&e);
        err.body.stage = e.stage().map(|s| s.to_string());
        err
    })?;
    let body = layout.layout.to_canonical_json();
    let value = serde_json::from_str(&body).map_err(ApiError::internal)?;
    app.0.cache.put(&song_id, &hash, value).map_err(ApiError::internal)?;
    Ok(json_text(body))
}

fn json_text(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CommentView {
    #[serde(flatten)]
    pub comment: Comment,
    pub sentiment: Prediction<SentimentLabel>,
    pub mechanism: Prediction<MechanismLabel>,
    pub keywords: Vec<Keyword>,
}

fn view(app: &AppState, comment: Comment) -> Result<CommentView, ApiError> {
    let mut analyses = app
        .0
        .analyzer
        .analyze(&[&comment], Execution::Sequential)
        .map_err(|e| {
            let mut err = ApiError::internal(e);
            err.body.stage = Some("analyze".into());
            err
        })?;
    let a: CommentAnalysis = analyses.remove(0);
    Ok(CommentView {
        comment,
        sentiment: a.sentiment,
        mechanism: a.mechanism,
        keywords: a.keywords,
    })
}

async fn get_comment(State(app): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<CommentView>, ApiError> {
    let set = app.snapshot()?;
    let comment = set
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown comment {id}")))?;
    Ok(Json(view(&app, comment)?))
}

#[derive(Debug, Deserialize)]
pub struct NewComment {
    pub text: String,
    #[serde(default)]
    pub user_id: Option<String>,
}

/// Trimmed text must be non-empty and at most [`MAX_COMMENT_CHARS`] long.
pub fn validate_text(text: &str) -> Result<&str, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("comment text is empty".into());
    }
    let n = t.chars().count();
    if n > MAX_COMMENT_CHARS {
        return Err(format!("comment has {n} characters; the limit is {MAX_COMMENT_CHARS}"));
    }
    Ok(t)
}

async fn post_comment(
    State(app): State<AppState>,
    UrlPath(song_id): UrlPath<String>,
    Json(body): Json<NewComment>,
) -> Result<(StatusCode, Json<CommentView>), ApiError> {
    let text = validate_text(&body.text).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let lock = app.song_lock(&song_id);
    let _held = lock.lock().await;
    let set = app.snapshot()?;
    if !set.contains_song(&song_id) {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown song {song_id}")));
    }
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(1)
        .max(1);
    let comment = Comment {
        id: format!("p-{}", uuid::Uuid::new_v4().simple()),
        song_id: song_id.clone(),
        text: text.to_string(),
        timestamp: now,
        like_count: 0,
        user_id: body.user_id,
    };
    let updated = set.with_comment(comment.clone()).map_err(ApiError::internal)?;

    let mut line = serde_json::to_string(&comment).map_err(ApiError::internal)?;
    line.push('\n');
    OpenOptions::new()
        .create(true)
        .append(true)
        .open(app.0.config.data_dir.join(POSTED_FILE))
        .and_then(|mut f| f.write_all(line.as_bytes()))
        .map_err(ApiError::internal)?;

    let view = view(&app, comment)?;
    {
        let mut guard = app.0.corpus.write().unwrap();
        let loaded = guard.as_mut().ok_or_else(ApiError::not_loaded)?;
        // re-apply onto the current set in case another song changed meanwhile
        let merged = if Arc::ptr_eq(&loaded.set, &set) {
            updated
        } else {
            loaded
                .set
                .with_comment(view.comment.clone())
                .map_err(ApiError::internal)?
        };
        let merged = Arc::new(merged);
        let song_only = song_tag_set(&merged, &song_id, &app.0.analyzer).tags;
        loaded.tags.insert(song_id.clone(), song_only);
        loaded.set = merged;
    }
    Ok((StatusCode::CREATED, Json(view)))
}
