//! End-to-end driver: comment analysis, segmentation, per-period topics,
//! layout and preview tags.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::corpus::{Comment, CommentSet};
use crate::exec::Execution;
use crate::map::{build_map, CommentLabels, CountyInput, MapLayout, MapParams};
use crate::nlp::{
    Classifier, ClassifierError, EmbeddingProvider, HashEmbedding, Keyword, KeywordExtractor, LexiconSentiment,
    MechanismLabel, Prediction, RuleMechanism, SentimentLabel, Stopwords, Tokenizer, DEFAULT_KEYWORD_THRESHOLD,
};
use crate::segment::{build_count_series, periods_from_cuts, segment_series, SegmentParams, TimePeriod};
use crate::tags::{generate_preview_tags, PreviewTagSet};
use crate::topics::{assign_topic, stable_topics, EnsembleParams, TopicError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordParams {
    pub k: usize,
    pub threshold: f64,
    /// Width of the hash embedding.
    pub dim: usize,
    pub salt: u64,
}

impl Default for KeywordParams {
    fn default() -> Self {
        KeywordParams {
            k: 5,
            threshold: DEFAULT_KEYWORD_THRESHOLD,
            dim: 64,
            salt: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Base seed; period `p` uses ensemble seeds `seed + p·models + m`.
    pub seed: u64,
    pub segment: SegmentParams,
    pub ensemble: EnsembleParams,
    pub keywords: KeywordParams,
    pub map: MapParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            segment: SegmentParams::default(),
            ensemble: EnsembleParams::default(),
            keywords: KeywordParams::default(),
            map: MapParams::default(),
        }
    }
}

impl PipelineConfig {
    pub fn period_seeds(&self, period: usize) -> Vec<u64> {
        let m = self.ensemble.models;
        (0..m)
            .map(|i| self.seed.wrapping_add((period * m + i) as u64))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Analyze,
    Segment,
    Topics,
    Layout,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Analyze => "analyze",
            Stage::Segment => "segment",
            Stage::Topics => "topics",
            Stage::Layout => "layout",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("unknown song {0}")]
    UnknownSong(String),
    #[error("{stage} stage failed: {message}")]
    Stage { stage: Stage, message: String },
}

impl PipelineError {
    fn at(stage: Stage, err: impl fmt::Display) -> Self {
        PipelineError::Stage {
            stage,
            message: err.to_string(),
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            PipelineError::Stage { stage, .. } => Some(*stage),
            PipelineError::UnknownSong(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentAnalysis {
    pub id: String,
    pub keywords: Vec<Keyword>,
    pub sentiment: Prediction<SentimentLabel>,
    pub mechanism: Prediction<MechanismLabel>,
}

impl CommentAnalysis {
    pub fn keyword_words(&self) -> Vec<String> {
        self.keywords.iter().map(|k| k.word.clone()).collect()
    }

    pub fn labels(&self) -> CommentLabels {
        CommentLabels {
            sentiment: self.sentiment.label,
            mechanism: self.mechanism.label,
        }
    }
}

const CLASSIFY_CHUNK: usize = 64;

/// Keyword extraction plus the two classifiers.
#[derive(Clone)]
pub struct Analyzer {
    pub tokenizer: Tokenizer,
    pub stopwords: Arc<Stopwords>,
    pub embedding: Arc<dyn EmbeddingProvider>,
    pub sentiment: Arc<dyn Classifier<SentimentLabel>>,
    pub mechanism: Arc<dyn Classifier<MechanismLabel>>,
    pub keywords: KeywordParams,
}

impl Analyzer {
    /// Hash embedding, lexicon sentiment vote and mechanism rules.
    pub fn baseline(params: &KeywordParams) -> Self {
        let tokenizer = Tokenizer::default();
        Analyzer {
            embedding: Arc::new(HashEmbedding::with_tokenizer(
                params.dim,
                params.salt,
                tokenizer.clone(),
            )),
            sentiment: Arc::new(LexiconSentiment::new(tokenizer.clone())),
            mechanism: Arc::new(RuleMechanism::new(tokenizer.clone())),
            stopwords: Arc::new(Stopwords::shipped().clone()),
            tokenizer,
            keywords: params.clone(),
        }
    }

    pub fn extract_keywords(&self, text: &str) -> Vec<Keyword> {
        let mut ex = KeywordExtractor::new(&self.tokenizer, &self.stopwords);
        ex.k = self.keywords.k;
        ex.threshold = self.keywords.threshold;
        ex.extract(text, self.embedding.as_ref())
    }

    /// Results in input order. Classifiers are called in chunks so a remote
    /// model sees batched requests.
    pub fn analyze(&self, comments: &[&Comment], exec: Execution) -> Result<Vec<CommentAnalysis>, ClassifierError> {
        let keywords = exec.map(comments, |c| self.extract_keywords(&c.text));
        let chunks: Vec<&[&Comment]> = comments.chunks(CLASSIFY_CHUNK).collect();
        let labels = exec.map(&chunks, |chunk| {
            let texts: Vec<&str> = chunk.iter().map(|c| c.text.as_str()).collect();
            Ok::<_, ClassifierError>((
                self.sentiment.classify_batch(&texts)?,
                self.mechanism.classify_batch(&texts)?,
            ))
        });
        let mut sentiments = Vec::with_capacity(comments.len());
        let mut mechanisms = Vec::with_capacity(comments.len());
        for l in labels {
            let (s, m) = l?;
            sentiments.extend(s);
            mechanisms.extend(m);
        }
        Ok(comments
            .iter()
            .zip(keywords)
            .zip(sentiments.into_iter().zip(mechanisms))
            .map(|((c, keywords), (sentiment, mechanism))| CommentAnalysis {
                id: c.id.clone(),
                keywords,
                sentiment,
                mechanism,
            })
            .collect())
    }
}

/// Everything computed for one song.
#[derive(Debug, Clone)]
pub struct SongResult {
    pub layout: MapLayout,
    pub periods: Vec<TimePeriod>,
    pub analyses: BTreeMap<String, CommentAnalysis>,
}

/// Segments a song's comments into periods.
pub fn song_periods(comments: &[&Comment], params: &SegmentParams) -> Result<Vec<TimePeriod>, PipelineError> {
    let series = build_count_series(comments, params.bin_width).map_err(|e| PipelineError::at(Stage::Segment, e))?;
    let cuts = segment_series(&series, params);
    Ok(periods_from_cuts(&series, &cuts, comments))
}

/// Stable topics of one period as counties. Comments are assigned by their
/// keywords; topics left without members are dropped.
pub fn period_counties(
    period: &TimePeriod,
    analyses: &BTreeMap<String, CommentAnalysis>,
    config: &PipelineConfig,
    exec: Execution,
) -> Result<Vec<CountyInput>, PipelineError> {
    let docs: Vec<Vec<String>> = period
        .comment_ids
        .iter()
        .map(|id| analyses[id].keyword_words())
        .collect();
    let topics = match stable_topics(&docs, &config.ensemble, &config.period_seeds(period.index), exec) {
        Ok(t) => t.topics,
        // nothing to model: one catch-all county
        Err(TopicError::EmptyVocabulary) => {
            return Ok(vec![CountyInput {
                period: period.index,
                cloud: Vec::new(),
                comment_ids: period.comment_ids.clone(),
            }])
        }
        Err(e) => return Err(PipelineError::at(Stage::Topics, e)),
    };
    let mut members: Vec<Vec<String>> = vec![Vec::new(); topics.len()];
    for (id, doc) in period.comment_ids.iter().zip(&docs) {
        let t = assign_topic(doc, &topics);
        let pos = topics.iter().position(|x| x.id == t).expect("assigned id exists");
        members[pos].push(id.clone());
    }
    Ok(topics
        .into_iter()
        .zip(members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(t, comment_ids)| CountyInput {
            period: period.index,
            cloud: t.top_words,
            comment_ids,
        })
        .collect())
}

/// Full layout for one song.
pub fn song_layout(
    set: &CommentSet,
    song_id: &str,
    config: &PipelineConfig,
    analyzer: &Analyzer,
    exec: Execution,
) -> Result<SongResult, PipelineError> {
    if !set.contains_song(song_id) {
        return Err(PipelineError::UnknownSong(song_id.to_string()));
    }
    let comments = set.song_comments(song_id);
    let analyses: BTreeMap<String, CommentAnalysis> = analyzer
        .analyze(&comments, exec)
        .map_err(|e| PipelineError::at(Stage::Analyze, e))?
        .into_iter()
        .map(|a| (a.id.clone(), a))
        .collect();
    let periods = song_periods(&comments, &config.segment)?;
    let mut counties = Vec::new();
    for p in &periods {
        counties.extend(period_counties(p, &analyses, config, exec)?);
    }
    let labels: BTreeMap<String, CommentLabels> = analyses.iter().map(|(id, a)| (id.clone(), a.labels())).collect();
    let mut layout =
        build_map(&periods, &counties, &labels, &config.map).map_err(|e| PipelineError::at(Stage::Layout, e))?;
    let seeds: BTreeMap<String, Vec<u64>> = periods
        .iter()
        .map(|p| (p.index.to_string(), config.period_seeds(p.index)))
        .collect();
    layout.meta = json!({
        "song_id": song_id,
        "comment_count": comments.len(),
        "config": config,
        "seeds": seeds,
    });
    Ok(SongResult {
        layout,
        periods,
        analyses,
    })
}

/// Preview tags for one song, from each comment's keywords. Unknown songs
/// get an empty set.
pub fn song_tag_set(set: &CommentSet, song_id: &str, analyzer: &Analyzer) -> PreviewTagSet {
    let keywords: Vec<Vec<String>> = set
        .song_comments(song_id)
        .iter()
        .map(|c| analyzer.extract_keywords(&c.text).into_iter().map(|k| k.word).collect())
        .collect();
    let title = set
        .song(song_id)
        .map(|s| analyzer.tokenizer.tokenize(&s.title))
        .unwrap_or_default();
    generate_preview_tags(song_id, &title, &keywords, &analyzer.stopwords)
}

/// Preview tags for every song.
pub fn song_tags(set: &CommentSet, analyzer: &Analyzer, exec: Execution) -> Vec<PreviewTagSet> {
    let ids: Vec<&str> = set.song_ids().collect();
    exec.map(&ids, |id| song_tag_set(set, id, analyzer))
}
