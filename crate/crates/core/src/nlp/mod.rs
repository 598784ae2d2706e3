//! Tokenization, embedding-based keyword extraction and the sentiment /
//! induced-mechanism classifier contract.

mod classify;
mod embed;
mod keywords;
pub mod lexicon;
mod remote;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use classify::{
    classify_mechanism, classify_sentiment, Classifier, ClassifierError, LexiconSentiment, Prediction, RuleMechanism,
};
pub use embed::{cosine_similarity, EmbeddingProvider, HashEmbedding};
pub use keywords::{Keyword, KeywordExtractor, DEFAULT_KEYWORD_THRESHOLD};
pub use lexicon::Stopwords;
pub use remote::{RemoteClassifier, RemoteConfig};
pub use tokenize::Tokenizer;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NlpError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLabel(pub String);

impl fmt::Display for UnknownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown label `{}`", self.0)
    }
}

impl std::error::Error for UnknownLabel {}

/// A closed label set that a remote model can be asked to predict.
pub trait LabelSet: Copy + FromStr + fmt::Debug + Send + Sync + 'static {
    /// Task name on the wire.
    const TASK: &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Angry,
    Neutral,
    Sad,
    Fear,
    Surprise,
    Happy,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 6] = [
        SentimentLabel::Angry,
        SentimentLabel::Neutral,
        SentimentLabel::Sad,
        SentimentLabel::Fear,
        SentimentLabel::Surprise,
        SentimentLabel::Happy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Angry => "angry",
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::Sad => "sad",
            SentimentLabel::Fear => "fear",
            SentimentLabel::Surprise => "surprise",
            SentimentLabel::Happy => "happy",
        }
    }
}

impl FromStr for SentimentLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl LabelSet for SentimentLabel {
    const TASK: &'static str = "sentiment";
}

/// Why a listener wrote the comment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismLabel {
    MusicEvaluation,
    PersonalMemory,
    ContextualInfo,
    Others,
}

impl MechanismLabel {
    pub const ALL: [MechanismLabel; 4] = [
        MechanismLabel::MusicEvaluation,
        MechanismLabel::PersonalMemory,
        MechanismLabel::ContextualInfo,
        MechanismLabel::Others,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MechanismLabel::MusicEvaluation => "music_evaluation",
            MechanismLabel::PersonalMemory => "personal_memory",
            MechanismLabel::ContextualInfo => "contextual_info",
            MechanismLabel::Others => "others",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl FromStr for MechanismLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

impl fmt::Display for MechanismLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl LabelSet for MechanismLabel {
    const TASK: &'static str = "mechanism";
}
