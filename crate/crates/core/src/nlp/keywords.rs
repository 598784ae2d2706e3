use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{cosine_similarity, EmbeddingProvider, Stopwords, Tokenizer};

pub const DEFAULT_KEYWORD_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyword {
    pub word: String,
    pub similarity: f64,
}

/// Ranks a comment's distinct non-stopword tokens by cosine similarity
/// between each token's embedding and the whole comment's embedding.
#[derive(Debug, Clone)]
pub struct KeywordExtractor<'a> {
    pub tokenizer: &'a Tokenizer,
    pub stopwords: &'a Stopwords,
    pub k: usize,
    pub threshold: f64,
}

impl<'a> KeywordExtractor<'a> {
    pub fn new(tokenizer: &'a Tokenizer, stopwords: &'a Stopwords) -> Self {
        KeywordExtractor {
            tokenizer,
            stopwords,
            k: 5,
            threshold: DEFAULT_KEYWORD_THRESHOLD,
        }
    }

    pub fn candidates(&self, text: &str) -> BTreeSet<String> {
        self.tokenizer
            .tokenize(text)
            .into_iter()
            .filter(|t| !self.stopwords.contains(t))
            .collect()
    }

    /// Top `k` candidates with similarity at or above the threshold,
    /// similarity descending, ties by word.
    pub fn extract(&self, text: &str, provider: &dyn EmbeddingProvider) -> Vec<Keyword> {
        assert!(self.k >= 1, "k must be at least 1");
        let candidates = self.candidates(text);
        if candidates.is_empty() {
            return Vec::new();
        }
        let sentence = provider.embed(text);
        let mut scored: Vec<Keyword> = candidates
            .into_iter()
            .filter_map(|word| {
                let similarity = cosine_similarity(&provider.embed(&word), &sentence).ok()?;
                (similarity >= self.threshold).then_some(Keyword { word, similarity })
            })
            .collect();
        scored.sort_by(|a, b| b.similarity.total_cmp(&a.similarity).then_with(|| a.word.cmp(&b.word)));
        scored.truncate(self.k);
        scored
    }
}
