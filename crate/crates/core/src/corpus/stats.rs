use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{CommentSet, CorpusError};
use crate::nlp::Tokenizer;

const SENTENCE_TERMINATORS: &[char] = &['。', '！', '？', '!', '?', '.', '\n'];

const DEFAULT_EMOTICONS: &str = include_str!("../../data/emoticons.txt");

/// Descriptive statistics over a comment corpus. Lengths are in Unicode
/// scalar values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub max_length: usize,
    pub avg_length: f64,
    pub vocabulary_size: usize,
    pub token_count: usize,
    pub sentence_count: usize,
    pub emoticon_sentence_count: usize,
}

/// Decides whether a sentence carries an emoticon: any character from the
/// common emoji blocks, or any substring from a pattern list.
#[derive(Debug, Clone)]
pub struct EmoticonMatcher {
    patterns: Vec<String>,
    emoji_blocks: bool,
}

impl Default for EmoticonMatcher {
    fn default() -> Self {
        Self::new(
            DEFAULT_EMOTICONS
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string),
            true,
        )
    }
}

impl EmoticonMatcher {
    pub fn new(patterns: impl IntoIterator<Item = String>, emoji_blocks: bool) -> Self {
        Self {
            patterns: patterns.into_iter().collect(),
            emoji_blocks,
        }
    }

    pub fn matches(&self, sentence: &str) -> bool {
        (self.emoji_blocks && sentence.chars().any(is_emoji))
            || self.patterns.iter().any(|p| sentence.contains(p.as_str()))
    }
}

fn is_emoji(c: char) -> bool {
    matches!(c as u32,
        0x1F300..=0x1F5FF   // symbols & pictographs
        | 0x1F600..=0x1F64F // emoticons
        | 0x1F680..=0x1F6FF // transport & map
        | 0x1F900..=0x1F9FF // supplemental symbols & pictographs
        | 0x1FA70..=0x1FAFF
        | 0x2600..=0x26FF   // misc symbols
        | 0x2700..=0x27BF) // dingbats
}

/// Splits on `。！？!?.` and newlines, dropping blank pieces.
pub fn split_sentences(text: &str) -> impl Iterator<Item = &str> {
    text.split(SENTENCE_TERMINATORS)
        .map(str::trim)
        .filter(|s| !s.is_empty())
}

pub fn compute_stats(
    set: &CommentSet,
    tokenizer: &Tokenizer,
    emoticons: &EmoticonMatcher,
) -> Result<CorpusStats, CorpusError> {
    if set.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut max_length = 0;
    let mut total_length = 0usize;
    let mut vocab = HashSet::new();
    let mut token_count = 0;
    let mut sentence_count = 0;
    let mut emoticon_sentence_count = 0;
    for c in set.comments() {
        let len = c.char_len();
        max_length = max_length.max(len);
        total_length += len;
        for tok in tokenizer.tokenize(&c.text) {
            token_count += 1;
            vocab.insert(tok);
        }
        for s in split_sentences(&c.text) {
            sentence_count += 1;
            if emoticons.matches(s) {
                emoticon_sentence_count += 1;
            }
        }
    }
    Ok(CorpusStats {
        max_length,
        avg_length: total_length as f64 / set.len() as f64,
        vocabulary_size: vocab.len(),
        token_count,
        sentence_count,
        emoticon_sentence_count,
    })
}
