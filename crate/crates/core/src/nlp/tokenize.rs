use std::collections::HashSet;
use std::sync::Arc;

use super::lexicon;

const SHIPPED_DICT: &str = include_str!("../../data/cjk_dict.txt");

/// Lowercasing tokenizer. Latin-script text splits on non-alphanumeric
/// characters; runs of CJK ideographs are segmented by forward maximum
/// matching against a word dictionary, falling back to single characters.
/// Stopwords are kept.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    dict: Arc<HashSet<String>>,
    max_word_chars: usize,
}

impl Default for Tokenizer {
    fn default() -> Self {
        let words = SHIPPED_DICT
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .chain(lexicon::lexical_entries())
            .map(str::to_string);
        Self::with_dictionary(words)
    }
}

pub(crate) fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF | 0x20000..=0x2FA1F)
}

impl Tokenizer {
    /// Builds a tokenizer whose CJK segmenter uses only `words`. Entries
    /// without any CJK character are ignored.
    pub fn with_dictionary(words: impl IntoIterator<Item = String>) -> Self {
        let dict: HashSet<String> = words
            .into_iter()
            .map(|w| w.to_lowercase())
            .filter(|w| w.chars().any(is_cjk))
            .collect();
        let max_word_chars = dict.iter().map(|w| w.chars().count()).max().unwrap_or(1);
        Tokenizer {
            dict: Arc::new(dict),
            max_word_chars,
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let lower = text.to_lowercase();
        let mut tokens = Vec::new();
        let mut latin = String::new();
        let mut cjk: Vec<char> = Vec::new();
        for c in lower.chars() {
            if is_cjk(c) {
                flush_latin(&mut latin, &mut tokens);
                cjk.push(c);
            } else {
                self.flush_cjk(&mut cjk, &mut tokens);
                if c.is_alphanumeric() || c == '\'' {
                    latin.push(c);
                } else {
                    flush_latin(&mut latin, &mut tokens);
                }
            }
        }
        flush_latin(&mut latin, &mut tokens);
        self.flush_cjk(&mut cjk, &mut tokens);
        tokens
    }

    fn flush_cjk(&self, run: &mut Vec<char>, out: &mut Vec<String>) {
        let mut i = 0;
        while i < run.len() {
            let longest = (2..=self.max_word_chars.min(run.len() - i))
                .rev()
                .find(|&n| {
                    let cand: String = run[i..i + n].iter().collect();
                    self.dict.contains(&cand)
                })
                .unwrap_or(1);
            out.push(run[i..i + longest].iter().collect());
            i += longest;
        }
        run.clear();
    }
}

fn flush_latin(word: &mut String, out: &mut Vec<String>) {
    let trimmed = word.trim_matches('\'');
    if !trimmed.is_empty() {
        out.push(trimmed.to_string());
    }
    word.clear();
}
