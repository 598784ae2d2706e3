//! Shipped word lists: stopwords, the sentiment lexicon and the mechanism
//! rule table.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use super::{MechanismLabel, SentimentLabel};

const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const SENTIMENT_LEXICON: &str = include_str!("../../data/sentiment_lexicon.tsv");
const MECHANISM_RULES: &str = include_str!("../../data/mechanism_rules.tsv");

fn entries(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn pairs(src: &str) -> impl Iterator<Item = (&str, &str)> {
    entries(src).filter_map(|l| l.split_once('\t'))
}

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn shipped() -> &'static Stopwords {
        static CELL: OnceLock<Stopwords> = OnceLock::new();
        CELL.get_or_init(|| Stopwords(entries(STOPWORDS).map(str::to_lowercase).collect()))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Stopwords(words.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

/// Word → sentiment label.
pub fn sentiment_lexicon() -> &'static HashMap<String, SentimentLabel> {
    static CELL: OnceLock<HashMap<String, SentimentLabel>> = OnceLock::new();
    CELL.get_or_init(|| {
        pairs(SENTIMENT_LEXICON)
            .map(|(label, word)| {
                let label = label
                    .parse()
                    .unwrap_or_else(|_| panic!("bad label `{label}` in sentiment lexicon"));
                (word.to_lowercase(), label)
            })
            .collect()
    })
}

/// Term → mechanism label, in rule order.
pub fn mechanism_rules() -> &'static [(String, MechanismLabel)] {
    static CELL: OnceLock<Vec<(String, MechanismLabel)>> = OnceLock::new();
    CELL.get_or_init(|| {
        pairs(MECHANISM_RULES)
            .map(|(label, term)| {
                let label = label
                    .parse()
                    .unwrap_or_else(|_| panic!("bad label `{label}` in mechanism rules"));
                (term.to_lowercase(), label)
            })
            .collect()
    })
}

/// Every shipped word that the segmenter must be able to emit whole.
pub(crate) fn lexical_entries() -> impl Iterator<Item = &'static str> {
    entries(STOPWORDS)
        .chain(pairs(SENTIMENT_LEXICON).map(|(_, w)| w))
        .chain(pairs(MECHANISM_RULES).map(|(_, w)| w))
}
