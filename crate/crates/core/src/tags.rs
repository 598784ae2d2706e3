//! Per-song preview tags: the most frequent comment keywords.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::nlp::Stopwords;

pub const TAG_COUNT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreviewTag {
    pub word: String,
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreviewTagSet {
    pub song_id: String,
    pub tags: Vec<PreviewTag>,
}

/// Counts keyword occurrences over a song's comments (`keywords[i]` lists
/// the keywords of comment `i`), skipping stopwords and title tokens.
/// Ranked by frequency descending, then word.
pub fn generate_preview_tags<S: AsRef<str>>(
    song_id: &str,
    title_tokens: &[String],
    keywords: &[Vec<S>],
    stopwords: &Stopwords,
) -> PreviewTagSet {
    let excluded: BTreeSet<&str> = title_tokens.iter().map(String::as_str).collect();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for w in keywords.iter().flatten().map(AsRef::as_ref) {
        if !stopwords.contains(w) && !excluded.contains(w) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<PreviewTag> = counts
        .into_iter()
        .map(|(word, frequency)| PreviewTag {
            word: word.to_string(),
            frequency,
        })
        .collect();
    // stable sort keeps the map's word order among equal counts
    ranked.sort_by_key(|t| std::cmp::Reverse(t.frequency));
    ranked.truncate(TAG_COUNT);
    PreviewTagSet {
        song_id: song_id.to_string(),
        tags: ranked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stop() -> Stopwords {
        Stopwords::from_words(["the", "a"])
    }

    fn kw(lists: &[&[&str]]) -> Vec<Vec<String>> {
        lists
            .iter()
            .map(|l| l.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn fewer_candidates_than_slots() {
        let t = generate_preview_tags("S1", &[], &kw(&[&["rain", "sea"], &["rain", "sky"]]), &stop());
        let words: Vec<_> = t.tags.iter().map(|t| (t.word.as_str(), t.frequency)).collect();
        assert_eq!(words, vec![("rain", 2), ("sea", 1), ("sky", 1)]);
    }

    #[test]
    fn truncates_to_eight() {
        let mut lists = Vec::new();
        for i in 0..10 {
            for _ in 0..=i {
                lists.push(vec![format!("w{i}")]);
            }
        }
        let t = generate_preview_tags("S1", &[], &lists, &stop());
        assert_eq!(t.tags.len(), 8);
        assert_eq!(t.tags[0].word, "w9");
        assert_eq!(t.tags[7].word, "w2");
    }

    #[test]
    fn excludes_title_and_stopwords() {
        let t = generate_preview_tags(
            "S1",
            &["dance".to_string()],
            &kw(&[&["last", "dance", "the"], &["dance"]]),
            &stop(),
        );
        assert_eq!(
            t.tags,
            vec![PreviewTag {
                word: "last".into(),
                frequency: 1
            }]
        );
        assert!(generate_preview_tags::<String>("S2", &[], &[], &stop()).tags.is_empty());
    }
}
