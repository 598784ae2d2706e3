//! Planted-topic synthetic corpora.
//!
//! Each generated comment draws its words from exactly one topic's private
//! vocabulary, so the generating topic of every comment is known. Tests use
//! these labels and vocabularies as the ground truth for topic recovery.

use std::collections::BTreeMap;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, SongInfo};
use crate::topics::Vocabulary;

const THEMES: &[&[&str]] = &[
    &[
        "ocean",
        "wave",
        "shore",
        "tide",
        "sail",
        "harbor",
        "anchor",
        "seagull",
        "coral",
        "lighthouse",
        "breeze",
        "island",
        "reef",
        "current",
        "driftwood",
    ],
    &[
        "neon",
        "subway",
        "skyline",
        "traffic",
        "avenue",
        "rooftop",
        "streetlight",
        "taxi",
        "downtown",
        "crosswalk",
        "billboard",
        "alley",
        "elevator",
        "midnight",
        "highway",
    ],
    &[
        "campus",
        "classroom",
        "homework",
        "teacher",
        "exam",
        "library",
        "notebook",
        "uniform",
        "dormitory",
        "lecture",
        "chalk",
        "semester",
        "recess",
        "hallway",
        "locker",
    ],
    &[
        "mountain",
        "valley",
        "forest",
        "river",
        "meadow",
        "cliff",
        "pine",
        "canyon",
        "summit",
        "glacier",
        "trail",
        "boulder",
        "waterfall",
        "cabin",
        "ridge",
    ],
    &[
        "guitar",
        "piano",
        "violin",
        "drum",
        "stage",
        "microphone",
        "speaker",
        "vinyl",
        "cassette",
        "headphones",
        "amplifier",
        "orchestra",
        "saxophone",
        "cello",
        "flute",
    ],
    &[
        "winter",
        "snowflake",
        "frost",
        "blanket",
        "fireplace",
        "scarf",
        "sleigh",
        "icicle",
        "mitten",
        "cocoa",
        "chimney",
        "snowman",
        "sweater",
        "lantern",
        "hearth",
    ],
];

const SENTIMENT_WORDS: &[&str] = &[
    "happy", "smile", "tears", "cry", "lonely", "angry", "hate", "afraid", "scared", "wow", "amazing", "love", "okay",
];

const MECHANISM_WORDS: &[&str] = &[
    "melody",
    "lyrics",
    "rhythm",
    "remember",
    "memories",
    "graduation",
    "childhood",
    "movie",
    "concert",
    "news",
];

/// Words of planted topic `t`. Vocabularies of distinct topics are
/// disjoint.
pub fn topic_vocabulary(t: usize) -> Vec<String> {
    match THEMES.get(t) {
        Some(words) => words.iter().map(|w| w.to_string()).collect(),
        None => (0..15).map(|i| format!("topic{t}word{i}")).collect(),
    }
}

fn zipf_weights(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 / ((i + 1) as f64).sqrt()).collect()
}

/// `docs_per_topic` documents per topic of `doc_len` words each, plus the
/// generating topic of each document.
pub fn planted_documents(
    topics: usize,
    docs_per_topic: usize,
    doc_len: usize,
    seed: u64,
) -> (Vec<Vec<String>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocabs: Vec<Vec<String>> = (0..topics).map(topic_vocabulary).collect();
    let dist = WeightedIndex::new(zipf_weights(vocabs[0].len())).unwrap();
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    for d in 0..topics * docs_per_topic {
        let t = d % topics;
        docs.push((0..doc_len).map(|_| vocabs[t][dist.sample(&mut rng)].clone()).collect());
        labels.push(t);
    }
    (docs, labels)
}

/// Mean, over greedily matched (row, planted topic) pairs, of the row's
/// probability mass on that planted topic's vocabulary. Pairs are matched
/// highest-mass first; at most `topics` pairs are formed.
pub fn greedy_purity(rows: &[Vec<f64>], vocab: &Vocabulary, topics: usize) -> f64 {
    let mass = planted_mass(rows, vocab, topics);
    let mut pairs: Vec<(usize, usize, f64)> = mass
        .iter()
        .enumerate()
        .flat_map(|(r, m)| m.iter().enumerate().map(move |(t, &x)| (r, t, x)))
        .collect();
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut used_rows = vec![false; rows.len()];
    let mut used_topics = vec![false; topics];
    let mut matched = Vec::new();
    for (r, t, x) in pairs {
        if !used_rows[r] && !used_topics[t] {
            used_rows[r] = true;
            used_topics[t] = true;
            matched.push(x);
        }
    }
    if matched.is_empty() {
        return 0.0;
    }
    matched.iter().sum::<f64>() / matched.len() as f64
}

/// `mass[row][t]` = probability mass of `row` on planted topic `t`'s words.
pub fn planted_mass(rows: &[Vec<f64>], vocab: &Vocabulary, topics: usize) -> Vec<Vec<f64>> {
    let owner: Vec<Option<usize>> = vocab
        .words()
        .iter()
        .map(|w| (0..topics).find(|&t| topic_vocabulary(t).contains(w)))
        .collect();
    rows.iter()
        .map(|row| {
            let mut m = vec![0.0; topics];
            for (w, &p) in row.iter().enumerate() {
                if let Some(t) = owner[w] {
                    m[t] += p;
                }
            }
            m
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub topics: usize,
    pub comments: usize,
    pub songs: usize,
    pub seed: u64,
    /// Words per comment, inclusive range.
    pub min_words: usize,
    pub max_words: usize,
    /// Sprinkle sentiment and mechanism cue words into comments.
    pub label_words: bool,
    /// Timestamp of day zero.
    pub start: i64,
    /// Length of each song's timeline in days.
    pub days: i64,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            topics: 3,
            comments: 600,
            songs: 1,
            seed: 7,
            min_words: 6,
            max_words: 10,
            label_words: true,
            start: 1_600_000_000,
            days: 180,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub comments: Vec<Comment>,
    /// Generating topic per comment id.
    pub topic_of: BTreeMap<String, usize>,
    pub catalog: Vec<SongInfo>,
}

impl Fixture {
    pub fn per_song_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.comments {
            *out.entry(c.song_id.clone()).or_insert(0) += 1;
        }
        out
    }
}

/// Comments arrive in three bursts per song; each burst favors one topic.
pub fn generate(spec: &FixtureSpec) -> Fixture {
    assert!(spec.topics >= 1 && spec.songs >= 1);
    assert!(spec.min_words >= 1 && spec.min_words <= spec.max_words);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vocabs: Vec<Vec<String>> = (0..spec.topics).map(topic_vocabulary).collect();
    let word_dist = WeightedIndex::new(zipf_weights(15)).unwrap();
    let day = 86_400i64;
    let bursts = [(0.08, 0.45), (0.45, 0.35), (0.8, 0.2)];

    let mut comments = Vec::with_capacity(spec.comments);
    let mut topic_of = BTreeMap::new();
    for n in 0..spec.comments {
        let song = n % spec.songs;
        let b = rng.random_range(0..bursts.len());
        let (center, _) = bursts[b];
        let spread = 0.06 * spec.days as f64;
        let offset_days = (center * spec.days as f64 + (rng.random::<f64>() - rng.random::<f64>()) * spread)
            .clamp(0.0, spec.days as f64 - 1.0);
        let timestamp = spec.start + (offset_days * day as f64) as i64 + rng.random_range(0..3600);

        let topic = if rng.random::<f64>() < 0.6 {
            b % spec.topics
        } else {
            rng.random_range(0..spec.topics)
        };
        let len = rng.random_range(spec.min_words..=spec.max_words);
        let mut words: Vec<String> = (0..len)
            .map(|_| vocabs[topic][word_dist.sample(&mut rng) % vocabs[topic].len()].clone())
            .collect();
        if spec.label_words {
            if rng.random::<f64>() < 0.6 {
                words.push(SENTIMENT_WORDS[rng.random_range(0..SENTIMENT_WORDS.len())].into());
            }
            if rng.random::<f64>() < 0.5 {
                words.push(MECHANISM_WORDS[rng.random_range(0..MECHANISM_WORDS.len())].into());
            }
        }
        let id = format!("c{n:06}");
        topic_of.insert(id.clone(), topic);
        comments.push(Comment {
            id,
            song_id: format!("S{}", song + 1),
            text: words.join(" "),
            timestamp,
            like_count: rng.random_range(0..500),
            user_id: Some(format!("u{}", rng.random_range(0..200))),
        });
    }
    comments.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
    let catalog = (0..spec.songs)
        .map(|s| SongInfo {
            id: format!("S{}", s + 1),
            title: format!("Song {}", s + 1),
            artist: format!("Artist {}", s % 4 + 1),
            album: format!("Album {}", s % 3 + 1),
        })
        .collect();
    Fixture {
        comments,
        topic_of,
        catalog,
    }
}
