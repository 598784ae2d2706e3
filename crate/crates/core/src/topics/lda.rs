use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TopicError;

/// Sorted word list with a reverse index.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        let words: Vec<String> = words
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Vocabulary { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }
}

/// Documents encoded against a shared vocabulary.
#[derive(Debug, Clone)]
pub struct EncodedCorpus {
    pub vocab: Arc<Vocabulary>,
    pub docs: Vec<Vec<usize>>,
}

impl EncodedCorpus {
    pub fn new<S: AsRef<str>>(docs: &[Vec<S>]) -> Self {
        let vocab = Arc::new(Vocabulary::from_words(docs.iter().flatten().map(AsRef::as_ref)));
        let docs = docs
            .iter()
            .map(|d| d.iter().map(|w| vocab.id(w.as_ref()).unwrap()).collect())
            .collect();
        EncodedCorpus { vocab, docs }
    }

    pub fn token_count(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }
}

/// Document-topic prior used unless overridden.
pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub k: usize,
    /// Symmetric document-topic prior; `None` means `50 / k`. Short documents
    /// such as comments want a small value.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams {
            k: 20,
            alpha: Some(DEFAULT_ALPHA),
            beta: 0.01,
            iterations: 200,
        }
    }
}

impl LdaParams {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }
}

/// Point estimates from the final Gibbs state. Rows of both matrices sum
/// to one.
#[derive(Debug, Clone)]
pub struct TopicModel {
    pub k: usize,
    pub vocab: Arc<Vocabulary>,
    pub topic_word: Vec<Vec<f64>>,
    pub doc_topic: Vec<Vec<f64>>,
    pub seed: u64,
    /// Sum over tokens of `ln Σ_k θ_dk φ_kw`.
    pub log_likelihood: f64,
}

impl TopicModel {
    /// Average share of the corpus assigned to each topic.
    pub fn topic_mass(&self) -> Vec<f64> {
        let mut mass = vec![0.0; self.k];
        for row in &self.doc_topic {
            for (m, x) in mass.iter_mut().zip(row) {
                *m += x;
            }
        }
        let d = self.doc_topic.len().max(1) as f64;
        mass.iter_mut().for_each(|m| *m /= d);
        mass
    }
}

/// Collapsed Gibbs sampler; deterministic for a given seed.
pub fn train_lda(corpus: &EncodedCorpus, params: &LdaParams, seed: u64) -> Result<TopicModel, TopicError> {
    if corpus.docs.is_empty() {
        return Err(TopicError::NoDocuments);
    }
    if params.k == 0 {
        return Err(TopicError::ZeroTopics);
    }
    if corpus.vocab.is_empty() {
        return Err(TopicError::EmptyVocabulary);
    }
    let k = params.k;
    let v = corpus.vocab.len();
    let alpha = params.alpha();
    let beta = params.beta;
    let vbeta = v as f64 * beta;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_dk = vec![vec![0u32; k]; corpus.docs.len()];
    let mut n_kw = vec![0u32; k * v];
    let mut n_k = vec![0u32; k];
    let mut z: Vec<Vec<usize>> = corpus
        .docs
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            doc.iter()
                .map(|&w| {
                    let t = rng.random_range(0..k);
                    n_dk[d][t] += 1;
                    n_kw[t * v + w] += 1;
                    n_k[t] += 1;
                    t
                })
                .collect()
        })
        .collect();

    let mut p = vec![0.0f64; k];
    for _ in 0..params.iterations {
        for (d, doc) in corpus.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let old = z[d][i];
                n_dk[d][old] -= 1;
                n_kw[old * v + w] -= 1;
                n_k[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    total += (n_dk[d][t] as f64 + alpha) * (n_kw[t * v + w] as f64 + beta) / (n_k[t] as f64 + vbeta);
                    p[t] = total;
                }
                let u = rng.random::<f64>() * total;
                let new = p.iter().position(|&c| u < c).unwrap_or(k - 1);

                z[d][i] = new;
                n_dk[d][new] += 1;
                n_kw[new * v + w] += 1;
                n_k[new] += 1;
            }
        }
    }

    let topic_word: Vec<Vec<f64>> = (0..k)
        .map(|t| {
            (0..v)
                .map(|w| (n_kw[t * v + w] as f64 + beta) / (n_k[t] as f64 + vbeta))
                .collect()
        })
        .collect();
    let doc_topic: Vec<Vec<f64>> = corpus
        .docs
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            let denom = doc.len() as f64 + k as f64 * alpha;
            (0..k).map(|t| (n_dk[d][t] as f64 + alpha) / denom).collect()
        })
        .collect();
    let log_likelihood = corpus
        .docs
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            doc.iter()
                .map(|&w| (0..k).map(|t| doc_topic[d][t] * topic_word[t][w]).sum::<f64>().ln())
                .sum::<f64>()
        })
        .sum();
    z.clear();

    Ok(TopicModel {
        k,
        vocab: corpus.vocab.clone(),
        topic_word,
        doc_topic,
        seed,
        log_likelihood,
    })
}
