//! Ensemble LDA: several independently seeded Gibbs runs whose topics are
//! clustered by DBSCAN under Jensen–Shannon distance into stable topics.

mod dbscan;
mod lda;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exec::Execution;

pub use dbscan::{dbscan, js_distance, Clustering, DistanceMatrix};
pub use lda::{train_lda, EncodedCorpus, LdaParams, TopicModel, Vocabulary, DEFAULT_ALPHA};

/// Words shown in a topic's word cloud.
pub const CLOUD_WORDS: usize = 10;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TopicError {
    #[error("no documents")]
    NoDocuments,
    #[error("documents contain no words")]
    EmptyVocabulary,
    #[error("topic count must be at least 1")]
    ZeroTopics,
    #[error("expected {expected} seeds, got {got}")]
    SeedCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub models: usize,
    pub lda: LdaParams,
    pub eps: f64,
    pub min_pts: usize,
}

impl Default for EnsembleParams {
    fn default() -> Self {
        EnsembleParams {
            models: 8,
            lda: LdaParams::default(),
            eps: 0.7,
            min_pts: 2,
        }
    }
}

/// One topic row of one ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateTopic {
    pub model: usize,
    pub topic: usize,
    pub distribution: Vec<f64>,
    /// Average document share of this topic in its model.
    pub mass: f64,
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub models: Vec<TopicModel>,
    pub candidates: Vec<CandidateTopic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedWord {
    pub word: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topic {
    pub id: usize,
    pub word_weights: BTreeMap<String, f64>,
    /// Highest-weight words, descending (ties by word).
    pub top_words: Vec<WeightedWord>,
    pub prior_mass: f64,
    pub member_comment_ids: Vec<String>,
}

impl Topic {
    fn from_distribution(id: usize, vocab: &Vocabulary, dist: &[f64], prior_mass: f64) -> Self {
        let word_weights: BTreeMap<String, f64> = vocab.words().iter().cloned().zip(dist.iter().copied()).collect();
        let mut ranked: Vec<WeightedWord> = word_weights
            .iter()
            .map(|(w, &p)| WeightedWord {
                word: w.clone(),
                weight: p,
            })
            .collect();
        ranked.sort_by(|a, b| b.weight.total_cmp(&a.weight).then_with(|| a.word.cmp(&b.word)));
        ranked.truncate(CLOUD_WORDS);
        Topic {
            id,
            word_weights,
            top_words: ranked,
            prior_mass,
            member_comment_ids: Vec::new(),
        }
    }

    pub fn score(&self, tokens: &[String]) -> f64 {
        tokens.iter().filter_map(|t| self.word_weights.get(t)).sum()
    }
}

/// Runs one LDA model per seed and concatenates their topic rows.
pub fn ensemble_topics(
    corpus: &EncodedCorpus,
    lda: &LdaParams,
    seeds: &[u64],
    exec: Execution,
) -> Result<Ensemble, TopicError> {
    let models = exec
        .map(seeds, |&seed| train_lda(corpus, lda, seed))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let candidates = models
        .iter()
        .enumerate()
        .flat_map(|(m, model)| {
            let mass = model.topic_mass();
            model.topic_word.iter().enumerate().map(move |(t, row)| CandidateTopic {
                model: m,
                topic: t,
                distribution: row.clone(),
                mass: mass[t],
            })
        })
        .collect();
    Ok(Ensemble { models, candidates })
}

pub fn candidate_distances(candidates: &[CandidateTopic], exec: Execution) -> DistanceMatrix {
    DistanceMatrix::from_fn(candidates.len(), exec, |i, j| {
        js_distance(&candidates[i].distribution, &candidates[j].distribution)
    })
}

/// Clusters candidate rows and merges each cluster by averaging its
/// distributions. Noise rows are dropped; an all-noise result is empty.
pub fn group_topics_dbscan(
    candidates: &[CandidateTopic],
    vocab: &Vocabulary,
    eps: f64,
    min_pts: usize,
    exec: Execution,
) -> Vec<Topic> {
    let dist = candidate_distances(candidates, exec);
    let clustering = dbscan(&dist, eps, min_pts);
    clustering
        .clusters()
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let mut avg = vec![0.0; vocab.len()];
            for &m in &members {
                for (a, x) in avg.iter_mut().zip(&candidates[m].distribution) {
                    *a += x;
                }
            }
            let total: f64 = avg.iter().sum();
            avg.iter_mut().for_each(|a| *a /= total);
            let mass = members.iter().map(|&m| candidates[m].mass).sum::<f64>() / members.len() as f64;
            Topic::from_distribution(id, vocab, &avg, mass)
        })
        .collect()
}

/// Index of the model with the median log-likelihood (lower median for an
/// even count; ties by model index).
pub fn median_model(models: &[TopicModel]) -> usize {
    let mut order: Vec<usize> = (0..models.len()).collect();
    order.sort_by(|&a, &b| {
        models[a]
            .log_likelihood
            .total_cmp(&models[b].log_likelihood)
            .then(a.cmp(&b))
    });
    order[(order.len() - 1) / 2]
}

/// Topics of a single model, unclustered.
pub fn model_topics(model: &TopicModel) -> Vec<Topic> {
    let mass = model.topic_mass();
    model
        .topic_word
        .iter()
        .enumerate()
        .map(|(t, row)| Topic::from_distribution(t, &model.vocab, row, mass[t]))
        .collect()
}

#[derive(Debug, Clone)]
pub struct StableTopics {
    pub topics: Vec<Topic>,
    /// True when DBSCAN found no cluster and the median model was used.
    pub fallback: bool,
}

/// Full ensemble pipeline for one document collection.
pub fn stable_topics(
    docs: &[Vec<String>],
    params: &EnsembleParams,
    seeds: &[u64],
    exec: Execution,
) -> Result<StableTopics, TopicError> {
    if seeds.len() != params.models {
        return Err(TopicError::SeedCount {
            expected: params.models,
            got: seeds.len(),
        });
    }
    let corpus = EncodedCorpus::new(docs);
    let ensemble = ensemble_topics(&corpus, &params.lda, seeds, exec)?;
    let topics = group_topics_dbscan(&ensemble.candidates, &corpus.vocab, params.eps, params.min_pts, exec);
    if !topics.is_empty() {
        return Ok(StableTopics {
            topics,
            fallback: false,
        });
    }
    Ok(StableTopics {
        topics: model_topics(&ensemble.models[median_model(&ensemble.models)]),
        fallback: true,
    })
}

/// Topic whose word weights summed over `tokens` are largest (ties: lowest
/// id). With no scoring overlap at all, the topic with the largest prior
/// mass wins.
pub fn assign_topic(tokens: &[String], topics: &[Topic]) -> usize {
    assert!(!topics.is_empty(), "no topics to assign to");
    let scores: Vec<f64> = topics.iter().map(|t| t.score(tokens)).collect();
    let pick = |key: &dyn Fn(usize) -> f64| {
        (0..topics.len())
            .max_by(|&a, &b| key(a).total_cmp(&key(b)).then(b.cmp(&a)))
            .unwrap()
    };
    if scores.iter().all(|&s| s == 0.0) {
        let best = pick(&|i| topics[i].prior_mass);
        return topics[best].id;
    }
    topics[pick(&|i| scores[i])].id
}
