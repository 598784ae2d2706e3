use serde::{Deserialize, Serialize};

use super::lexicon::{mechanism_rules, sentiment_lexicon};
use super::{MechanismLabel, SentimentLabel, Tokenizer};
use crate::corpus::Comment;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction<L> {
    pub label: L,
    pub confidence: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("classifier transport failed after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("classifier returned an invalid response: {0}")]
    BadResponse(String),
}

pub trait Classifier<L>: Send + Sync {
    fn classify(&self, text: &str) -> Result<Prediction<L>, ClassifierError>;

    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<Prediction<L>>, ClassifierError> {
        texts.iter().map(|t| self.classify(t)).collect()
    }
}

pub fn classify_sentiment(
    comment: &Comment,
    classifier: &dyn Classifier<SentimentLabel>,
) -> Result<Prediction<SentimentLabel>, ClassifierError> {
    classifier.classify(&comment.text)
}

pub fn classify_mechanism(
    comment: &Comment,
    classifier: &dyn Classifier<MechanismLabel>,
) -> Result<Prediction<MechanismLabel>, ClassifierError> {
    classifier.classify(&comment.text)
}

/// Majority vote over sentiment-lexicon hits. No hits, or a tie for the top
/// count, yields neutral with confidence 0.
#[derive(Debug, Clone, Default)]
pub struct LexiconSentiment {
    tokenizer: Tokenizer,
}

impl LexiconSentiment {
    pub fn new(tokenizer: Tokenizer) -> Self {
        LexiconSentiment { tokenizer }
    }

    pub fn hit_counts(&self, text: &str) -> [usize; 6] {
        let lex = sentiment_lexicon();
        let mut counts = [0usize; 6];
        for tok in self.tokenizer.tokenize(text) {
            if let Some(&label) = lex.get(&tok) {
                counts[label as usize] += 1;
            }
        }
        counts
    }
}

impl Classifier<SentimentLabel> for LexiconSentiment {
    fn classify(&self, text: &str) -> Result<Prediction<SentimentLabel>, ClassifierError> {
        let counts = self.hit_counts(text);
        let total: usize = counts.iter().sum();
        let best = *counts.iter().max().unwrap();
        let winners: Vec<_> = SentimentLabel::ALL
            .into_iter()
            .filter(|l| counts[*l as usize] == best)
            .collect();
        Ok(match winners.as_slice() {
            [label] if total > 0 => Prediction {
                label: *label,
                confidence: best as f64 / total as f64,
            },
            _ => Prediction {
                label: SentimentLabel::Neutral,
                confidence: 0.0,
            },
        })
    }
}

/// Rule table: terms about the music itself, first-person memory markers,
/// and event/context markers. Most hits wins; ties go to the earlier class
/// in that order. No hits yields `others` with confidence 0.
#[derive(Debug, Clone, Default)]
pub struct RuleMechanism {
    tokenizer: Tokenizer,
}

impl RuleMechanism {
    pub fn new(tokenizer: Tokenizer) -> Self {
        RuleMechanism { tokenizer }
    }

    pub fn hit_counts(&self, text: &str) -> [usize; 4] {
        let rules = mechanism_rules();
        let mut counts = [0usize; 4];
        for tok in self.tokenizer.tokenize(text) {
            if let Some((_, label)) = rules.iter().find(|(t, _)| *t == tok) {
                counts[label.index()] += 1;
            }
        }
        counts
    }
}

impl Classifier<MechanismLabel> for RuleMechanism {
    fn classify(&self, text: &str) -> Result<Prediction<MechanismLabel>, ClassifierError> {
        let counts = self.hit_counts(text);
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Ok(Prediction {
                label: MechanismLabel::Others,
                confidence: 0.0,
            });
        }
        let best = *counts.iter().max().unwrap();
        let label = MechanismLabel::ALL
            .into_iter()
            .find(|l| counts[l.index()] == best)
            .unwrap();
        Ok(Prediction {
            label,
            confidence: best as f64 / total as f64,
        })
    }
}
