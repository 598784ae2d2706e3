//! Client for an external classification model.
//!
//! Wire contract: `POST {base}/classify` with
//! `{"task": "sentiment" | "mechanism", "texts": [...]}`, answered by
//! `{"labels": [...], "confidences": [...]}` in input order.

use std::marker::PhantomData;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{Classifier, ClassifierError, LabelSet, Prediction};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RemoteConfig {
    /// Base URL, e.g. `http://127.0.0.1:9000`.
    pub base_url: String,
    pub timeout_ms: u64,
    /// Extra attempts after the first failure.
    pub retries: u32,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        RemoteConfig {
            base_url: "http://127.0.0.1:9000".into(),
            timeout_ms: 10_000,
            retries: 2,
        }
    }
}

#[derive(Serialize)]
struct ClassifyRequest<'a> {
    task: &'a str,
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct ClassifyResponse {
    labels: Vec<String>,
    confidences: Vec<f64>,
}

pub struct RemoteClassifier<L> {
    config: RemoteConfig,
    agent: ureq::Agent,
    _label: PhantomData<fn() -> L>,
}

impl<L: LabelSet> RemoteClassifier<L> {
    pub fn new(config: RemoteConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(config.timeout_ms)))
            .build()
            .into();
        RemoteClassifier {
            config,
            agent,
            _label: PhantomData,
        }
    }

    fn endpoint(&self) -> String {
        format!("{}/classify", self.config.base_url.trim_end_matches('/'))
    }

    fn attempt(&self, texts: &[&str]) -> Result<ClassifyResponse, String> {
        let body = ClassifyRequest { task: L::TASK, texts };
        let mut resp = self
            .agent
            .post(&self.endpoint())
            .send_json(&body)
            .map_err(|e| e.to_string())?;
        resp.body_mut()
            .read_json::<ClassifyResponse>()
            .map_err(|e| e.to_string())
    }
}

impl<L: LabelSet> Classifier<L> for RemoteClassifier<L> {
    fn classify(&self, text: &str) -> Result<Prediction<L>, ClassifierError> {
        let mut out = self.classify_batch(&[text])?;
        Ok(out.remove(0))
    }

    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<Prediction<L>>, ClassifierError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let attempts = self.config.retries + 1;
        let mut last = String::new();
        let mut resp = None;
        for _ in 0..attempts {
            match self.attempt(texts) {
                Ok(r) => {
                    resp = Some(r);
                    break;
                }
                Err(e) => last = e,
            }
        }
        let resp = resp.ok_or(ClassifierError::Transport {
            attempts,
            message: last,
        })?;
        if resp.labels.len() != texts.len() || resp.confidences.len() != texts.len() {
            return Err(ClassifierError::BadResponse(format!(
                "expected {} predictions, got {} labels and {} confidences",
                texts.len(),
                resp.labels.len(),
                resp.confidences.len()
            )));
        }
        resp.labels
            .iter()
            .zip(resp.confidences)
            .map(|(label, confidence)| {
                let label = label
                    .parse::<L>()
                    .map_err(|_| ClassifierError::BadResponse(format!("unknown {} label `{label}`", L::TASK)))?;
                if !(0.0..=1.0).contains(&confidence) {
                    return Err(ClassifierError::BadResponse(format!(
                        "confidence {confidence} outside [0, 1]"
                    )));
                }
                Ok(Prediction { label, confidence })
            })
            .collect()
    }
}
