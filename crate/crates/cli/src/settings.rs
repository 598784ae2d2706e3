use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use commentmap::pipeline::PipelineConfig;
use commentmap::segment::MaxError;
use serde::Deserialize;

/// Missing or inconsistent arguments that clap cannot check on its own.
#[derive(Debug)]
pub struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Flat keys accepted in a `--config` TOML file. Any key may be absent.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub song: Option<String>,
    pub seed: Option<u64>,
    pub bins: Option<i64>,
    pub min_len: Option<usize>,
    pub max_error: Option<f64>,
    pub max_error_abs: Option<f64>,
    pub max_periods: Option<usize>,
    pub eps: Option<f64>,
    pub min_pts: Option<usize>,
    pub k_topics: Option<usize>,
    pub ensemble: Option<usize>,
    pub iterations: Option<usize>,
    pub threshold: Option<f64>,
    pub keywords: Option<usize>,
    pub port: Option<u16>,
    pub data_dir: Option<PathBuf>,
    pub topics: Option<usize>,
    pub comments: Option<usize>,
    pub songs: Option<usize>,
    pub sequential: Option<bool>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Debug, Args)]
pub struct PipelineFlags {
    #[arg(long)]
    seed: Option<u64>,
    /// Bin width of the count series, in seconds.
    #[arg(long)]
    bins: Option<i64>,
    /// Minimum period length, in bins.
    #[arg(long)]
    min_len: Option<usize>,
    /// Stop splitting once a segment's error is below this fraction of the
    /// whole series' error.
    #[arg(long, conflicts_with = "max_error_abs")]
    max_error: Option<f64>,
    /// Absolute segment error tolerance.
    #[arg(long)]
    max_error_abs: Option<f64>,
    #[arg(long)]
    max_periods: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    /// Topics per LDA model.
    #[arg(long)]
    k_topics: Option<usize>,
    /// Models per ensemble.
    #[arg(long)]
    ensemble: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Keyword cosine threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Keywords kept per comment.
    #[arg(long)]
    keywords: Option<usize>,
}

impl PipelineFlags {
    pub fn resolve(&self, file: &FileConfig) -> Result<PipelineConfig> {
        let mut c = PipelineConfig::default();
        if let Some(v) = self.seed.or(file.seed) {
            c.seed = v;
        }
        if let Some(v) = self.bins.or(file.bins) {
            if v <= 0 {
                return Err(usage("--bins must be positive"));
            }
            c.segment.bin_width = v;
        }
        if let Some(v) = self.min_len.or(file.min_len) {
            if v == 0 {
                return Err(usage("--min-len must be positive"));
            }
            c.segment.min_len = v;
        }
        // a flag of either kind beats either key in the file
        let rel = self.max_error.map(MaxError::Relative);
        let abs = self.max_error_abs.map(MaxError::Absolute);
        let file_err = file
            .max_error_abs
            .map(MaxError::Absolute)
            .or(file.max_error.map(MaxError::Relative));
        if let Some(e) = rel.or(abs).or(file_err) {
            let v = match e {
                MaxError::Relative(v) | MaxError::Absolute(v) => v,
            };
            if !(v.is_finite() && v >= 0.0) {
                return Err(usage("max error must be a non-negative number"));
            }
            c.segment.max_error = e;
        }
        if let Some(v) = self.max_periods.or(file.max_periods) {
            c.segment.max_periods = if v == 0 { None } else { Some(v) };
        }
        if let Some(v) = self.eps.or(file.eps) {
            if !(v > 0.0 && v <= 1.0) {
                return Err(usage("--eps must be in (0, 1]"));
            }
            c.ensemble.eps = v;
        }
        if let Some(v) = self.min_pts.or(file.min_pts) {
            if v == 0 {
                return Err(usage("--min-pts must be positive"));
            }
            c.ensemble.min_pts = v;
        }
        if let Some(v) = self.k_topics.or(file.k_topics) {
            if v == 0 {
                return Err(usage("--k-topics must be positive"));
            }
            c.ensemble.lda.k = v;
        }
        if let Some(v) = self.ensemble.or(file.ensemble) {
            if v == 0 {
                return Err(usage("--ensemble must be positive"));
            }
            c.ensemble.models = v;
        }
        if let Some(v) = self.iterations.or(file.iterations) {
            c.ensemble.lda.iterations = v;
        }
        if let Some(v) = self.threshold.or(file.threshold) {
            if !(-1.0..=1.0).contains(&v) {
                return Err(usage("--threshold must be in [-1, 1]"));
            }
            c.keywords.threshold = v;
        }
        if let Some(v) = self.keywords.or(file.keywords) {
            c.keywords.k = v;
        }
        Ok(c)
    }
}
