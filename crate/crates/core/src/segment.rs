//! Top-down segmentation of the comment-count series into time periods.
//!
//! Segments are modeled as constant at their mean; a segment's error is its
//! sum of squared deviations. A segment is split at the index minimizing the
//! summed error of the two halves until every segment is within tolerance or
//! too short to split.

use serde::{Deserialize, Serialize};

use crate::corpus::Comment;

pub const DAY: i64 = 86_400;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("no comments to bin")]
    Empty,
    #[error("bin width must be positive")]
    BadBinWidth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSeries {
    pub bin_width: i64,
    pub origin: i64,
    pub counts: Vec<u64>,
}

impl CountSeries {
    pub fn bin_start(&self, bin: usize) -> i64 {
        self.origin + bin as i64 * self.bin_width
    }

    pub fn end(&self) -> i64 {
        self.bin_start(self.counts.len())
    }

    /// Counts as reals, optionally smoothed by a centered moving average of
    /// `window` bins (truncated at the edges).
    pub fn values(&self, window: Option<usize>) -> Vec<f64> {
        let raw: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        match window {
            Some(w) if w > 1 => {
                let half = w / 2;
                (0..raw.len())
                    .map(|i| {
                        let lo = i.saturating_sub(half);
                        let hi = (i + w - half).min(raw.len());
                        raw[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
                    })
                    .collect()
            }
            _ => raw,
        }
    }
}

/// Histogram of timestamps; the first bin starts at the earliest one.
pub fn build_count_series(comments: &[&Comment], bin_width: i64) -> Result<CountSeries, SegmentError> {
    if bin_width <= 0 {
        return Err(SegmentError::BadBinWidth);
    }
    let origin = comments.iter().map(|c| c.timestamp).min().ok_or(SegmentError::Empty)?;
    let last = comments.iter().map(|c| c.timestamp).max().unwrap();
    let mut counts = vec![0u64; ((last - origin) / bin_width) as usize + 1];
    for c in comments {
        counts[((c.timestamp - origin) / bin_width) as usize] += 1;
    }
    Ok(CountSeries {
        bin_width,
        origin,
        counts,
    })
}

/// Prefix sums for O(1) segment error queries.
#[derive(Debug, Clone)]
pub struct SegmentCost {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl SegmentCost {
    pub fn new(values: &[f64]) -> Self {
        let mut sum = vec![0.0; values.len() + 1];
        let mut sum_sq = vec![0.0; values.len() + 1];
        for (i, &v) in values.iter().enumerate() {
            sum[i + 1] = sum[i] + v;
            sum_sq[i + 1] = sum_sq[i] + v * v;
        }
        SegmentCost { sum, sum_sq }
    }

    /// Squared error of `[lo, hi)` around its mean.
    pub fn sse(&self, lo: usize, hi: usize) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let n = (hi - lo) as f64;
        let s = self.sum[hi] - self.sum[lo];
        let sq = self.sum_sq[hi] - self.sum_sq[lo];
        (sq - s * s / n).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum MaxError {
    /// Fraction of the whole series' error.
    Relative(f64),
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentParams {
    pub bin_width: i64,
    pub min_len: usize,
    pub max_error: MaxError,
    /// Keep at most this many periods (by strongest cuts).
    pub max_periods: Option<usize>,
    pub smoothing: Option<usize>,
}

impl Default for SegmentParams {
    fn default() -> Self {
        SegmentParams {
            bin_width: DAY,
            min_len: 7,
            max_error: MaxError::Relative(0.05),
            max_periods: Some(12),
            smoothing: None,
        }
    }
}

/// A cut and the error it removed when made.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub index: usize,
    pub gain: f64,
}

/// Recursive top-down splitting. Returns cuts sorted by index.
pub fn segment_topdown(values: &[f64], max_error: f64, min_len: usize) -> Vec<Cut> {
    assert!(max_error >= 0.0, "max_error must be non-negative");
    assert!(min_len >= 1, "min_len must be at least 1");
    let cost = SegmentCost::new(values);
    let mut cuts = Vec::new();
    let mut stack = vec![(0, values.len())];
    while let Some((lo, hi)) = stack.pop() {
        let err = cost.sse(lo, hi);
        if hi - lo < 2 * min_len || err <= max_error {
            continue;
        }
        let (best, best_err) = (lo + min_len..=hi - min_len)
            .map(|s| (s, cost.sse(lo, s) + cost.sse(s, hi)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .unwrap();
        cuts.push(Cut {
            index: best,
            gain: err - best_err,
        });
        stack.push((lo, best));
        stack.push((best, hi));
    }
    cuts.sort_by_key(|c| c.index);
    cuts
}

/// Keeps the `max_periods - 1` cuts with the largest gain.
pub fn cap_cuts(mut cuts: Vec<Cut>, max_periods: usize) -> Vec<Cut> {
    let keep = max_periods.saturating_sub(1);
    if cuts.len() > keep {
        cuts.sort_by(|a, b| b.gain.total_cmp(&a.gain).then(a.index.cmp(&b.index)));
        cuts.truncate(keep);
        cuts.sort_by_key(|c| c.index);
    }
    cuts
}

/// Cut bin indices for a series under `params`.
pub fn segment_series(series: &CountSeries, params: &SegmentParams) -> Vec<usize> {
    segment_values(&series.values(params.smoothing), params)
}

/// Cut indices for already-binned values. `params.smoothing` is ignored.
pub fn segment_values(values: &[f64], params: &SegmentParams) -> Vec<usize> {
    let threshold = match params.max_error {
        MaxError::Absolute(x) => x,
        MaxError::Relative(q) => q * SegmentCost::new(values).sse(0, values.len()),
    };
    let mut cuts = segment_topdown(values, threshold, params.min_len);
    if let Some(max) = params.max_periods {
        cuts = cap_cuts(cuts, max);
    }
    cuts.into_iter().map(|c| c.index).collect()
}

/// Half-open time range `[start, end)` and its comments, chronological.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimePeriod {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    pub comment_ids: Vec<String>,
}

/// Maps cut bins to timestamps and attaches comments. Empty periods merge
/// into their successor (the last one into its predecessor).
pub fn periods_from_cuts(series: &CountSeries, cuts: &[usize], comments: &[&Comment]) -> Vec<TimePeriod> {
    let mut bounds = vec![series.origin];
    bounds.extend(
        cuts.iter()
            .filter(|&&c| c > 0 && c < series.counts.len())
            .map(|&c| series.bin_start(c)),
    );
    bounds.push(series.end());
    bounds.dedup();

    let mut sorted: Vec<&Comment> = comments.to_vec();
    sorted.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));

    let mut periods: Vec<TimePeriod> = bounds
        .windows(2)
        .map(|w| TimePeriod {
            index: 0,
            start: w[0],
            end: w[1],
            comment_ids: sorted
                .iter()
                .filter(|c| c.timestamp >= w[0] && c.timestamp < w[1])
                .map(|c| c.id.clone())
                .collect(),
        })
        .collect();

    let mut i = 0;
    while i < periods.len() && periods.len() > 1 {
        if !periods[i].comment_ids.is_empty() {
            i += 1;
            continue;
        }
        let empty = periods.remove(i);
        if i < periods.len() {
            periods[i].start = empty.start;
        } else {
            periods[i - 1].end = empty.end;
        }
    }
    for (i, p) in periods.iter_mut().enumerate() {
        p.index = i;
    }
    periods
}
