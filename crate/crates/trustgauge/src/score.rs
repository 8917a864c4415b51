//! Weighted trust scoring over the seven NIST AI RMF trustworthiness
//! categories.
//!
//! A measurement vector (fractions, 0/1 flags, and raw counts) is paired
//! index-for-index with a weight vector; the trust score is their dot
//! product clamped to `[-1, 1]`. Negative weights penalize a metric, so a
//! rising crash count lowers the score.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed before the true/false positive/negative shares are flagged
/// for summing past 1.
pub const CONFUSION_SUM_TOLERANCE: f64 = 1e-9;

/// The seven trustworthiness categories of the NIST AI Risk Management
/// Framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricCategory {
    ReliabilityValidity,
    Safety,
    SecurityResilience,
    AccountabilityTransparency,
    ExplainabilityInterpretability,
    Privacy,
    BiasManagement,
}

impl MetricCategory {
    pub const ALL: [MetricCategory; 7] = [
        MetricCategory::ReliabilityValidity,
        MetricCategory::Safety,
        MetricCategory::SecurityResilience,
        MetricCategory::AccountabilityTransparency,
        MetricCategory::ExplainabilityInterpretability,
        MetricCategory::Privacy,
        MetricCategory::BiasManagement,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricCategory::ReliabilityValidity => "reliability_validity",
            MetricCategory::Safety => "safety",
            MetricCategory::SecurityResilience => "security_resilience",
            MetricCategory::AccountabilityTransparency => "accountability_transparency",
            MetricCategory::ExplainabilityInterpretability => "explainability_interpretability",
            MetricCategory::Privacy => "privacy",
            MetricCategory::BiasManagement => "bias_management",
        }
    }
}

impl fmt::Display for MetricCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Numeric domain of a metric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// A share in `[0, 1]`; percentages are written as decimals (99.99% is
    /// `0.9999`).
    Fraction,
    /// A present/absent marker, exactly 0 or 1.
    Flag,
    /// A nonnegative integer tally, entering the dot product at face value.
    Count,
}

/// One measured metric: a name, its category, its value domain, and the
/// value itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricEntry {
    pub name: String,
    pub category: MetricCategory,
    pub kind: MetricKind,
    pub value: f64,
    /// Optional normalization cap for count metrics, applied only through
    /// [`apply_count_caps`]. Counts are otherwise used raw.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
}

impl MetricEntry {
    pub fn new(
        name: impl Into<String>,
        category: MetricCategory,
        kind: MetricKind,
        value: f64,
    ) -> Self {
        Self {
            name: name.into(),
            category,
            kind,
            value,
            cap: None,
        }
    }

    /// Why this entry's value violates its kind's domain, if it does.
    fn domain_violation(&self) -> Option<String> {
        if !self.value.is_finite() {
            return Some(format!("value must be finite (got {})", self.value));
        }
        match self.kind {
            MetricKind::Fraction => {
                if !(0.0..=1.0).contains(&self.value) {
                    return Some(format!("fraction must lie in [0, 1] (got {})", self.value));
                }
            }
            MetricKind::Flag => {
                if self.value != 0.0 && self.value != 1.0 {
                    return Some(format!("flag must be 0 or 1 (got {})", self.value));
                }
            }
            MetricKind::Count => {
                if self.value < 0.0 || self.value.fract() != 0.0 {
                    return Some(format!(
                        "count must be a nonnegative integer (got {})",
                        self.value
                    ));
                }
            }
        }
        None
    }
}

/// Verdict for a single metric entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCheck {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub reason: Option<String>,
}

/// Per-entry validation verdicts plus dataset-level observations.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<MetricCheck>,
    /// Sum of the fraction entries recognized as true/false positive/negative
    /// shares, when any are present.
    pub confusion_share_sum: Option<f64>,
    /// Dataset-level warnings; they do not fail validation.
    pub flags: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MetricCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const CONFUSION_NAMES: [&str; 4] = [
    "true positive",
    "true negative",
    "false positive",
    "false negative",
];

fn is_confusion_share(entry: &MetricEntry) -> bool {
    let lower = entry.name.to_lowercase();
    entry.kind == MetricKind::Fraction && CONFUSION_NAMES.iter().any(|n| lower.contains(n))
}

/// Check every entry against its kind's domain and flag dataset-level
/// oddities.
///
/// The true/false positive/negative shares are recognized by name; when
/// present, their sum exceeding `1 + 1e-9` is flagged (they share one
/// denominator, so a larger sum means inconsistent inputs).
pub fn validate_metrics(metrics: &[MetricEntry]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut confusion_sum = 0.0;
    let mut confusion_seen = false;

    for (index, entry) in metrics.iter().enumerate() {
        let reason = entry.domain_violation();
        report.checks.push(MetricCheck {
            index,
            name: entry.name.clone(),
            passed: reason.is_none(),
            reason,
        });
        if is_confusion_share(entry) {
            confusion_seen = true;
            confusion_sum += entry.value;
        }
    }

    if confusion_seen {
        report.confusion_share_sum = Some(confusion_sum);
        if confusion_sum > 1.0 + CONFUSION_SUM_TOLERANCE {
            report.flags.push(format!(
                "true/false positive/negative shares sum to {confusion_sum}, exceeding 1 by {:e}",
                confusion_sum - 1.0
            ));
        }
    }
    report
}

/// Importance weights aligned index-for-index with a metric vector.
/// Negative entries penalize their metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Requires at least one nonzero, finite entry.
    pub fn new(weights: Vec<f64>) -> Result<Self, ScoreError> {
        if let Some(pos) = weights.iter().position(|w| !w.is_finite()) {
            return Err(ScoreError::NonFiniteWeight {
                index: pos,
                value: weights[pos],
            });
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(ScoreError::NoNonZeroWeight);
        }
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Warning text when the weights do not sum to 1. Not an error: weight
    /// vectors with penalties legitimately sum below 1.
    pub fn sum_to_one_warning(&self) -> Option<String> {
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            Some(format!("weights sum to {sum}, not 1"))
        } else {
            None
        }
    }
}

/// A named share of the raw score: `value = metric value * weight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub name: String,
    pub value: f64,
}

/// A computed trust score: the raw dot product, its clamp to `[-1, 1]`,
/// the per-entry contributions, and when it was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub timestamp: DateTime<Utc>,
    #[serde(rename = "raw")]
    pub raw_score: f64,
    #[serde(rename = "clamped")]
    pub clamped_score: f64,
    pub contributions: Vec<Contribution>,
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("metric and weight vectors differ in length: {metrics} metrics vs {weights} weights")]
    LengthMismatch { metrics: usize, weights: usize },
    #[error("weight vector needs at least one nonzero entry")]
    NoNonZeroWeight,
    #[error("weights[{index}] must be finite (got {value})")]
    NonFiniteWeight { index: usize, value: f64 },
    #[error("{path}: {reason}")]
    InvalidEntry { path: String, reason: String },
}

/// Errors from reading metric/weight files: I/O and JSON shape problems are
/// kept apart from domain validation so callers can report them differently.
#[derive(Debug, Error)]
pub enum ScoreFileError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] ScoreError),
    #[error("file has no \"{0}\" array")]
    MissingSection(&'static str),
}

/// The literal dot product of metric values and weights.
///
/// Fractions enter as decimals, flags as 0/1, counts at face value.
pub fn raw_score(metrics: &[MetricEntry], weights: &WeightVector) -> Result<f64, ScoreError> {
    if metrics.len() != weights.len() {
        return Err(ScoreError::LengthMismatch {
            metrics: metrics.len(),
            weights: weights.len(),
        });
    }
    Ok(metrics
        .iter()
        .zip(weights.as_slice())
        .map(|(m, s)| m.value * s)
        .sum())
}

/// Clamp a raw score into `[-1, 1]`: `min(1, max(raw, -1))`.
///
/// max/min rather than `f64::clamp`: a NaN raw score must still land inside
/// the range (at -1) instead of propagating.
#[allow(clippy::manual_clamp)]
pub fn clamp_score(raw: f64) -> f64 {
    raw.max(-1.0).min(1.0)
}

/// Compute a [`ScoreRecord`] with an explicit timestamp (deterministic
/// variant of [`trust_score`]).
pub fn trust_score_at(
    metrics: &[MetricEntry],
    weights: &WeightVector,
    timestamp: DateTime<Utc>,
) -> Result<ScoreRecord, ScoreError> {
    let raw = raw_score(metrics, weights)?;
    let contributions = metrics
        .iter()
        .zip(weights.as_slice())
        .map(|(m, s)| Contribution {
            name: m.name.clone(),
            value: m.value * s,
        })
        .collect();
    Ok(ScoreRecord {
        timestamp,
        raw_score: raw,
        clamped_score: clamp_score(raw),
        contributions,
    })
}

/// Compute a [`ScoreRecord`] timestamped now.
pub fn trust_score(metrics: &[MetricEntry], weights: &WeightVector) -> Result<ScoreRecord, ScoreError> {
    trust_score_at(metrics, weights, Utc::now())
}

/// Sum a record's contributions per category. The subtotals add back up to
/// the raw score.
pub fn category_breakdown(
    record: &ScoreRecord,
    metrics: &[MetricEntry],
) -> Result<BTreeMap<MetricCategory, f64>, ScoreError> {
    if record.contributions.len() != metrics.len() {
        return Err(ScoreError::LengthMismatch {
            metrics: metrics.len(),
            weights: record.contributions.len(),
        });
    }
    let mut totals = BTreeMap::new();
    for (entry, contribution) in metrics.iter().zip(&record.contributions) {
        *totals.entry(entry.category).or_insert(0.0) += contribution.value;
    }
    Ok(totals)
}

/// Return a copy of the metrics with capped counts folded down to fractions:
/// a count with cap `c` becomes `min(value / c, 1)`. Entries without a
/// positive cap pass through unchanged. Nothing in the scoring path applies
/// this implicitly.
pub fn apply_count_caps(metrics: &[MetricEntry]) -> Vec<MetricEntry> {
    metrics
        .iter()
        .map(|entry| match (entry.kind, entry.cap) {
            (MetricKind::Count, Some(cap)) if cap > 0.0 => MetricEntry {
                name: entry.name.clone(),
                category: entry.category,
                kind: MetricKind::Fraction,
                value: (entry.value / cap).min(1.0),
                cap: None,
            },
            _ => entry.clone(),
        })
        .collect()
}

#[derive(Deserialize)]
struct ScoreDocument {
    #[serde(default)]
    metrics: Option<Vec<MetricEntry>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

/// Load and validate the `metrics` array of a JSON document. Domain errors
/// carry the positional path of the offending entry (`metrics[4].value`).
pub fn load_metrics_file(path: impl AsRef<Path>) -> Result<Vec<MetricEntry>, ScoreFileError> {
    let text = fs::read_to_string(path)?;
    let doc: ScoreDocument = serde_json::from_str(&text)?;
    let metrics = doc.metrics.ok_or(ScoreFileError::MissingSection("metrics"))?;
    let report = validate_metrics(&metrics);
    if let Some(failure) = report.failures().next() {
        return Err(ScoreError::InvalidEntry {
            path: format!("metrics[{}].value", failure.index),
            reason: failure.reason.clone().unwrap_or_default(),
        }
        .into());
    }
    Ok(metrics)
}

/// Load the `weights` array of a JSON document.
pub fn load_weights_file(path: impl AsRef<Path>) -> Result<WeightVector, ScoreFileError> {
    let text = fs::read_to_string(path)?;
    let doc: ScoreDocument = serde_json::from_str(&text)?;
    let weights = doc.weights.ok_or(ScoreFileError::MissingSection("weights"))?;
    Ok(WeightVector::new(weights)?)
}
