//! Trust-score history and temporal fluctuation analysis.
//!
//! A healthy trust score drifts gently; wide, abrupt swings are the
//! roller-coaster pattern that drives customers away. This module keeps a
//! timestamp-ordered series of [`ScoreRecord`]s, persists it as JSONL (one
//! record per line), and summarizes the trailing window with a
//! gentle/abrupt verdict keyed to the largest consecutive jump.

use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::score::ScoreRecord;

/// Default number of trailing records summarized by [`ScoreSeries::fluctuation`].
pub const DEFAULT_WINDOW: usize = 8;

/// Default largest consecutive jump tolerated before the verdict turns
/// abrupt. A configuration default, not a calibrated constant.
pub const DEFAULT_ABRUPT_THRESHOLD: f64 = 0.2;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("record timestamp {next} is not after the last timestamp {last}")]
    NonMonotonicTimestamp {
        last: DateTime<Utc>,
        next: DateTime<Utc>,
    },
    #[error("fluctuation window must cover at least 2 records (got {0})")]
    WindowTooSmall(usize),
    #[error("series has {actual} records but the window requires {required}")]
    InsufficientData { required: usize, actual: usize },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("history line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

/// Verdict over a window of scores: the series is abrupt as soon as one
/// consecutive jump exceeds the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Gentle,
    Abrupt,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Gentle => "gentle",
            Verdict::Abrupt => "abrupt",
        })
    }
}

/// Fluctuation statistics over the trailing window of a series.
///
/// `max_abs_delta` looks at consecutive pairs; `range` and `std_dev` look at
/// the window as a whole, so `range >= max_abs_delta` is not guaranteed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FluctuationReport {
    pub window: usize,
    pub max_abs_delta: f64,
    pub range: f64,
    pub std_dev: f64,
    pub verdict: Verdict,
}

/// A timestamp-ordered trust-score history.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreSeries {
    records: Vec<ScoreRecord>,
}

impl ScoreSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build a series from records, enforcing strictly increasing timestamps.
    pub fn from_records(records: Vec<ScoreRecord>) -> Result<Self, SeriesError> {
        let mut series = Self::new();
        for record in records {
            series.push(record)?;
        }
        Ok(series)
    }

    pub fn records(&self) -> &[ScoreRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Append a record; its timestamp must be strictly after the last one.
    pub fn push(&mut self, record: ScoreRecord) -> Result<(), SeriesError> {
        if let Some(last) = self.records.last() {
            if record.timestamp <= last.timestamp {
                return Err(SeriesError::NonMonotonicTimestamp {
                    last: last.timestamp,
                    next: record.timestamp,
                });
            }
        }
        self.records.push(record);
        Ok(())
    }

    /// Read a JSONL history file. Parse failures carry the 1-based line
    /// number.
    pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Self, SeriesError> {
        let text = fs::read_to_string(path)?;
        let mut series = Self::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: ScoreRecord =
                serde_json::from_str(line).map_err(|source| SeriesError::Parse {
                    line: idx + 1,
                    source,
                })?;
            series.push(record)?;
        }
        Ok(series)
    }

    /// Write the whole series as JSONL.
    pub fn save_jsonl(&self, path: impl AsRef<Path>) -> Result<(), SeriesError> {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("score record serializes"));
            out.push('\n');
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Append one record to a history file, creating it if needed. The
    /// existing file is read first so the ordering invariant holds across
    /// processes; the new line is flushed before returning.
    pub fn append_to_file(path: impl AsRef<Path>, record: &ScoreRecord) -> Result<(), SeriesError> {
        let path = path.as_ref();
        let mut series = if path.exists() {
            Self::load_jsonl(path)?
        } else {
            Self::new()
        };
        series.push(record.clone())?;

        let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        serde_json::to_writer(&mut file, record).map_err(std::io::Error::from)?;
        file.write_all(b"\n")?;
        file.flush()?;
        Ok(())
    }

    /// Summarize the trailing `window` clamped scores.
    ///
    /// The verdict is abrupt exactly when the largest consecutive jump
    /// exceeds `abrupt_threshold`.
    pub fn fluctuation(
        &self,
        window: usize,
        abrupt_threshold: f64,
    ) -> Result<FluctuationReport, SeriesError> {
        if window < 2 {
            return Err(SeriesError::WindowTooSmall(window));
        }
        if self.records.len() < window {
            return Err(SeriesError::InsufficientData {
                required: window,
                actual: self.records.len(),
            });
        }
        let scores: Vec<f64> = self.records[self.records.len() - window..]
            .iter()
            .map(|r| r.clamped_score)
            .collect();

        let max_abs_delta = scores
            .windows(2)
            .map(|pair| (pair[1] - pair[0]).abs())
            .fold(0.0f64, f64::max);
        let lowest = scores.iter().copied().fold(f64::INFINITY, f64::min);
        let highest = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = scores.iter().sum::<f64>() / window as f64;
        let variance = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / window as f64;

        let verdict = if max_abs_delta > abrupt_threshold {
            Verdict::Abrupt
        } else {
            Verdict::Gentle
        };
        Ok(FluctuationReport {
            window,
            max_abs_delta,
            range: highest - lowest,
            std_dev: variance.sqrt(),
            verdict,
        })
    }
}
