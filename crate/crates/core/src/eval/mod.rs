//! Caption length statistics and the error-annotation schema used to
//! compare description methods.

mod tokenize;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use tokenize::{split_sentences, tokenize, tokenize_sentence};

use crate::error::{AltTextError, Result};

/// Width, in tokens, of each length histogram bin.
pub const HISTOGRAM_BIN_WIDTH: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub min: usize,
    pub max: usize,
    /// Bin start (a multiple of [`HISTOGRAM_BIN_WIDTH`]) to caption count.
    pub histogram: BTreeMap<usize, usize>,
}

/// Token-length statistics over `corpus`.
pub fn length_summary<S: AsRef<str>>(corpus: &[S]) -> Result<LengthSummary> {
    if corpus.is_empty() {
        return Err(AltTextError::EmptyCorpus);
    }
    let mut lengths: Vec<usize> = corpus.iter().map(|t| tokenize(t.as_ref()).len()).collect();
    lengths.sort_unstable();
    let n = lengths.len();
    let mean = lengths.iter().sum::<usize>() as f64 / n as f64;
    let median = if n % 2 == 1 {
        lengths[n / 2] as f64
    } else {
        (lengths[n / 2 - 1] + lengths[n / 2]) as f64 / 2.0
    };
    let mut histogram = BTreeMap::new();
    for len in &lengths {
        *histogram
            .entry(len / HISTOGRAM_BIN_WIDTH * HISTOGRAM_BIN_WIDTH)
            .or_insert(0) += 1;
    }
    Ok(LengthSummary {
        count: n,
        mean,
        median,
        min: lengths[0],
        max: lengths[n - 1],
        histogram,
    })
}

/// Kinds of description errors, declared in priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorType {
    Value,
    Identity,
    ChartType,
    Axis,
    Label,
    Trend,
    Cutoff,
    MissingDataContext,
    UnnecessaryContext,
    NumberName,
    Repetition,
    Nonsense,
    Deceptive,
}

impl ErrorType {
    pub const ALL: [ErrorType; 13] = [
        ErrorType::Value,
        ErrorType::Identity,
        ErrorType::ChartType,
        ErrorType::Axis,
        ErrorType::Label,
        ErrorType::Trend,
        ErrorType::Cutoff,
        ErrorType::MissingDataContext,
        ErrorType::UnnecessaryContext,
        ErrorType::NumberName,
        ErrorType::Repetition,
        ErrorType::Nonsense,
        ErrorType::Deceptive,
    ];

    /// Errors that make a description factually wrong rather than incomplete.
    pub const FACTUAL: [ErrorType; 8] = [
        ErrorType::Value,
        ErrorType::Identity,
        ErrorType::Axis,
        ErrorType::Trend,
        ErrorType::ChartType,
        ErrorType::Label,
        ErrorType::Deceptive,
        ErrorType::Nonsense,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorType::Value => "value",
            ErrorType::Identity => "identity",
            ErrorType::ChartType => "chart_type",
            ErrorType::Axis => "axis",
            ErrorType::Label => "label",
            ErrorType::Trend => "trend",
            ErrorType::Cutoff => "cutoff",
            ErrorType::MissingDataContext => "missing_data_context",
            ErrorType::UnnecessaryContext => "unnecessary_context",
            ErrorType::NumberName => "number_name",
            ErrorType::Repetition => "repetition",
            ErrorType::Nonsense => "nonsense",
            ErrorType::Deceptive => "deceptive",
        }
    }

    /// Position in the priority order; 0 is the highest priority.
    pub fn priority(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ErrorType::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown error type '{s}'"))
    }
}

/// The single error a description is labeled with: the highest-priority
/// one present.
pub fn assign_primary_error(errors: &[ErrorType]) -> Option<ErrorType> {
    errors.iter().copied().min_by_key(|e| e.priority())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub figure_id: String,
    pub method_id: String,
    #[serde(default)]
    pub errors: BTreeSet<ErrorType>,
}

impl AnnotationRecord {
    pub fn new(figure_id: impl Into<String>, method_id: impl Into<String>, errors: &[ErrorType]) -> Self {
        AnnotationRecord {
            figure_id: figure_id.into(),
            method_id: method_id.into(),
            errors: errors.iter().copied().collect(),
        }
    }

    pub fn correct(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn value_correct(&self) -> bool {
        ErrorType::FACTUAL.iter().all(|e| !self.errors.contains(e))
    }

    pub fn primary_error(&self) -> Option<ErrorType> {
        self.errors.iter().copied().min_by_key(|e| e.priority())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MethodCounts {
    pub records: usize,
    pub correct: usize,
    pub value_correct: usize,
    /// Records per primary error.
    pub primary_errors: BTreeMap<ErrorType, usize>,
    /// Records containing each error, whether or not it is primary.
    pub any_errors: BTreeMap<ErrorType, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnnotationSummary {
    pub methods: BTreeMap<String, MethodCounts>,
}

impl AnnotationSummary {
    /// Markdown table with one row per method and one column per error
    /// type (primary errors).
    pub fn to_markdown(&self) -> String {
        let mut header = vec![
            "method".to_string(),
            "records".into(),
            "correct".into(),
            "value_correct".into(),
        ];
        header.extend(ErrorType::ALL.iter().map(|e| e.to_string()));
        let mut lines = vec![
            format!("| {} |", header.join(" | ")),
            format!("|{}", " --- |".repeat(header.len())),
        ];
        for (method, c) in &self.methods {
            let mut row = vec![
                method.clone(),
                c.records.to_string(),
                c.correct.to_string(),
                c.value_correct.to_string(),
            ];
            row.extend(
                ErrorType::ALL
                    .iter()
                    .map(|e| c.primary_errors.get(e).copied().unwrap_or(0).to_string()),
            );
            lines.push(format!("| {} |", row.join(" | ")));
        }
        lines.join("\n")
    }
}

/// Per-method counts over `records`. Each (figure, method) pair may appear
/// only once.
pub fn summarize_annotations(records: &[AnnotationRecord]) -> Result<AnnotationSummary> {
    let mut seen = HashSet::new();
    let mut summary = AnnotationSummary::default();
    for r in records {
        if !seen.insert((r.figure_id.as_str(), r.method_id.as_str())) {
            return Err(AltTextError::DuplicateRecord {
                figure_id: r.figure_id.clone(),
                method_id: r.method_id.clone(),
            });
        }
        let counts = summary.methods.entry(r.method_id.clone()).or_default();
        counts.records += 1;
        counts.correct += usize::from(r.correct());
        counts.value_correct += usize::from(r.value_correct());
        if let Some(p) = r.primary_error() {
            *counts.primary_errors.entry(p).or_insert(0) += 1;
        }
        for e in &r.errors {
            *counts.any_errors.entry(*e).or_insert(0) += 1;
        }
    }
    Ok(summary)
}

/// Reads a JSON array of annotation records.
pub fn parse_annotations(json: &str) -> std::result::Result<Vec<AnnotationRecord>, serde_json::Error> {
    serde_json::from_str(json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_outranks_trend() {
        assert_eq!(
            assign_primary_error(&[ErrorType::Trend, ErrorType::Value]),
            Some(ErrorType::Value)
        );
        assert_eq!(
            assign_primary_error(&[ErrorType::Deceptive, ErrorType::Cutoff]),
            Some(ErrorType::Cutoff)
        );
        assert_eq!(assign_primary_error(&[]), None);
    }

    #[test]
    fn blank_caption_is_value_correct_only() {
        let r = AnnotationRecord::new("fig", "heuristic", &[ErrorType::MissingDataContext]);
        assert!(!r.correct());
        assert!(r.value_correct());
    }

    #[test]
    fn lengths() {
        let s = length_summary(&["a b", "a b c d"]).unwrap();
        assert_eq!((s.mean, s.min, s.max), (3.0, 2, 4));
        assert!(matches!(length_summary::<&str>(&[]), Err(AltTextError::EmptyCorpus)));
    }

    #[test]
    fn duplicates_rejected() {
        let r = AnnotationRecord::new("f", "m", &[]);
        assert!(matches!(
            summarize_annotations(&[r.clone(), r]),
            Err(AltTextError::DuplicateRecord { .. })
        ));
    }

    #[test]
    fn records_parse_from_json() {
        let recs = parse_annotations(r#"[{"figure_id":"1","method_id":"turbo","errors":["value","trend"]}]"#).unwrap();
        assert_eq!(recs[0].primary_error(), Some(ErrorType::Value));
    }
}
