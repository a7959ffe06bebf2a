//! Binary confusion matrices and macro-averaged classification reports.
//!
//! Layout follows the usual Actual x Predicted grid: the actual-negative
//! row holds `tn, fp`, the actual-positive row `fn, tp`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labeling::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("predictions ({predictions}) and truths ({truths}) differ in length")]
    LengthMismatch { predictions: usize, truths: usize },
    #[error("cannot evaluate an empty prediction set")]
    Empty,
    #[error("neutral label at position {0}; evaluation is binary")]
    NonBinary(usize),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("cannot parse confusion spec `{0}` (expected tn=..,fp=..,fn=..,tp=..)")]
    BadSpec(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

impl ConfusionMatrix {
    pub fn new(tn: u64, fp: u64, fn_: u64, tp: u64) -> Self {
        ConfusionMatrix { tn, fp, fn_, tp }
    }

    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }

    pub fn actual_negative(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn actual_positive(&self) -> u64 {
        self.fn_ + self.tp
    }

    pub fn predicted_negative(&self) -> u64 {
        self.tn + self.fn_
    }

    pub fn predicted_positive(&self) -> u64 {
        self.fp + self.tp
    }

    /// The same matrix with the class roles exchanged.
    pub fn swapped(&self) -> Self {
        ConfusionMatrix::new(self.tp, self.fn_, self.fp, self.tn)
    }

    /// Markdown grid with "All" margins.
    pub fn to_markdown(&self, title: &str) -> String {
        format!(
            "| {title} | Predicted Negative | Predicted Positive | All |\n\
             |---|---:|---:|---:|\n\
             | Actual Negative | {} | {} | {} |\n\
             | Actual Positive | {} | {} | {} |\n\
             | All | {} | {} | {} |\n",
            self.tn,
            self.fp,
            self.actual_negative(),
            self.fn_,
            self.tp,
            self.actual_positive(),
            self.predicted_negative(),
            self.predicted_positive(),
            self.total()
        )
    }
}

impl std::str::FromStr for ConfusionMatrix {
    type Err = EvalError;

    /// Parses `tn=211,fp=209,fn=75,tp=579` (any order, all four keys required).
    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = || EvalError::BadSpec(spec.to_string());
        let mut fields: [Option<u64>; 4] = [None; 4];
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let slot = match key.trim() {
                "tn" => 0,
                "fp" => 1,
                "fn" => 2,
                "tp" => 3,
                _ => return Err(bad()),
            };
            if fields[slot].is_some() {
                return Err(bad());
            }
            fields[slot] = Some(value.trim().parse().map_err(|_| bad())?);
        }
        match fields {
            [Some(tn), Some(fp), Some(fn_), Some(tp)] => Ok(ConfusionMatrix::new(tn, fp, fn_, tp)),
            _ => Err(bad()),
        }
    }
}

pub fn confusion(predictions: &[Label], truths: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if predictions.len() != truths.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            truths: truths.len(),
        });
    }
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut m = ConfusionMatrix::default();
    for (i, (&p, &t)) in predictions.iter().zip(truths).enumerate() {
        match (t, p) {
            (Label::Negative, Label::Negative) => m.tn += 1,
            (Label::Negative, Label::Positive) => m.fp += 1,
            (Label::Positive, Label::Negative) => m.fn_ += 1,
            (Label::Positive, Label::Positive) => m.tp += 1,
            _ => return Err(EvalError::NonBinary(i)),
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub negative: ClassMetrics,
    pub positive: ClassMetrics,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(correct: u64, predicted: u64, actual: u64) -> ClassMetrics {
    let precision = ratio(correct, predicted);
    let recall = ratio(correct, actual);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: actual,
    }
}

/// Per-class and macro-averaged metrics. Any 0/0 is taken as 0.
pub fn report(m: &ConfusionMatrix) -> Result<ClassificationReport, EvalError> {
    if m.total() == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let negative = class_metrics(m.tn, m.predicted_negative(), m.actual_negative());
    let positive = class_metrics(m.tp, m.predicted_positive(), m.actual_positive());
    Ok(ClassificationReport {
        negative,
        positive,
        macro_precision: (negative.precision + positive.precision) / 2.0,
        macro_recall: (negative.recall + positive.recall) / 2.0,
        macro_f1: (negative.f1 + positive.f1) / 2.0,
        accuracy: ratio(m.tn + m.tp, m.total()),
    })
}

/// Round half away from zero to two decimals, the precision of published tables.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

impl ClassificationReport {
    /// `[precision, recall, f1, accuracy]`, the column order of the report tables.
    pub fn headline(&self) -> [f64; 4] {
        [self.macro_precision, self.macro_recall, self.macro_f1, self.accuracy]
    }

    pub fn markdown_row(&self, name: &str) -> String {
        let [p, r, f, a] = self.headline();
        format!("| {name} | {p:.2} | {r:.2} | {f:.2} | {a:.2} |")
    }

    pub fn to_json(&self, matrix: &ConfusionMatrix) -> serde_json::Value {
        let [p, r, f, a] = self.headline();
        serde_json::json!({
            "confusion": matrix,
            "metrics": {
                "macro_precision": p,
                "macro_recall": r,
                "macro_f1": f,
                "accuracy": a,
                "rounded": {
                    "macro_precision": round2(p),
                    "macro_recall": round2(r),
                    "macro_f1": round2(f),
                    "accuracy": round2(a),
                },
                "negative": self.negative,
                "positive": self.positive,
            }
        })
    }
}

pub const REPORT_HEADER: &str = "| | Precision | Recall | F1-Score | Accuracy |\n|---|---:|---:|---:|---:|\n";

/// Classifier x metric grid, rows in the given order.
pub fn report_table(rows: &[(String, ClassificationReport)]) -> String {
    let mut out = String::from(REPORT_HEADER);
    for (name, r) in rows {
        out.push_str(&r.markdown_row(name));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedClassifier {
    pub rank: usize,
    pub name: String,
    pub accuracy: f64,
    pub macro_f1: f64,
}

/// Orders classifiers by accuracy, then macro-F1 (both descending), then name.
///
/// Scores are compared at two-decimal precision, which is what the published
/// tables carry; full-precision values are kept in the output.
pub fn compare_reports(reports: &BTreeMap<String, ClassificationReport>) -> Vec<RankedClassifier> {
    let mut entries: Vec<_> = reports.iter().collect();
    entries.sort_by(|(an, a), (bn, b)| {
        round2(b.accuracy)
            .total_cmp(&round2(a.accuracy))
            .then(round2(b.macro_f1).total_cmp(&round2(a.macro_f1)))
            .then(an.cmp(bn))
    });
    entries
        .into_iter()
        .enumerate()
        .map(|(i, (name, r))| RankedClassifier {
            rank: i + 1,
            name: name.clone(),
            accuracy: r.accuracy,
            macro_f1: r.macro_f1,
        })
        .collect()
}

pub fn ranking_table(ranking: &[RankedClassifier]) -> String {
    let mut out = String::from("| Rank | Classifier | Accuracy | Macro F1 |\n|---:|---|---:|---:|\n");
    for r in ranking {
        out.push_str(&format!("| {} | {} | {:.2} | {:.2} |\n", r.rank, r.name, r.accuracy, r.macro_f1));
    }
    out
}
