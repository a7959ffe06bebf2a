//! Threshold labeling of compound scores and the binary dataset built from it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cleaning::CleanComment;
use crate::sentiment::SentimentScores;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Neutral,
    Positive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Negative => "negative",
            Label::Neutral => "neutral",
            Label::Positive => "positive",
        }
    }

    /// The other polar class; neutral maps to itself.
    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
            Label::Neutral => Label::Neutral,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "negative" => Ok(Label::Negative),
            "neutral" => Ok(Label::Neutral),
            "positive" => Ok(Label::Positive),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LabelError {
    #[error("no positive or negative comments remain after dropping {neutral} neutral ones")]
    EmptyDataset { neutral: usize },
    #[error("label threshold must be positive, got {0}")]
    InvalidThreshold(f64),
}

/// `compound >= threshold` is positive, `compound <= -threshold` negative,
/// anything strictly between is neutral.
pub fn label(scores: &SentimentScores, threshold: f64) -> Label {
    label_compound(scores.compound, threshold)
}

pub fn label_compound(compound: f64, threshold: f64) -> Label {
    if compound >= threshold {
        Label::Positive
    } else if compound <= -threshold {
        Label::Negative
    } else {
        Label::Neutral
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub compound: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral_dropped: usize,
}

impl LabelCounts {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }
}

/// Positive/negative comments only, in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub items: Vec<LabeledItem>,
    pub counts: LabelCounts,
}

pub fn build_dataset(
    scored: &[(CleanComment, SentimentScores)],
    threshold: f64,
) -> Result<LabeledDataset, LabelError> {
    if !(threshold > 0.0) {
        return Err(LabelError::InvalidThreshold(threshold));
    }
    let mut counts = LabelCounts::default();
    let mut items = Vec::new();
    for (comment, scores) in scored {
        let label = label(scores, threshold);
        match label {
            Label::Neutral => {
                counts.neutral_dropped += 1;
                continue;
            }
            Label::Positive => counts.positive += 1,
            Label::Negative => counts.negative += 1,
        }
        items.push(LabeledItem {
            id: comment.id.clone(),
            text: comment.text.clone(),
            label,
            compound: scores.compound,
        });
    }
    if items.is_empty() {
        return Err(LabelError::EmptyDataset {
            neutral: counts.neutral_dropped,
        });
    }
    Ok(LabeledDataset { items, counts })
}

impl LabeledDataset {
    pub fn labels(&self) -> Vec<Label> {
        self.items.iter().map(|i| i.label).collect()
    }

    /// `id,text,label,compound` with a header row.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["id", "text", "label", "compound"])
            .expect("in-memory write");
        for item in &self.items {
            writer
                .write_record([
                    item.id.as_str(),
                    item.text.as_str(),
                    item.label.as_str(),
                    &item.compound.to_string(),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }
}

/// One row of a corpus-composition summary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummaryRow {
    pub name: String,
    pub positive: usize,
    pub negative: usize,
    pub total: usize,
}

impl CorpusSummaryRow {
    pub fn new(name: impl Into<String>, counts: &LabelCounts) -> Self {
        CorpusSummaryRow {
            name: name.into(),
            positive: counts.positive,
            negative: counts.negative,
            total: counts.total(),
        }
    }
}

pub fn summary_table(rows: &[CorpusSummaryRow]) -> String {
    let mut out = String::from("| Smart Phone | Positive | Negative | Total |\n|---|---:|---:|---:|\n");
    for r in rows {
        out.push_str(&format!("| {} | {} | {} | {} |\n", r.name, r.positive, r.negative, r.total));
    }
    out
}
