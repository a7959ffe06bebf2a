//! Train/test splitting and the three classifiers (multinomial Naive Bayes,
//! Gini decision tree, linear soft-margin SVM) behind one predict contract.
//!
//! Every model breaks ties toward [`Label::Positive`].

mod nb;
mod split;
mod svm;
mod tree;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labeling::Label;

pub use nb::{train_nb, NbModel};
pub use split::{split, split_labels, Split, SplitSpec};
pub use svm::{objective as svm_objective, train_svm, SvmConfig, SvmModel};
pub use tree::{gini, train_dt, DtConfig, DtModel, TreeNode};

pub const ENVELOPE_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("smoothing alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("regularization C must be positive, got {0}")]
    InvalidC(f64),
    #[error("train fraction must be in (0,1), got {0}")]
    InvalidFraction(f64),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("cannot train on an empty dataset")]
    EmptyTrainingSet,
    #[error("training labels must be positive or negative (found neutral at {0})")]
    NonBinaryLabel(usize),
    #[error("vector has width {actual}, model expects {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("rows and labels differ in length ({rows} vs {labels})")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("model envelope: {0}")]
    Envelope(String),
}

/// Count vectors with their labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub rows: Vec<Vec<u32>>,
    pub labels: Vec<Label>,
    pub n_features: usize,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<u32>>, labels: Vec<Label>, n_features: usize) -> Result<Self, ModelError> {
        if rows.len() != labels.len() {
            return Err(ModelError::LengthMismatch {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        if let Some(i) = labels.iter().position(|l| *l == Label::Neutral) {
            return Err(ModelError::NonBinaryLabel(i));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n_features) {
            return Err(ModelError::DimensionMismatch {
                expected: n_features,
                actual: row.len(),
            });
        }
        Ok(Dataset { rows, labels, n_features })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            n_features: self.n_features,
        }
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }
}

pub(crate) fn check_width(expected: usize, x: &[u32]) -> Result<(), ModelError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            expected,
            actual: x.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Nb,
    Dt,
    Svm,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Nb, ClassifierKind::Dt, ClassifierKind::Svm];

    /// Short id used in file names and flags.
    pub fn id(self) -> &'static str {
        match self {
            ClassifierKind::Nb => "nb",
            ClassifierKind::Dt => "dt",
            ClassifierKind::Svm => "svm",
        }
    }

    /// Row label used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::Nb => "NB",
            ClassifierKind::Dt => "DT",
            ClassifierKind::Svm => "SVM",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nb" => Ok(ClassifierKind::Nb),
            "dt" => Ok(ClassifierKind::Dt),
            "svm" => Ok(ClassifierKind::Svm),
            other => Err(format!("unknown classifier `{other}` (expected nb, dt or svm)")),
        }
    }
}

/// Anything that maps a count vector to a polar label.
pub trait Classifier {
    fn n_features(&self) -> usize;
    fn predict(&self, x: &[u32]) -> Result<Label, ModelError>;

    fn predict_all(&self, rows: &[Vec<u32>]) -> Result<Vec<Label>, ModelError> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model_type", content = "params", rename_all = "lowercase")]
pub enum Model {
    Nb(NbModel),
    Dt(DtModel),
    Svm(SvmModel),
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::Nb(_) => ClassifierKind::Nb,
            Model::Dt(_) => ClassifierKind::Dt,
            Model::Svm(_) => ClassifierKind::Svm,
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Model::Nb(m) => m,
            Model::Dt(m) => m,
            Model::Svm(m) => m,
        }
    }
}

impl Classifier for Model {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }

    fn predict(&self, x: &[u32]) -> Result<Label, ModelError> {
        self.inner().predict(x)
    }
}

pub fn predict(model: &dyn Classifier, x: &[u32]) -> Result<Label, ModelError> {
    model.predict(x)
}

/// Versioned on-disk form: `{ "model_type", "vocabulary_hash", "params", "format_version" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEnvelope {
    pub format_version: u32,
    pub vocabulary_hash: String,
    #[serde(flatten)]
    pub model: Model,
}

impl ModelEnvelope {
    pub fn new(model: Model, vocabulary_hash: impl Into<String>) -> Self {
        ModelEnvelope {
            format_version: ENVELOPE_VERSION,
            vocabulary_hash: vocabulary_hash.into(),
            model,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models always serialize")
    }

    pub fn from_json(json: &str) -> Result<Self, ModelError> {
        let env: ModelEnvelope = serde_json::from_str(json).map_err(|e| ModelError::Envelope(e.to_string()))?;
        if env.format_version != ENVELOPE_VERSION {
            return Err(ModelError::Envelope(format!(
                "unsupported format_version {} (expected {ENVELOPE_VERSION})",
                env.format_version
            )));
        }
        Ok(env)
    }
}

/// Hyperparameters for all three classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub nb_alpha: f64,
    pub dt: DtConfig,
    pub svm: SvmConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            nb_alpha: 1.0,
            dt: DtConfig::default(),
            svm: SvmConfig::default(),
        }
    }
}

pub fn train(kind: ClassifierKind, data: &Dataset, config: &TrainConfig) -> Result<Model, ModelError> {
    if data.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    Ok(match kind {
        ClassifierKind::Nb => Model::Nb(train_nb(data, config.nb_alpha)?),
        ClassifierKind::Dt => Model::Dt(train_dt(data, &config.dt)),
        ClassifierKind::Svm => Model::Svm(train_svm(data, &config.svm)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_round_trip() {
        let data = Dataset::new(vec![vec![2, 0], vec![0, 1]], vec![Label::Positive, Label::Negative], 2).unwrap();
        for kind in ClassifierKind::ALL {
            let model = train(kind, &data, &TrainConfig::default()).unwrap();
            let env = ModelEnvelope::new(model.clone(), "abc");
            let json = env.to_json();
            assert!(json.contains(&format!("\"model_type\": \"{}\"", kind.id())));
            let back = ModelEnvelope::from_json(&json).unwrap();
            assert_eq!(back.model, model);
            assert_eq!(back.vocabulary_hash, "abc");
        }
    }

    #[test]
    fn bad_envelope_version() {
        let json = r#"{"format_version":9,"vocabulary_hash":"x","model_type":"svm","params":{"weights":[],"bias":0.0}}"#;
        assert!(matches!(ModelEnvelope::from_json(json), Err(ModelError::Envelope(_))));
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new(vec![vec![1]], vec![], 1),
            Err(ModelError::LengthMismatch { .. })
        ));
        assert!(matches!(
            Dataset::new(vec![vec![1]], vec![Label::Neutral], 1),
            Err(ModelError::NonBinaryLabel(0))
        ));
        assert!(matches!(
            Dataset::new(vec![vec![1, 2]], vec![Label::Positive], 1),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }
}
