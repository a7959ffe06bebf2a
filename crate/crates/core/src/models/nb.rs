use serde::{Deserialize, Serialize};

use super::{check_width, Classifier, Dataset, ModelError};
use crate::labeling::Label;

/// Multinomial Naive Bayes with additive smoothing, stored in log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub alpha: f64,
    /// Classes seen during training, in `Label` order.
    pub classes: Vec<Label>,
    pub class_log_priors: Vec<f64>,
    /// `feature_log_likelihoods[c][j] = log P(term j | class c)`.
    pub feature_log_likelihoods: Vec<Vec<f64>>,
}

pub fn train_nb(data: &Dataset, alpha: f64) -> Result<NbModel, ModelError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ModelError::InvalidAlpha(alpha));
    }
    if data.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let d = data.n_features;
    let n = data.len() as f64;
    let mut classes = Vec::new();
    let mut priors = Vec::new();
    let mut likelihoods = Vec::new();
    for class in [Label::Negative, Label::Positive] {
        let members: Vec<&Vec<u32>> = data
            .rows
            .iter()
            .zip(&data.labels)
            .filter(|(_, l)| **l == class)
            .map(|(r, _)| r)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut counts = vec![0f64; d];
        for row in &members {
            for (c, &x) in counts.iter_mut().zip(row.iter()) {
                *c += x as f64;
            }
        }
        let total: f64 = counts.iter().sum::<f64>() + alpha * d as f64;
        classes.push(class);
        priors.push((members.len() as f64 / n).ln());
        likelihoods.push(counts.iter().map(|c| ((c + alpha) / total).ln()).collect());
    }
    Ok(NbModel {
        alpha,
        classes,
        class_log_priors: priors,
        feature_log_likelihoods: likelihoods,
    })
}

impl NbModel {
    /// Unnormalized log posterior per class.
    pub fn joint_log_likelihood(&self, x: &[u32]) -> Result<Vec<f64>, ModelError> {
        check_width(self.n_features(), x)?;
        Ok(self
            .class_log_priors
            .iter()
            .zip(&self.feature_log_likelihoods)
            .map(|(prior, ll)| prior + x.iter().zip(ll).map(|(&c, l)| c as f64 * l).sum::<f64>())
            .collect())
    }

    /// Posterior probabilities aligned with `classes`.
    pub fn predict_proba(&self, x: &[u32]) -> Result<Vec<f64>, ModelError> {
        let jll = self.joint_log_likelihood(x)?;
        let max = jll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = jll.iter().map(|v| (v - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        Ok(exps.into_iter().map(|e| e / z).collect())
    }
}

impl Classifier for NbModel {
    fn n_features(&self) -> usize {
        self.feature_log_likelihoods.first().map_or(0, Vec::len)
    }

    fn predict(&self, x: &[u32]) -> Result<Label, ModelError> {
        let jll = self.joint_log_likelihood(x)?;
        let mut best = 0;
        for i in 1..jll.len() {
            // classes are ordered Negative < Positive, so >= favors Positive on ties
            if jll[i] >= jll[best] {
                best = i;
            }
        }
        Ok(self.classes[best])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn data(rows: Vec<Vec<u32>>, labels: Vec<Label>) -> Dataset {
        let d = rows[0].len();
        Dataset::new(rows, labels, d).unwrap()
    }

    #[test]
    fn hand_computed() {
        // class counts: pos [3,1], neg [0,2]; alpha 1 -> pos (4/6, 2/6), neg (1/4, 3/4)
        let m = train_nb(
            &data(
                vec![vec![2, 1], vec![1, 0], vec![0, 2]],
                vec![Label::Positive, Label::Positive, Label::Negative],
            ),
            1.0,
        )
        .unwrap();
        assert_eq!(m.classes, vec![Label::Negative, Label::Positive]);
        assert!((m.class_log_priors[1] - (2.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((m.feature_log_likelihoods[1][0] - (4.0f64 / 6.0).ln()).abs() < 1e-12);
        assert!((m.feature_log_likelihoods[0][1] - (3.0f64 / 4.0).ln()).abs() < 1e-12);
        assert_eq!(m.predict(&[1, 0]).unwrap(), Label::Positive);
        assert_eq!(m.predict(&[0, 3]).unwrap(), Label::Negative);
    }

    #[test]
    fn tie_goes_positive() {
        let m = train_nb(
            &data(vec![vec![1, 0], vec![0, 1]], vec![Label::Positive, Label::Negative]),
            1.0,
        )
        .unwrap();
        assert_eq!(m.predict(&[0, 0]).unwrap(), Label::Positive);
        assert_eq!(m.predict(&[1, 1]).unwrap(), Label::Positive);
    }

    #[test]
    fn single_class() {
        let m = train_nb(&data(vec![vec![1], vec![3]], vec![Label::Negative; 2]), 1.0).unwrap();
        assert_eq!(m.predict(&[9]).unwrap(), Label::Negative);
        assert_eq!(m.predict_proba(&[9]).unwrap(), vec![1.0]);
    }

    #[test]
    fn errors() {
        let d = data(vec![vec![1, 2]], vec![Label::Positive]);
        assert_eq!(train_nb(&d, 0.0), Err(ModelError::InvalidAlpha(0.0)));
        let m = train_nb(&d, 1.0).unwrap();
        assert_eq!(
            m.predict(&[1]),
            Err(ModelError::DimensionMismatch { expected: 2, actual: 1 })
        );
    }

    proptest! {
        #[test]
        fn likelihoods_normalize(rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 2..20), alpha in 0.1f64..3.0) {
            let labels: Vec<Label> = (0..rows.len()).map(|i| if i % 2 == 0 { Label::Positive } else { Label::Negative }).collect();
            let m = train_nb(&data(rows.clone(), labels), alpha).unwrap();
            for ll in &m.feature_log_likelihoods {
                let s: f64 = ll.iter().map(|v| v.exp()).sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
            let p: f64 = m.class_log_priors.iter().map(|v| v.exp()).sum();
            prop_assert!((p - 1.0).abs() < 1e-9);
            for r in &rows {
                let proba = m.predict_proba(r).unwrap();
                prop_assert!((proba.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }
}
