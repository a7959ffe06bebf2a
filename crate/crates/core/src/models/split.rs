use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, ModelError};
use crate::labeling::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed: 42,
            stratified: false,
        }
    }
}

impl SplitSpec {
    /// `floor(train_fraction * n)`.
    pub fn train_size(&self, n: usize) -> usize {
        // the epsilon keeps products like 0.7 * 10 = 6.9999... from losing a row
        ((self.train_fraction * n as f64) + 1e-9).floor() as usize
    }

    pub fn test_size(&self, n: usize) -> usize {
        n - self.train_size(n)
    }
}

/// Row indices of each partition, in shuffled order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn split(data: &Dataset, spec: &SplitSpec) -> Result<Split, ModelError> {
    split_labels(&data.labels, spec)
}

pub fn split_labels(labels: &[Label], spec: &SplitSpec) -> Result<Split, ModelError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(ModelError::InvalidFraction(spec.train_fraction));
    }
    let n = labels.len();
    let positives = labels.iter().filter(|l| **l == Label::Positive).count();
    if n < 2 || positives == 0 || positives == n {
        return Err(ModelError::DegenerateSplit(format!(
            "need at least two rows covering both classes (have {n} rows, {positives} positive)"
        )));
    }
    let n_train = spec.train_size(n);
    if n_train == 0 || n_train == n {
        return Err(ModelError::DegenerateSplit(format!(
            "fraction {} of {n} rows leaves an empty partition",
            spec.train_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if !spec.stratified {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let test = order.split_off(n_train);
        return Ok(Split { train: order, test });
    }

    // allocate train slots per class by largest remainder so the total is exact
    let classes = [Label::Negative, Label::Positive];
    let members: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| (0..n).filter(|&i| labels[i] == *c).collect())
        .collect();
    let exact: Vec<f64> = members.iter().map(|m| n_train as f64 * m.len() as f64 / n as f64).collect();
    let mut quota: Vec<usize> = exact.iter().map(|q| q.floor() as usize).collect();
    let mut leftover = n_train - quota.iter().sum::<usize>();
    let mut by_remainder: Vec<usize> = (0..classes.len()).collect();
    by_remainder.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(b.cmp(&a)));
    for &c in by_remainder.iter().cycle() {
        if leftover == 0 {
            break;
        }
        if quota[c] < members[c].len() {
            quota[c] += 1;
            leftover -= 1;
        }
    }

    let mut train = Vec::with_capacity(n_train);
    let mut test = Vec::with_capacity(n - n_train);
    for (c, mut idx) in members.into_iter().enumerate() {
        if quota[c] == 0 || quota[c] == idx.len() {
            return Err(ModelError::DegenerateSplit(format!(
                "stratified split leaves class {} absent from a partition",
                classes[c]
            )));
        }
        idx.shuffle(&mut rng);
        let rest = idx.split_off(quota[c]);
        train.extend(idx);
        test.extend(rest);
    }
    train.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(pos: usize, neg: usize) -> Vec<Label> {
        let mut v = vec![Label::Positive; pos];
        v.extend(vec![Label::Negative; neg]);
        v
    }

    #[test]
    fn published_test_sizes() {
        let spec = SplitSpec::default();
        assert_eq!(spec.test_size(5370), 1074);
        assert_eq!(spec.test_size(6059), 1212);
        assert_eq!(spec.test_size(5904), 1181);
        let s = split_labels(&labels(4377, 1527), &spec).unwrap();
        assert_eq!(s.test.len(), 1181);
    }

    #[test]
    fn same_seed_same_partition() {
        let l = labels(30, 20);
        let spec = SplitSpec { seed: 7, ..Default::default() };
        assert_eq!(split_labels(&l, &spec).unwrap(), split_labels(&l, &spec).unwrap());
        let other = SplitSpec { seed: 8, ..Default::default() };
        assert_ne!(split_labels(&l, &spec).unwrap(), split_labels(&l, &other).unwrap());
    }

    #[test]
    fn degenerate() {
        let spec = SplitSpec::default();
        assert!(matches!(split_labels(&labels(5, 0), &spec), Err(ModelError::DegenerateSplit(_))));
        assert!(matches!(split_labels(&labels(1, 0), &spec), Err(ModelError::DegenerateSplit(_))));
        assert_eq!(split_labels(&labels(1, 1), &spec).unwrap().test.len(), 1);
        let bad = SplitSpec { train_fraction: 1.0, ..Default::default() };
        assert!(matches!(split_labels(&labels(3, 3), &bad), Err(ModelError::InvalidFraction(_))));
        let strat = SplitSpec { stratified: true, ..Default::default() };
        assert!(matches!(split_labels(&labels(9, 1), &strat), Err(ModelError::DegenerateSplit(_))));
    }

    #[test]
    fn stratified_ratios() {
        let l = labels(4377, 1527);
        let spec = SplitSpec { stratified: true, ..Default::default() };
        let s = split_labels(&l, &spec).unwrap();
        assert_eq!(s.test.len(), 1181);
        let neg_test = s.test.iter().filter(|&&i| l[i] == Label::Negative).count();
        let expected = 1181.0 * 1527.0 / 5904.0;
        assert!((neg_test as f64 - expected).abs() <= 1.0, "{neg_test} vs {expected}");
    }

    proptest! {
        #[test]
        fn partition_sizes(pos in 1usize..300, neg in 1usize..300, seed in any::<u64>(), stratified in any::<bool>()) {
            let l = labels(pos, neg);
            let spec = SplitSpec { seed, stratified, ..Default::default() };
            match split_labels(&l, &spec) {
                Ok(s) => {
                    let n = pos + neg;
                    prop_assert_eq!(s.train.len(), (n as f64 * 0.8 + 1e-9).floor() as usize);
                    prop_assert_eq!(s.train.len() + s.test.len(), n);
                    let mut all: Vec<_> = s.train.iter().chain(&s.test).copied().collect();
                    all.sort_unstable();
                    prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
                    prop_assert_eq!(&s, &split_labels(&l, &spec).unwrap());
                }
                Err(ModelError::DegenerateSplit(_)) => prop_assert!(stratified),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
