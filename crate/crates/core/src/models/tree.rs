use serde::{Deserialize, Serialize};

use super::{check_width, Classifier, Dataset, ModelError};
use crate::labeling::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtConfig {
    /// `None` grows until leaves are pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for DtConfig {
    fn default() -> Self {
        DtConfig {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

/// Arena node. Internal nodes send `x[feature] <= threshold` left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: u32,
        left: usize,
        right: usize,
        impurity: f64,
        samples: usize,
    },
    Leaf {
        label: Label,
        negative: usize,
        positive: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtModel {
    pub n_features: usize,
    /// Root is node 0.
    pub nodes: Vec<TreeNode>,
}

/// Gini impurity of a two-class node.
pub fn gini(negative: usize, positive: usize) -> f64 {
    let n = (negative + positive) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = positive as f64 / n;
    let q = negative as f64 / n;
    1.0 - p * p - q * q
}

fn majority(negative: usize, positive: usize) -> Label {
    if positive >= negative {
        Label::Positive
    } else {
        Label::Negative
    }
}

struct Candidate {
    feature: usize,
    threshold: u32,
    impurity: f64,
}

struct Builder<'a> {
    data: &'a Dataset,
    config: &'a DtConfig,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> (usize, usize) {
        let pos = idx.iter().filter(|&&i| self.data.labels[i] == Label::Positive).count();
        (idx.len() - pos, pos)
    }

    /// Lowest weighted child impurity over all features and thresholds.
    /// Ties keep the earlier feature, then the lower threshold.
    fn best_split(&self, idx: &[usize]) -> Option<Candidate> {
        let (neg_total, pos_total) = self.counts(idx);
        let n = idx.len() as f64;
        let mut best: Option<Candidate> = None;
        let mut column: Vec<(u32, bool)> = Vec::with_capacity(idx.len());
        for feature in 0..self.data.n_features {
            column.clear();
            column.extend(
                idx.iter()
                    .map(|&i| (self.data.rows[i][feature], self.data.labels[i] == Label::Positive)),
            );
            column.sort_unstable();
            if column[0].0 == column[column.len() - 1].0 {
                continue;
            }
            let (mut left_neg, mut left_pos) = (0usize, 0usize);
            for k in 0..column.len() - 1 {
                if column[k].1 {
                    left_pos += 1;
                } else {
                    left_neg += 1;
                }
                if column[k].0 == column[k + 1].0 {
                    continue;
                }
                let (right_neg, right_pos) = (neg_total - left_neg, pos_total - left_pos);
                let nl = (left_neg + left_pos) as f64;
                let nr = (right_neg + right_pos) as f64;
                let impurity = (nl * gini(left_neg, left_pos) + nr * gini(right_neg, right_pos)) / n;
                if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                    best = Some(Candidate {
                        feature,
                        // floor of the midpoint; equivalent to a real midpoint for integer counts
                        threshold: column[k].0 + (column[k + 1].0 - column[k].0) / 2,
                        impurity,
                    });
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let (neg, pos) = self.counts(&idx);
        let at_limit = self.config.max_depth.is_some_and(|d| depth >= d);
        let split = if neg == 0 || pos == 0 || at_limit || idx.len() < self.config.min_samples_split {
            None
        } else {
            self.best_split(&idx)
        };
        let Some(split) = split else {
            self.nodes.push(TreeNode::Leaf {
                label: majority(neg, pos),
                negative: neg,
                positive: pos,
            });
            return self.nodes.len() - 1;
        };
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            label: majority(neg, pos),
            negative: neg,
            positive: pos,
        });
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| self.data.rows[i][split.feature] <= split.threshold);
        let left = self.grow(left_idx, depth + 1);
        let right = self.grow(right_idx, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
            impurity: gini(neg, pos),
            samples: idx.len(),
        };
        id
    }
}

/// Greedy CART-style tree on Gini impurity.
///
/// A node is split whenever some threshold separates its rows, even if the
/// best split leaves weighted impurity unchanged; otherwise conflict-free
/// data like XOR could not be fit exactly. Leaf ties go to `Positive`.
pub fn train_dt(data: &Dataset, config: &DtConfig) -> DtModel {
    let mut builder = Builder {
        data,
        config,
        nodes: Vec::new(),
    };
    if !data.is_empty() {
        builder.grow((0..data.len()).collect(), 0);
    } else {
        builder.nodes.push(TreeNode::Leaf {
            label: Label::Positive,
            negative: 0,
            positive: 0,
        });
    }
    DtModel {
        n_features: data.n_features,
        nodes: builder.nodes,
    }
}

impl DtModel {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

impl Classifier for DtModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict(&self, x: &[u32]) -> Result<Label, ModelError> {
        check_width(self.n_features, x)?;
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { label, .. } => return Ok(*label),
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}
