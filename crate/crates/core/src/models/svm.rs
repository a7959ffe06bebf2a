use serde::{Deserialize, Serialize};

use super::{check_width, Classifier, Dataset, ModelError};
use crate::labeling::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub c: f64,
    /// Cap on solver work, in units of one pair update per training row.
    pub max_epochs: usize,
    /// Stop once the largest KKT violation drops below this.
    pub tolerance: f64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            max_epochs: 100,
            tolerance: 1e-3,
        }
    }
}

/// Linear decision function `w . x + b`; non-negative scores are Positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Best primal objective seen after each epoch, starting from the
    /// all-zero model.
    #[serde(default)]
    pub objective_trace: Vec<f64>,
}

fn sign(label: Label) -> f64 {
    if label == Label::Positive {
        1.0
    } else {
        -1.0
    }
}

type SparseRow = Vec<(usize, f64)>;

fn dot(w: &[f64], x: &[(usize, f64)]) -> f64 {
    x.iter().map(|&(j, v)| w[j] * v).sum()
}

/// `1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))`.
pub fn objective(weights: &[f64], bias: f64, data: &Dataset, c: f64) -> f64 {
    let reg: f64 = 0.5 * weights.iter().map(|w| w * w).sum::<f64>();
    let hinge: f64 = data
        .rows
        .iter()
        .zip(&data.labels)
        .map(|(x, &l)| {
            let score: f64 = x.iter().zip(weights).map(|(&v, w)| v as f64 * w).sum::<f64>() + bias;
            (1.0 - sign(l) * score).max(0.0)
        })
        .sum();
    reg + c * hinge
}

fn sparse_objective(w: &[f64], b: f64, rows: &[SparseRow], y: &[f64], c: f64) -> f64 {
    let reg: f64 = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let hinge: f64 = rows
        .iter()
        .zip(y)
        .map(|(x, yi)| (1.0 - yi * (dot(w, x) + b)).max(0.0))
        .sum();
    reg + c * hinge
}

const TAU: f64 = 1e-12;

/// Dual state for the soft-margin problem with an unregularized bias:
/// minimize `1/2 a'Qa - sum(a)` subject to `0 <= a <= C`, `y'a = 0`.
struct Smo<'a> {
    rows: &'a [SparseRow],
    y: &'a [f64],
    c: f64,
    alpha: Vec<f64>,
    grad: Vec<f64>,
    diag: Vec<f64>,
    w: Vec<f64>,
    scratch: Vec<f64>,
}

impl Smo<'_> {
    /// `K(i, t)` for every row `t`.
    fn kernel_row(&mut self, i: usize) -> Vec<f64> {
        for &(j, v) in &self.rows[i] {
            self.scratch[j] = v;
        }
        let out = self.rows.iter().map(|x| dot(&self.scratch, x)).collect();
        for &(j, _) in &self.rows[i] {
            self.scratch[j] = 0.0;
        }
        out
    }

    fn up(&self, t: usize) -> bool {
        (self.y[t] > 0.0 && self.alpha[t] < self.c) || (self.y[t] < 0.0 && self.alpha[t] > 0.0)
    }

    fn low(&self, t: usize) -> bool {
        (self.y[t] > 0.0 && self.alpha[t] > 0.0) || (self.y[t] < 0.0 && self.alpha[t] < self.c)
    }

    /// Second-order working-set selection. `None` once the KKT gap is
    /// below `eps`.
    fn select(&mut self, eps: f64) -> Option<(usize, usize, Vec<f64>, f64)> {
        let n = self.y.len();
        let mut gmax = f64::NEG_INFINITY;
        let mut i = None;
        for t in 0..n {
            if self.up(t) && -self.y[t] * self.grad[t] > gmax {
                gmax = -self.y[t] * self.grad[t];
                i = Some(t);
            }
        }
        let i = i?;
        let ki = self.kernel_row(i);
        let mut gmin = f64::INFINITY;
        let mut best = f64::INFINITY;
        let mut j = None;
        for t in 0..n {
            if !self.low(t) {
                continue;
            }
            let v = -self.y[t] * self.grad[t];
            gmin = gmin.min(v);
            let b = gmax - v;
            if b > 0.0 {
                let a = (self.diag[i] + self.diag[t] - 2.0 * ki[t]).max(TAU);
                let score = -b * b / a;
                if score < best {
                    best = score;
                    j = Some(t);
                }
            }
        }
        let gap = gmax - gmin;
        if gap < eps {
            return None;
        }
        j.map(|j| (i, j, ki, gap))
    }

    fn update(&mut self, i: usize, j: usize, ki: &[f64]) {
        let (yi, yj, c) = (self.y[i], self.y[j], self.c);
        let qij = yi * yj * ki[j];
        let (old_i, old_j) = (self.alpha[i], self.alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);
        if yi != yj {
            let quad = (self.diag[i] + self.diag[j] + 2.0 * qij).max(TAU);
            let delta = (-self.grad[i] - self.grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let quad = (self.diag[i] + self.diag[j] - 2.0 * qij).max(TAU);
            let delta = (self.grad[i] - self.grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        self.alpha[i] = ai;
        self.alpha[j] = aj;
        let (di, dj) = ((ai - old_i) * yi, (aj - old_j) * yj);
        if di == 0.0 && dj == 0.0 {
            return;
        }
        let kj = self.kernel_row(j);
        for t in 0..self.y.len() {
            self.grad[t] += self.y[t] * (ki[t] * di + kj[t] * dj);
        }
        for &(f, v) in &self.rows[i] {
            self.w[f] += di * v;
        }
        for &(f, v) in &self.rows[j] {
            self.w[f] += dj * v;
        }
    }

    /// Bias from the free support vectors, or the middle of the feasible
    /// interval when there are none.
    fn bias(&self) -> f64 {
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut free, mut sum) = (0usize, 0.0);
        for t in 0..self.y.len() {
            let yg = self.y[t] * self.grad[t];
            if self.alpha[t] >= self.c {
                if self.y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if self.alpha[t] <= 0.0 {
                if self.y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                sum += yg;
            }
        }
        let rho = if free > 0 { sum / free as f64 } else { (ub + lb) / 2.0 };
        -rho
    }
}

/// Soft-margin linear SVM with an unregularized bias, solved in the dual by
/// sequential minimal optimization (two multipliers per step, second-order
/// working-set selection). Deterministic: no randomness is involved.
///
/// After every epoch the primal objective of the current iterate is checked
/// and the best iterate so far is kept, so the recorded trace never
/// increases and the result is never worse than the zero model.
pub fn train_svm(data: &Dataset, config: &SvmConfig) -> Result<SvmModel, ModelError> {
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(ModelError::InvalidC(config.c));
    }
    if data.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let d = data.n_features;
    let n = data.len();
    let positives = data.count(Label::Positive);
    if positives == 0 || positives == n {
        let label = if positives == 0 { Label::Negative } else { Label::Positive };
        return Ok(SvmModel {
            weights: vec![0.0; d],
            bias: sign(label),
            objective_trace: vec![0.0],
        });
    }

    let rows: Vec<SparseRow> = data
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(j, &v)| (j, v as f64))
                .collect()
        })
        .collect();
    let y: Vec<f64> = data.labels.iter().map(|&l| sign(l)).collect();
    let c = config.c;
    let mut smo = Smo {
        rows: &rows,
        y: &y,
        c,
        alpha: vec![0.0; n],
        grad: vec![-1.0; n],
        diag: rows.iter().map(|x| x.iter().map(|(_, v)| v * v).sum()).collect(),
        w: vec![0.0; d],
        scratch: vec![0.0; d],
    };

    let mut best_w = vec![0.0; d];
    let mut best_b = 0.0;
    let mut best = sparse_objective(&best_w, best_b, &rows, &y, c);
    let mut trace = vec![best];
    'epochs: for _ in 0..config.max_epochs {
        let mut converged = false;
        for _ in 0..n {
            match smo.select(config.tolerance) {
                Some((i, j, ki, _)) => smo.update(i, j, &ki),
                None => {
                    converged = true;
                    break;
                }
            }
        }
        let b = smo.bias();
        let f = sparse_objective(&smo.w, b, &rows, &y, c);
        if f < best {
            best = f;
            best_w.clone_from(&smo.w);
            best_b = b;
        }
        trace.push(best);
        if converged {
            break 'epochs;
        }
    }

    Ok(SvmModel {
        weights: best_w,
        bias: best_b,
        objective_trace: trace,
    })
}

impl SvmModel {
    pub fn decision_function(&self, x: &[u32]) -> Result<f64, ModelError> {
        check_width(self.weights.len(), x)?;
        Ok(x.iter().zip(&self.weights).map(|(&v, w)| v as f64 * w).sum::<f64>() + self.bias)
    }
}

impl Classifier for SvmModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn predict(&self, x: &[u32]) -> Result<Label, ModelError> {
        Ok(if self.decision_function(x)? >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        })
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
    fn separable_data() {
        use Label::*;
        let rows = vec![vec![3, 0], vec![2, 0], vec![4, 1], vec![0, 3], vec![1, 4], vec![0, 2]];
        let labels = vec![Positive, Positive, Positive, Negative, Negative, Negative];
        let d = data(rows.clone(), labels.clone());
        let m = train_svm(&d, &SvmConfig::default()).unwrap();
        assert_eq!(m.predict_all(&rows).unwrap(), labels);
        assert!(m.weights[0] > 0.0 && m.weights[1] < 0.0);
        let last = *m.objective_trace.last().unwrap();
        assert!((objective(&m.weights, m.bias, &d, 1.0) - last).abs() < 1e-9);
    }

    #[test]
    fn near_optimum_on_one_dimension() {
        use Label::*;
        // optimum: w = 1, b = -2 (margins at x = 1 and x = 3), objective 0.5
        let d = data(vec![vec![0], vec![1], vec![3], vec![4]], vec![Negative, Negative, Positive, Positive]);
        let m = train_svm(&d, &SvmConfig { c: 10.0, max_epochs: 100, tolerance: 1e-6 }).unwrap();
        let f = objective(&m.weights, m.bias, &d, 10.0);
        assert!((f - 0.5).abs() < 1e-6, "objective {f}");
        assert!((m.weights[0] - 1.0).abs() < 1e-6 && (m.bias + 2.0).abs() < 1e-6);
    }

    #[test]
    fn single_class_and_ties() {
        let m = train_svm(&data(vec![vec![1], vec![2]], vec![Label::Negative; 2]), &SvmConfig::default()).unwrap();
        assert_eq!(m.predict(&[5]).unwrap(), Label::Negative);
        let zero = SvmModel { weights: vec![0.0], bias: 0.0, objective_trace: vec![] };
        assert_eq!(zero.predict(&[3]).unwrap(), Label::Positive);
        assert_eq!(
            train_svm(&data(vec![vec![1]], vec![Label::Positive]), &SvmConfig { c: -1.0, ..Default::default() }),
            Err(ModelError::InvalidC(-1.0))
        );
    }

    proptest! {
        #[test]
        fn objective_never_increases(rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 4..40), bits in prop::collection::vec(any::<bool>(), 40)) {
            let mut labels: Vec<Label> = (0..rows.len()).map(|i| if bits[i] { Label::Positive } else { Label::Negative }).collect();
            labels[0] = Label::Positive;
            labels[1] = Label::Negative;
            let d = data(rows, labels);
            let m = train_svm(&d, &SvmConfig { max_epochs: 30, ..Default::default() }).unwrap();
            for pair in m.objective_trace.windows(2) {
                prop_assert!(pair[1] <= pair[0]);
            }
            prop_assert!(m.objective_trace[0] == d.len() as f64);
            prop_assert_eq!(&m, &train_svm(&d, &SvmConfig { max_epochs: 30, ..Default::default() }).unwrap());
        }
    }
}
