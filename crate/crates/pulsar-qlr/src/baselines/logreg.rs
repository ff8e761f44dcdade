//! Classical logistic-regression baseline with balanced class weights,
//! L2 regularization, and a 3-fold cross-validated C grid.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::circuits::N_FEATURES;
use crate::error::{Error, Result};
use crate::metrics::average_precision;
use crate::qlr::sigmoid;

pub const C_GRID: [f64; 3] = [0.1, 1.0, 10.0];
pub const MAX_ITERATIONS: usize = 2000;
const GRADIENT_TOLERANCE: f64 = 1e-6;
/// Full-batch Adam step size; the objective is smooth and convex, so a much
/// larger rate than the stochastic default converges fastest.
const LEARNING_RATE: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct ClassicalLrModel {
    pub w: [f64; N_FEATURES],
    pub b: f64,
    pub c: f64,
}

impl ClassicalLrModel {
    pub fn decision_scores(&self, xs: &[[f64; N_FEATURES]]) -> Vec<f64> {
        xs.iter()
            .map(|x| x.iter().zip(&self.w).map(|(xi, wi)| xi * wi).sum::<f64>() + self.b)
            .collect()
    }

    pub fn predict_proba(&self, xs: &[[f64; N_FEATURES]]) -> Vec<f64> {
        self.decision_scores(xs).into_iter().map(sigmoid).collect()
    }
}

/// Per-class weights κ_c = N / (2 · N_c), inverse to class frequency.
pub fn class_weights(labels: &[u8]) -> Result<(f64, f64)> {
    let n = labels.len() as f64;
    let n_pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let n_neg = n - n_pos;
    if n_pos == 0.0 || n_neg == 0.0 {
        return Err(Error::Data("class weights need both classes".into()));
    }
    Ok((n / (2.0 * n_neg), n / (2.0 * n_pos)))
}

/// Weighted-BCE gradient plus the L2 term ‖w‖²/(2CN); the bias is
/// unpenalized.
fn objective_gradient(
    xs: &[[f64; N_FEATURES]],
    ys: &[u8],
    kappa: (f64, f64),
    c: f64,
    w: &[f64; N_FEATURES],
    b: f64,
) -> ([f64; N_FEATURES], f64) {
    let n = xs.len() as f64;
    let mut grad_w = [0.0; N_FEATURES];
    let mut grad_b = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let score = x.iter().zip(w).map(|(xi, wi)| xi * wi).sum::<f64>() + b;
        let weight = if y == 1 { kappa.1 } else { kappa.0 };
        let r = weight * (sigmoid(score) - f64::from(y)) / n;
        for k in 0..N_FEATURES {
            grad_w[k] += r * x[k];
        }
        grad_b += r;
    }
    for k in 0..N_FEATURES {
        grad_w[k] += w[k] / (c * n);
    }
    (grad_w, grad_b)
}

/// Minimizes the balanced, L2-regularized logistic objective with full-batch
/// Adam, stopping on a small gradient or after [`MAX_ITERATIONS`] steps.
pub fn fit_classical_lr(
    xs: &[[f64; N_FEATURES]],
    ys: &[u8],
    c: f64,
) -> Result<ClassicalLrModel> {
    if xs.len() != ys.len() {
        return Err(Error::Shape("feature/label length mismatch".into()));
    }
    if c <= 0.0 {
        return Err(Error::Config(format!("C must be positive, got {c}")));
    }
    let kappa = class_weights(ys)?;

    let mut w = [0.0; N_FEATURES];
    let mut b = 0.0;
    let mut m = [0.0; N_FEATURES + 1];
    let mut v = [0.0; N_FEATURES + 1];
    let (beta1, beta2, eps): (f64, f64, f64) = (0.9, 0.999, 1e-8);

    for t in 1..=MAX_ITERATIONS {
        let (grad_w, grad_b) = objective_gradient(xs, ys, kappa, c, &w, b);
        let inf_norm = grad_w
            .iter()
            .chain(std::iter::once(&grad_b))
            .fold(0.0f64, |acc, g| acc.max(g.abs()));
        if inf_norm < GRADIENT_TOLERANCE {
            break;
        }
        let bc1 = 1.0 - beta1.powi(t as i32);
        let bc2 = 1.0 - beta2.powi(t as i32);
        for k in 0..=N_FEATURES {
            let g = if k < N_FEATURES { grad_w[k] } else { grad_b };
            m[k] = beta1 * m[k] + (1.0 - beta1) * g;
            v[k] = beta2 * v[k] + (1.0 - beta2) * g * g;
            let step = LEARNING_RATE * (m[k] / bc1) / ((v[k] / bc2).sqrt() + eps);
            if k < N_FEATURES {
                w[k] -= step;
            } else {
                b -= step;
            }
        }
    }
    Ok(ClassicalLrModel { w, b, c })
}

/// Deterministic stratified k-fold assignment: shuffled per class, dealt
/// round-robin.
fn stratified_folds(ys: &[u8], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0usize; ys.len()];
    for class in [0u8, 1u8] {
        let mut idx: Vec<usize> = ys
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == class)
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(&mut rng);
        for (pos, &i) in idx.iter().enumerate() {
            fold[i] = pos % k;
        }
    }
    fold
}

/// 3-fold stratified cross-validation over the C grid, selecting the highest
/// mean average precision with ties broken toward smaller C.
pub fn cv_select_c(xs: &[[f64; N_FEATURES]], ys: &[u8], seed: u64) -> Result<f64> {
    const K: usize = 3;
    if xs.len() < 30 {
        return Err(Error::Data(format!(
            "cross-validation needs at least 30 rows, got {}",
            xs.len()
        )));
    }
    let fold = stratified_folds(ys, K, seed);

    let mut best: Option<(f64, f64)> = None; // (mean AP, C)
    for &c in &C_GRID {
        let mut ap_sum = 0.0;
        for held_out in 0..K {
            let mut train_x = Vec::new();
            let mut train_y = Vec::new();
            let mut test_x = Vec::new();
            let mut test_y = Vec::new();
            for i in 0..xs.len() {
                if fold[i] == held_out {
                    test_x.push(xs[i]);
                    test_y.push(ys[i]);
                } else {
                    train_x.push(xs[i]);
                    train_y.push(ys[i]);
                }
            }
            if test_y.iter().all(|&y| y == 0) || train_y.iter().all(|&y| y == 0) {
                return Err(Error::Data(format!("fold {held_out} lost the positive class")));
            }
            let model = fit_classical_lr(&train_x, &train_y, c)?;
            let scores = model.decision_scores(&test_x);
            ap_sum += average_precision(&scores, &test_y)?;
        }
        let mean_ap = ap_sum / K as f64;
        let better = match best {
            None => true,
            Some((ap, _)) => mean_ap > ap,
        };
        if better {
            best = Some((mean_ap, c));
        }
    }
    Ok(best.expect("grid is non-empty").1)
}

/// Cross-validated C selection followed by a refit on the full subset.
pub fn fit_classical_lr_cv(
    xs: &[[f64; N_FEATURES]],
    ys: &[u8],
    seed: u64,
) -> Result<ClassicalLrModel> {
    let c = cv_select_c(xs, ys, seed)?;
    fit_classical_lr(xs, ys, c)
}
