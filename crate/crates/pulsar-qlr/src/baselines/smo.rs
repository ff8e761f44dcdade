//! Sequential minimal optimization for the soft-margin kernel SVM dual with
//! per-sample box bounds (class-weighted C).
//!
//! The solver follows the classic two-variable scheme: scan for a KKT
//! violator, pair it with the partner maximizing |E1 − E2| (falling back to
//! deterministic sweeps), solve the pair analytically, and keep an
//! incrementally updated error cache. No shrinking heuristics.

use super::kernel::KernelMatrix;
use super::logreg::class_weights;
use crate::error::{Error, Result};

pub const KKT_TOLERANCE: f64 = 1e-3;
const STEP_EPSILON: f64 = 1e-12;
const MAX_PASSES: usize = 1000;

#[derive(Debug, Clone)]
pub struct SvmDual {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub support: Vec<usize>,
    /// Signed labels, kept so decision scoring needs no external label list.
    pub y_signed: Vec<f64>,
    /// Per-sample box bounds C_i = C · κ_{y_i}.
    pub bounds: Vec<f64>,
}

impl SvmDual {
    /// Decision values for a cross kernel whose columns index the training
    /// rows.
    pub fn decision_scores(&self, k_cross: &KernelMatrix) -> Result<Vec<f64>> {
        if k_cross.cols != self.alpha.len() {
            return Err(Error::Shape(format!(
                "cross kernel has {} columns, expected {}",
                k_cross.cols,
                self.alpha.len()
            )));
        }
        Ok((0..k_cross.rows)
            .map(|i| {
                self.support
                    .iter()
                    .map(|&j| self.alpha[j] * self.y_signed[j] * k_cross.get(i, j))
                    .sum::<f64>()
                    + self.bias
            })
            .collect())
    }

    /// Dual objective Σα − ½ ΣΣ α_i α_j y_i y_j K_ij.
    pub fn objective(&self, k: &KernelMatrix) -> f64 {
        dual_objective(&self.alpha, &self.y_signed, k)
    }
}

pub fn dual_objective(alpha: &[f64], y: &[f64], k: &KernelMatrix) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alpha[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if alpha[j] == 0.0 {
                continue;
            }
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k.get(i, j);
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

struct Solver<'a> {
    k: &'a KernelMatrix,
    y: Vec<f64>,
    alpha: Vec<f64>,
    bounds: Vec<f64>,
    errors: Vec<f64>,
    bias: f64,
}

impl<'a> Solver<'a> {
    fn new(k: &'a KernelMatrix, ys: &[u8], c: f64) -> Result<Self> {
        let (kappa_neg, kappa_pos) = class_weights(ys)?;
        let y: Vec<f64> = ys.iter().map(|&v| if v == 1 { 1.0 } else { -1.0 }).collect();
        let bounds: Vec<f64> = ys
            .iter()
            .map(|&v| c * if v == 1 { kappa_pos } else { kappa_neg })
            .collect();
        // with alpha = 0 and bias = 0, f = 0 so E_i = −y_i
        let errors = y.iter().map(|&yi| -yi).collect();
        Ok(Self { k, y, alpha: vec![0.0; ys.len()], bounds, errors, bias: 0.0 })
    }

    fn violates_kkt(&self, i: usize) -> bool {
        let r = self.errors[i] * self.y[i];
        (r < -KKT_TOLERANCE && self.alpha[i] < self.bounds[i])
            || (r > KKT_TOLERANCE && self.alpha[i] > 0.0)
    }

    fn is_free(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.bounds[i]
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let (c1, c2) = (self.bounds[i1], self.bounds[i2]);
        let s = y1 * y2;

        let (low, high) = if (s - 1.0).abs() < f64::EPSILON {
            ((a1 + a2 - c1).max(0.0), (a1 + a2).min(c2))
        } else {
            ((a2 - a1).max(0.0), (c1 + a2 - a1).min(c2))
        };
        if high - low < STEP_EPSILON {
            return false;
        }

        let k11 = self.k.get(i1, i1);
        let k12 = self.k.get(i1, i2);
        let k22 = self.k.get(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;

        let a2_new = if eta > STEP_EPSILON {
            (a2 + y2 * (e1 - e2) / eta).clamp(low, high)
        } else {
            // flat direction: compare the objective at both clip ends
            let f1 = y1 * (e1 + self.bias) - a1 * k11 - s * a2 * k12;
            let f2 = y2 * (e2 + self.bias) - s * a1 * k12 - a2 * k22;
            let l1 = a1 + s * (a2 - low);
            let h1 = a1 + s * (a2 - high);
            let obj_low = l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 + 0.5 * low * low * k22
                + s * low * l1 * k12;
            let obj_high = h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 + 0.5 * high * high * k22
                + s * high * h1 * k12;
            if obj_low < obj_high - STEP_EPSILON {
                low
            } else if obj_high < obj_low - STEP_EPSILON {
                high
            } else {
                return false;
            }
        };
        if (a2_new - a2).abs() < STEP_EPSILON * (a2_new + a2 + STEP_EPSILON) {
            return false;
        }
        let a1_new = a1 + s * (a2 - a2_new);

        let b1 = self.bias - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12;
        let b2 = self.bias - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22;
        let new_bias = if a1_new > 0.0 && a1_new < c1 {
            b1
        } else if a2_new > 0.0 && a2_new < c2 {
            b2
        } else {
            (b1 + b2) / 2.0
        };

        let d1 = y1 * (a1_new - a1);
        let d2 = y2 * (a2_new - a2);
        let db = new_bias - self.bias;
        for kk in 0..self.alpha.len() {
            self.errors[kk] += d1 * self.k.get(i1, kk) + d2 * self.k.get(i2, kk) + db;
        }
        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        self.bias = new_bias;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        if !self.violates_kkt(i2) {
            return false;
        }
        // second-choice heuristic: free multiplier maximizing |E1 − E2|
        let mut best: Option<(f64, usize)> = None;
        for i1 in 0..self.alpha.len() {
            if self.is_free(i1) {
                let gap = (self.errors[i1] - self.errors[i2]).abs();
                if best.map_or(true, |(g, _)| gap > g) {
                    best = Some((gap, i1));
                }
            }
        }
        if let Some((_, i1)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.alpha.len() {
            if self.is_free(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.alpha.len() {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn solve(&mut self) -> Result<()> {
        let n = self.alpha.len();
        let mut examine_all = true;
        for _ in 0..MAX_PASSES {
            let mut changed = 0usize;
            if examine_all {
                for i in 0..n {
                    changed += usize::from(self.examine(i));
                }
            } else {
                for i in 0..n {
                    if self.is_free(i) {
                        changed += usize::from(self.examine(i));
                    }
                }
            }
            if examine_all {
                if changed == 0 {
                    return Ok(());
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
        }
        // pass cap reached; the KKT check below decides whether that matters
        Ok(())
    }
}

/// Solves the weighted soft-margin dual on a PSD-projected training Gram.
/// The final bias is the average over unbounded support vectors.
pub fn fit_weighted_svm(k: &KernelMatrix, ys: &[u8], c: f64) -> Result<SvmDual> {
    if !k.is_square() {
        return Err(Error::Shape("training kernel must be square".into()));
    }
    if k.rows != ys.len() {
        return Err(Error::Shape(format!(
            "kernel is {}x{} but there are {} labels",
            k.rows,
            k.cols,
            ys.len()
        )));
    }
    if c <= 0.0 {
        return Err(Error::Config(format!("C must be positive, got {c}")));
    }
    let mut solver = Solver::new(k, ys, c)?;
    solver.solve()?;

    let support: Vec<usize> = (0..solver.alpha.len())
        .filter(|&i| solver.alpha[i] > 0.0)
        .collect();
    if support.is_empty() {
        return Err(Error::Numeric("SVM ended with no support vectors".into()));
    }

    let margin = 1e-8;
    let free: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&i| {
            solver.alpha[i] > margin && solver.alpha[i] < solver.bounds[i] - margin
        })
        .collect();
    let bias = if free.is_empty() {
        solver.bias
    } else {
        free.iter()
            .map(|&i| {
                let f_no_bias: f64 = support
                    .iter()
                    .map(|&j| solver.alpha[j] * solver.y[j] * k.get(i, j))
                    .sum();
                solver.y[i] - f_no_bias
            })
            .sum::<f64>()
            / free.len() as f64
    };

    Ok(SvmDual {
        alpha: solver.alpha,
        bias,
        support,
        y_signed: solver.y,
        bounds: solver.bounds,
    })
}

/// Largest KKT violation of a dual solution; zero means exact optimality.
pub fn max_kkt_violation(dual: &SvmDual, k: &KernelMatrix) -> f64 {
    let n = dual.alpha.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let f: f64 = (0..n)
            .map(|j| dual.alpha[j] * dual.y_signed[j] * k.get(i, j))
            .sum::<f64>()
            + dual.bias;
        let margin = dual.y_signed[i] * f;
        let a = dual.alpha[i];
        let violation = if a <= 1e-8 {
            (1.0 - margin).max(0.0)
        } else if a >= dual.bounds[i] - 1e-8 {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(violation);
    }
    worst
}
