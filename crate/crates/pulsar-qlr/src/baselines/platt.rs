//! Platt scaling: maps decision scores to probabilities through σ(A·s + B),
//! fit by Newton iteration on the cross-entropy against smoothed targets
//! t₊ = (N₊+1)/(N₊+2) and t₋ = 1/(N₋+2).

use crate::error::{Error, Result};
use crate::qlr::sigmoid;

const GRADIENT_TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy)]
pub struct PlattScaler {
    pub a: f64,
    pub b: f64,
}

impl PlattScaler {
    pub fn probability(&self, score: f64) -> f64 {
        sigmoid(self.a * score + self.b)
    }

    pub fn map(&self, scores: &[f64]) -> Vec<f64> {
        scores.iter().map(|&s| self.probability(s)).collect()
    }
}

fn smoothed_targets(labels: &[u8]) -> Result<Vec<f64>> {
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Data("Platt scaling needs both classes".into()));
    }
    let t_pos = (n_pos as f64 + 1.0) / (n_pos as f64 + 2.0);
    let t_neg = 1.0 / (n_neg as f64 + 2.0);
    Ok(labels
        .iter()
        .map(|&y| if y == 1 { t_pos } else { t_neg })
        .collect())
}

fn loss(scores: &[f64], targets: &[f64], a: f64, b: f64) -> f64 {
    scores
        .iter()
        .zip(targets)
        .map(|(&s, &t)| {
            let f = a * s + b;
            // -t ln p - (1-t) ln(1-p) written stably via log1p
            if f >= 0.0 {
                (1.0 - t) * f + (-f).exp().ln_1p()
            } else {
                -t * f + f.exp().ln_1p()
            }
        })
        .sum()
}

/// Fits (A, B) by damped Newton descent; the objective is convex in (A, B).
pub fn platt_fit(scores: &[f64], labels: &[u8]) -> Result<PlattScaler> {
    if scores.len() != labels.len() {
        return Err(Error::Shape("score/label length mismatch".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Data("non-finite decision score".into()));
    }
    let targets = smoothed_targets(labels)?;

    let n_pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let n_neg = labels.len() as f64 - n_pos;
    let mut a = 0.0;
    let mut b = ((n_pos + 1.0) / (n_neg + 1.0)).ln();

    for _ in 0..MAX_ITERATIONS {
        let mut g_a = 0.0;
        let mut g_b = 0.0;
        let mut h_aa = 1e-12;
        let mut h_ab = 0.0;
        let mut h_bb = 1e-12;
        for (&s, &t) in scores.iter().zip(&targets) {
            let p = sigmoid(a * s + b);
            let r = p - t;
            g_a += r * s;
            g_b += r;
            let w = (p * (1.0 - p)).max(1e-12);
            h_aa += w * s * s;
            h_ab += w * s;
            h_bb += w;
        }
        if g_a.abs().max(g_b.abs()) < GRADIENT_TOLERANCE {
            break;
        }
        let det = h_aa * h_bb - h_ab * h_ab;
        let (mut da, mut db) = if det.abs() > 1e-300 {
            (-(h_bb * g_a - h_ab * g_b) / det, -(h_aa * g_b - h_ab * g_a) / det)
        } else {
            (-g_a, -g_b)
        };

        let current = loss(scores, &targets, a, b);
        let mut step = 1.0;
        for _ in 0..40 {
            if loss(scores, &targets, a + step * da, b + step * db) < current + 1e-15 {
                break;
            }
            step *= 0.5;
        }
        da *= step;
        db *= step;
        a += da;
        b += db;
        if da.abs().max(db.abs()) < 1e-14 {
            break;
        }
    }
    Ok(PlattScaler { a, b })
}
