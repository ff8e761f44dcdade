//! Quantum-kernel SVM reference pipeline: IQP fidelity kernel, PSD
//! projection, class-weighted SMO, and Platt-scaled probabilities.
//!
//! Probability calibration is fit on an internal stratified 80/20 holdout of
//! the training subset: a calibration SVM trains on the 80% part, its scores
//! on the held-out 20% fit the Platt parameters, and the final SVM refits on
//! the full training subset. Training time covers the full training-kernel
//! construction plus both fits; prediction time covers the test–train kernel
//! and scoring.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::kernel::{gram_cross, gram_train};
use super::platt::{platt_fit, PlattScaler};
use super::psd::psd_project;
use super::smo::fit_weighted_svm;
use crate::circuits::N_FEATURES;
use crate::error::{Error, Result};

pub const DEFAULT_C: f64 = 1.0;
const CALIBRATION_HOLDOUT: f64 = 0.2;

#[derive(Debug, Clone)]
pub struct QsvmOutcome {
    pub probs: Vec<f64>,
    pub train_seconds: f64,
    pub predict_seconds: f64,
    pub platt: PlattScaler,
    /// Whether the training Gram needed an eigenvalue projection.
    pub projected: bool,
}

fn stratified_indices(
    labels: &[u8],
    holdout_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut fit = Vec::new();
    let mut hold = Vec::new();
    for class in [0u8, 1u8] {
        let mut idx: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == class)
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            return Err(Error::Data("calibration holdout needs both classes".into()));
        }
        idx.shuffle(rng);
        let n_hold = (((idx.len() as f64) * holdout_fraction).round() as usize)
            .clamp(1, idx.len() - 1);
        hold.extend_from_slice(&idx[..n_hold]);
        fit.extend_from_slice(&idx[n_hold..]);
    }
    fit.sort_unstable();
    hold.sort_unstable();
    Ok((fit, hold))
}

pub fn qsvm_fit_predict(
    train_x: &[[f64; N_FEATURES]],
    train_y: &[u8],
    test_x: &[[f64; N_FEATURES]],
    repetitions: usize,
    c: f64,
    seed: u64,
    parallel: bool,
) -> Result<QsvmOutcome> {
    if train_x.len() != train_y.len() {
        return Err(Error::Shape("train feature/label length mismatch".into()));
    }

    let train_start = Instant::now();
    let raw = gram_train(train_x, repetitions, parallel)?;
    let (k_train, projected) = psd_project(&raw)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (fit_idx, hold_idx) = stratified_indices(train_y, CALIBRATION_HOLDOUT, &mut rng)?;
    let fit_y: Vec<u8> = fit_idx.iter().map(|&i| train_y[i]).collect();
    let hold_y: Vec<u8> = hold_idx.iter().map(|&i| train_y[i]).collect();

    let calibration_svm = fit_weighted_svm(&k_train.submatrix(&fit_idx, &fit_idx), &fit_y, c)?;
    let hold_scores =
        calibration_svm.decision_scores(&k_train.submatrix(&hold_idx, &fit_idx))?;
    let platt = platt_fit(&hold_scores, &hold_y)?;

    let final_svm = fit_weighted_svm(&k_train, train_y, c)?;
    let train_seconds = train_start.elapsed().as_secs_f64();

    let predict_start = Instant::now();
    let k_cross = gram_cross(test_x, train_x, repetitions, parallel)?;
    let scores = final_svm.decision_scores(&k_cross)?;
    let probs = platt.map(&scores);
    let predict_seconds = predict_start.elapsed().as_secs_f64();

    Ok(QsvmOutcome { probs, train_seconds, predict_seconds, platt, projected })
}
