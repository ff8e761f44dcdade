//! Discrimination, operating-point, and calibration metrics for imbalanced
//! binary classification.
//!
//! Conventions fixed here for reproducibility: a sample is predicted positive
//! at p ≥ threshold; calibration bins are equal-width with half-open
//! intervals and a closed last bin; degenerate 0/0 ratios resolve to the
//! listed fallbacks and raise a flag instead of an error.

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone)]
pub struct ThresholdMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fnr: f64,
    pub fpr: f64,
    pub degenerate: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct RecallAtFpr {
    pub recall: f64,
    pub threshold: f64,
    pub precision: f64,
    pub fnr: f64,
    pub degenerate: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityBin {
    /// 1-based bin index over [0, 1] split into M equal widths.
    pub bin: usize,
    pub count: usize,
    /// Mean predicted probability in the bin.
    pub conf: f64,
    /// Empirical positive fraction in the bin.
    pub freq: f64,
}

#[derive(Debug, Clone)]
pub struct MurphyTerms {
    pub reliability: f64,
    pub resolution: f64,
    pub uncertainty: f64,
    /// Brier score of the bin-averaged forecast; equals
    /// reliability − resolution + uncertainty up to rounding.
    pub binned_brier: f64,
    /// Within-bin forecast variance, non-negative by construction. The exact
    /// relation is raw Brier = binned Brier + residual − 2 × within-bin
    /// forecast/label covariance; the covariance term is tiny for narrow
    /// bins.
    pub residual: f64,
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("length mismatch: {a} vs {b}")));
    }
    Ok(())
}

pub fn confusion_counts(probs: &[f64], labels: &[u8], threshold: f64) -> Result<ConfusionCounts> {
    check_lengths(probs.len(), labels.len())?;
    let mut c = ConfusionCounts { tp: 0, fp: 0, tn: 0, fn_: 0 };
    for (&p, &y) in probs.iter().zip(labels) {
        let predicted = p >= threshold;
        match (predicted, y == 1) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

pub fn threshold_metrics(c: &ConfusionCounts) -> ThresholdMetrics {
    let mut degenerate = Vec::new();
    let precision = if c.tp + c.fp == 0 {
        degenerate.push("no_positive_predictions");
        0.0
    } else {
        c.tp as f64 / (c.tp + c.fp) as f64
    };
    let (recall, fnr) = if c.tp + c.fn_ == 0 {
        degenerate.push("no_positive_labels");
        (0.0, 1.0)
    } else {
        (
            c.tp as f64 / (c.tp + c.fn_) as f64,
            c.fn_ as f64 / (c.tp + c.fn_) as f64,
        )
    };
    let fpr = if c.fp + c.tn == 0 {
        degenerate.push("no_negative_labels");
        0.0
    } else {
        c.fp as f64 / (c.fp + c.tn) as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ThresholdMetrics { precision, recall, f1, fnr, fpr, degenerate }
}

fn class_counts(labels: &[u8]) -> (usize, usize) {
    let pos = labels.iter().filter(|&&y| y == 1).count();
    (pos, labels.len() - pos)
}

/// Mann–Whitney ROC-AUC: concordant (positive, negative) score pairs with
/// ties counting one half, via average ranks.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    check_lengths(scores.len(), labels.len())?;
    let (n_pos, n_neg) = class_counts(labels);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Data("ROC-AUC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // average 1-based rank over the tie group [i, j]
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let n_pos_f = n_pos as f64;
    Ok((rank_sum_pos - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}

/// Average precision: Σ_n (R_n − R_{n−1}) · P_n over descending thresholds,
/// with equal scores grouped into one step and no interpolation.
pub fn average_precision(scores: &[f64], labels: &[u8]) -> Result<f64> {
    check_lengths(scores.len(), labels.len())?;
    let (n_pos, _) = class_counts(labels);
    if n_pos == 0 {
        return Err(Error::Data("average precision needs at least one positive".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut ap = 0.0;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut prev_recall = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        let recall = tp as f64 / n_pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j + 1;
    }
    Ok(ap)
}

/// Maximal recall subject to FPR ≤ alpha, scanning every unique score plus a
/// sentinel above the maximum (predict nothing positive, always feasible).
/// Ties prefer lower FPR, then the higher threshold.
pub fn recall_at_fpr(scores: &[f64], labels: &[u8], alpha: f64) -> Result<RecallAtFpr> {
    check_lengths(scores.len(), labels.len())?;
    let (n_pos, n_neg) = class_counts(labels);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Data("recall at fixed FPR needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    // sentinel: threshold above every score
    let mut best = (0.0f64, 0.0f64, f64::INFINITY, 0usize, 0usize); // recall, fpr, threshold, tp, fp
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == threshold {
            j += 1;
        }
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        let fpr = fp as f64 / n_neg as f64;
        let recall = tp as f64 / n_pos as f64;
        if fpr <= alpha {
            let better = recall > best.0
                || (recall == best.0 && fpr < best.1)
                || (recall == best.0 && fpr == best.1 && threshold > best.2);
            if better {
                best = (recall, fpr, threshold, tp, fp);
            }
        }
        i = j + 1;
    }

    let (recall, _fpr, threshold, tp, fp) = best;
    let mut degenerate = Vec::new();
    let precision = if tp + fp == 0 {
        degenerate.push("no_positive_predictions");
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    Ok(RecallAtFpr {
        recall,
        threshold,
        precision,
        fnr: 1.0 - recall,
        degenerate,
    })
}

/// Mean squared error of probabilistic predictions.
pub fn brier(probs: &[f64], labels: &[u8]) -> Result<f64> {
    check_lengths(probs.len(), labels.len())?;
    if probs.is_empty() {
        return Err(Error::Data("empty input".into()));
    }
    let sum: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let d = p - f64::from(y);
            d * d
        })
        .sum();
    Ok(sum / probs.len() as f64)
}

fn bin_index(p: f64, bins: usize) -> usize {
    // [(m−1)/M, m/M) with the last bin closed at 1.0
    ((p * bins as f64).floor() as usize).min(bins - 1)
}

/// Occupied equal-width bins only, in bin order.
pub fn reliability_curve(probs: &[f64], labels: &[u8], bins: usize) -> Result<Vec<ReliabilityBin>> {
    check_lengths(probs.len(), labels.len())?;
    let mut count = vec![0usize; bins];
    let mut sum_p = vec![0.0f64; bins];
    let mut sum_y = vec![0.0f64; bins];
    for (&p, &y) in probs.iter().zip(labels) {
        let m = bin_index(p, bins);
        count[m] += 1;
        sum_p[m] += p;
        sum_y[m] += f64::from(y);
    }
    Ok((0..bins)
        .filter(|&m| count[m] > 0)
        .map(|m| ReliabilityBin {
            bin: m + 1,
            count: count[m],
            conf: sum_p[m] / count[m] as f64,
            freq: sum_y[m] / count[m] as f64,
        })
        .collect())
}

/// Expected calibration error over occupied bins.
pub fn ece(probs: &[f64], labels: &[u8], bins: usize) -> Result<f64> {
    let curve = reliability_curve(probs, labels, bins)?;
    let n = probs.len() as f64;
    Ok(curve
        .iter()
        .map(|b| (b.count as f64 / n) * (b.freq - b.conf).abs())
        .sum())
}

/// Brier decomposition over probability bins: reliability − resolution +
/// uncertainty reproduces the Brier score of the bin-averaged forecast, and
/// the raw Brier exceeds it by the non-negative within-bin variance.
pub fn murphy_decomposition(probs: &[f64], labels: &[u8], bins: usize) -> Result<MurphyTerms> {
    check_lengths(probs.len(), labels.len())?;
    if probs.is_empty() {
        return Err(Error::Data("empty input".into()));
    }
    let curve = reliability_curve(probs, labels, bins)?;
    let n = probs.len() as f64;
    let base_rate = labels.iter().map(|&y| f64::from(y)).sum::<f64>() / n;

    let mut reliability = 0.0;
    let mut resolution = 0.0;
    for b in &curve {
        let weight = b.count as f64 / n;
        reliability += weight * (b.conf - b.freq) * (b.conf - b.freq);
        resolution += weight * (b.freq - base_rate) * (b.freq - base_rate);
    }
    let uncertainty = base_rate * (1.0 - base_rate);

    // independent route: score the bin-averaged forecast directly
    let mut binned_brier = 0.0;
    let mut residual = 0.0;
    for (&p, &y) in probs.iter().zip(labels) {
        let m = bin_index(p, bins);
        let conf = curve
            .iter()
            .find(|b| b.bin == m + 1)
            .expect("sample's bin is occupied")
            .conf;
        let d = conf - f64::from(y);
        binned_brier += d * d / n;
        residual += (p - conf) * (p - conf) / n;
    }

    Ok(MurphyTerms { reliability, resolution, uncertainty, binned_brier, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn confusion_examples() {
        let c = confusion_counts(&[0.9, 0.1, 0.8, 0.2], &[1, 0, 1, 0], 0.5).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 2, fp: 0, tn: 2, fn_: 0 });

        let c = confusion_counts(&[0.9, 0.1], &[1, 0], 0.0).unwrap();
        assert_eq!((c.tn, c.fn_), (0, 0));

        let c = confusion_counts(&[0.9, 0.4, 0.6, 0.1], &[1, 1, 0, 0], 0.5).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 1, fn_: 1, fp: 1, tn: 1 });
    }

    #[test]
    fn threshold_metric_examples() {
        let m = threshold_metrics(&ConfusionCounts { tp: 1, fp: 1, fn_: 1, tn: 1 });
        assert_abs_diff_eq!(m.precision, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.recall, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.f1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.fnr, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.fpr, 0.5, epsilon = 1e-15);
        assert!(m.degenerate.is_empty());

        let m = threshold_metrics(&ConfusionCounts { tp: 3, fp: 0, fn_: 0, tn: 5 });
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        assert_eq!((m.fnr, m.fpr), (0.0, 0.0));

        let m = threshold_metrics(&ConfusionCounts { tp: 0, fp: 0, fn_: 2, tn: 5 });
        assert_eq!(m.precision, 0.0);
        assert!(m.degenerate.contains(&"no_positive_predictions"));
    }

    #[test]
    fn roc_auc_examples() {
        let auc = roc_auc(&[0.9, 0.8, 0.3, 0.1], &[1, 1, 0, 0]).unwrap();
        assert_abs_diff_eq!(auc, 1.0, epsilon = 1e-15);

        let auc = roc_auc(&[0.5, 0.5, 0.5, 0.5], &[1, 0, 1, 0]).unwrap();
        assert_abs_diff_eq!(auc, 0.5, epsilon = 1e-15);

        // pos = {0.9, 0.7}, neg = {0.8, 0.6}: 3 of 4 pairs concordant
        let auc = roc_auc(&[0.9, 0.7, 0.8, 0.6], &[1, 1, 0, 0]).unwrap();
        assert_abs_diff_eq!(auc, 0.75, epsilon = 1e-15);

        assert!(roc_auc(&[0.1, 0.2], &[1, 1]).is_err());
    }

    #[test]
    fn average_precision_examples() {
        let ap = average_precision(&[0.9, 0.8, 0.3], &[1, 1, 0]).unwrap();
        assert_abs_diff_eq!(ap, 1.0, epsilon = 1e-15);

        let ap = average_precision(&[0.9, 0.8, 0.7, 0.6], &[1, 0, 1, 0]).unwrap();
        assert_abs_diff_eq!(ap, 5.0 / 6.0, epsilon = 1e-15);

        assert!(average_precision(&[0.3, 0.4], &[0, 0]).is_err());
    }

    #[test]
    fn ap_handles_tied_scores_as_one_step() {
        // all tied: single step with P = base rate, R jumps to 1
        let ap = average_precision(&[0.5, 0.5, 0.5, 0.5], &[1, 0, 0, 0]).unwrap();
        assert_abs_diff_eq!(ap, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn recall_at_fpr_examples() {
        let r = recall_at_fpr(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0], 0.01).unwrap();
        assert_abs_diff_eq!(r.recall, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.fnr, 0.0, epsilon = 1e-15);

        // all scores equal: only the sentinel threshold keeps FPR ≤ alpha
        let r = recall_at_fpr(&[0.5; 6], &[1, 1, 0, 0, 0, 0], 0.05).unwrap();
        assert_eq!(r.recall, 0.0);
        assert!(r.threshold.is_infinite());
        assert!(r.degenerate.contains(&"no_positive_predictions"));
    }

    fn brute_force_recall_at_fpr(scores: &[f64], labels: &[u8], alpha: f64) -> (f64, f64) {
        let (n_pos, n_neg) = class_counts(labels);
        let mut thresholds: Vec<f64> = scores.to_vec();
        thresholds.push(f64::INFINITY);
        let mut best: Option<(f64, f64, f64)> = None;
        for &t in &thresholds {
            let tp = scores
                .iter()
                .zip(labels)
                .filter(|(&s, &y)| s >= t && y == 1)
                .count();
            let fp = scores
                .iter()
                .zip(labels)
                .filter(|(&s, &y)| s >= t && y == 0)
                .count();
            let fpr = fp as f64 / n_neg as f64;
            let recall = tp as f64 / n_pos as f64;
            if fpr <= alpha {
                let cand = (recall, fpr, t);
                best = Some(match best {
                    None => cand,
                    Some(b) => {
                        if cand.0 > b.0
                            || (cand.0 == b.0 && cand.1 < b.1)
                            || (cand.0 == b.0 && cand.1 == b.1 && cand.2 > b.2)
                        {
                            cand
                        } else {
                            b
                        }
                    }
                });
            }
        }
        let b = best.unwrap();
        (b.0, b.2)
    }

    #[test]
    fn recall_at_fpr_matches_exhaustive_oracle() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..50 {
            let n = rng.random_range(20..200);
            let scores: Vec<f64> = (0..n)
                .map(|_| (rng.random_range(0..20) as f64) / 20.0)
                .collect();
            let mut labels: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.3))).collect();
            labels[0] = 1;
            labels[1] = 0;
            for alpha in [0.01, 0.05, 0.2] {
                let got = recall_at_fpr(&scores, &labels, alpha).unwrap();
                let (want_recall, want_threshold) =
                    brute_force_recall_at_fpr(&scores, &labels, alpha);
                assert_eq!(got.recall, want_recall, "trial {trial} alpha {alpha}");
                assert_eq!(got.threshold, want_threshold, "trial {trial} alpha {alpha}");
            }
        }
    }

    #[test]
    fn ten_negatives_allow_zero_false_positives_at_5_percent() {
        // alpha 0.05 with 10 negatives means even one false positive (FPR 0.1)
        // is infeasible
        let mut scores = vec![0.95, 0.9]; // positives
        let mut labels = vec![1u8, 1];
        for k in 0..10 {
            scores.push(0.8 - 0.05 * k as f64);
            labels.push(0);
        }
        // one negative outranks a positive, so full recall would cost a false positive
        scores[1] = 0.5;
        let r = recall_at_fpr(&scores, &labels, 0.05).unwrap();
        let (want_recall, _) = brute_force_recall_at_fpr(&scores, &labels, 0.05);
        assert_eq!(r.recall, want_recall);
        assert_eq!(r.recall, 0.5);
    }

    #[test]
    fn brier_examples() {
        assert_abs_diff_eq!(brier(&[1.0, 0.0], &[1, 0]).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(brier(&[0.5; 4], &[1, 0, 1, 0]).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(brier(&[0.8, 0.3], &[1, 0]).unwrap(), 0.065, epsilon = 1e-15);
    }

    #[test]
    fn reliability_curve_examples() {
        let bins = reliability_curve(&[0.5; 8], &[1, 0, 0, 0, 1, 0, 0, 0], 15).unwrap();
        assert_eq!(bins.len(), 1);
        assert_abs_diff_eq!(bins[0].conf, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bins[0].freq, 0.25, epsilon = 1e-15);

        // p = 1.0 lands in the last bin
        let bins = reliability_curve(&[1.0], &[1], 15).unwrap();
        assert_eq!(bins[0].bin, 15);

        let probs = [0.03, 0.2, 0.41, 0.77, 0.99];
        let bins = reliability_curve(&probs, &[0, 0, 1, 1, 1], 15).unwrap();
        let total: usize = bins.iter().map(|b| b.count).sum();
        assert_eq!(total, probs.len());
    }

    #[test]
    fn ece_examples() {
        // constant prediction at the base rate is perfectly calibrated
        let e = ece(&[0.5; 4], &[1, 0, 1, 0], 15).unwrap();
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-15);

        // anti-calibrated predictions max out
        let e = ece(&[0.0, 1.0], &[1, 0], 15).unwrap();
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-15);

        let e = ece(&[0.8, 0.8, 0.2, 0.2], &[1, 0, 0, 0], 15).unwrap();
        assert_abs_diff_eq!(e, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn murphy_examples() {
        // perfect forecast
        let m = murphy_decomposition(&[1.0, 0.0, 1.0, 0.0], &[1, 0, 1, 0], 15).unwrap();
        assert_abs_diff_eq!(m.reliability, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.resolution, m.uncertainty, epsilon = 1e-15);
        assert_abs_diff_eq!(m.binned_brier, 0.0, epsilon = 1e-15);

        // climatology: constant forecast at the base rate
        let labels = [1, 0, 0, 0];
        let m = murphy_decomposition(&[0.25; 4], &labels, 15).unwrap();
        assert_abs_diff_eq!(m.reliability, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.resolution, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.binned_brier, 0.25 * 0.75, epsilon = 1e-15);

        // base rate 0.09 gives uncertainty 0.0819
        let mut labels = vec![0u8; 100];
        for y in labels.iter_mut().take(9) {
            *y = 1;
        }
        let probs = vec![0.5; 100];
        let m = murphy_decomposition(&probs, &labels, 15).unwrap();
        assert_abs_diff_eq!(m.uncertainty, 0.0819, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn murphy_identity_holds(
            probs in prop::collection::vec(0.0..=1.0f64, 10..120),
            seed in 0u64..500,
        ) {
            use rand::prelude::*;
            use rand_chacha::ChaCha8Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let labels: Vec<u8> = probs.iter().map(|_| u8::from(rng.random_bool(0.3))).collect();
            let m = murphy_decomposition(&probs, &labels, 15).unwrap();
            let identity = m.reliability - m.resolution + m.uncertainty;
            prop_assert!((identity - m.binned_brier).abs() < 1e-12);
            prop_assert!(m.residual >= -1e-12);
            prop_assert!(m.reliability >= 0.0);
            prop_assert!(m.resolution <= m.uncertainty + 1e-12);

            // full exact decomposition:
            // raw = binned + within-bin variance − 2 × within-bin covariance
            let curve = reliability_curve(&probs, &labels, 15).unwrap();
            let n = probs.len() as f64;
            let mut covariance = 0.0;
            for (&p, &y) in probs.iter().zip(&labels) {
                let b = curve
                    .iter()
                    .find(|b| b.bin == bin_index(p, 15) + 1)
                    .unwrap();
                covariance += (p - b.conf) * (f64::from(y) - b.freq) / n;
            }
            let raw = brier(&probs, &labels).unwrap();
            let reconstructed = m.binned_brier + m.residual - 2.0 * covariance;
            prop_assert!((raw - reconstructed).abs() < 1e-12);
        }

        #[test]
        fn rank_metrics_invariant_under_monotone_transforms(
            raw in prop::collection::vec(-3.0..3.0f64, 8..60),
            seed in 0u64..500,
        ) {
            use rand::prelude::*;
            use rand_chacha::ChaCha8Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut labels: Vec<u8> = raw.iter().map(|_| u8::from(rng.random_bool(0.4))).collect();
            labels[0] = 1;
            labels[1] = 0;

            let affine: Vec<f64> = raw.iter().map(|s| 2.0 * s + 1.0).collect();
            let tanh: Vec<f64> = raw.iter().map(|s| s.tanh()).collect();

            let auc = roc_auc(&raw, &labels).unwrap();
            prop_assert!((roc_auc(&affine, &labels).unwrap() - auc).abs() < 1e-12);
            prop_assert!((roc_auc(&tanh, &labels).unwrap() - auc).abs() < 1e-12);

            let ap = average_precision(&raw, &labels).unwrap();
            prop_assert!((average_precision(&affine, &labels).unwrap() - ap).abs() < 1e-12);
            prop_assert!((average_precision(&tanh, &labels).unwrap() - ap).abs() < 1e-12);
        }

        #[test]
        fn bin_counts_partition_the_sample(
            probs in prop::collection::vec(0.0..=1.0f64, 1..100),
        ) {
            let labels: Vec<u8> = probs.iter().map(|&p| u8::from(p > 0.5)).collect();
            let bins = reliability_curve(&probs, &labels, 15).unwrap();
            let total: usize = bins.iter().map(|b| b.count).sum();
            prop_assert_eq!(total, probs.len());
            for b in &bins {
                prop_assert!((0.0..=1.0).contains(&b.conf));
                prop_assert!((0.0..=1.0).contains(&b.freq));
            }
        }
    }
}
