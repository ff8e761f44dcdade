//! Paired-seed experiment driver.
//!
//! One stratified 80/20 split per seed is shared by every model; each
//! (seed, model, N, L) cell subsamples the training side, refits the
//! standardizer on that subsample, trains, and evaluates on the shared test
//! split. Completed cells append to `records.csv` immediately, so an
//! interrupted sweep resumes by key; failures land in `failures.log` without
//! aborting the sweep.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use crate::baselines::{fit_classical_lr_cv, gram_train, qsvm_fit_predict, DEFAULT_C};
use crate::circuits::{EncodingVariant, N_FEATURES};
use crate::data::{load_htru2, stratified_split, stratified_subsample, Dataset, Standardizer};
use crate::error::{Error, Result};
use crate::metrics::{
    average_precision, brier, confusion_counts, ece, murphy_decomposition, recall_at_fpr,
    reliability_curve, roc_auc, threshold_metrics, DEFAULT_BINS,
};
use crate::qlr::{self, TrainConfig};

use super::config::{ExperimentConfig, ModelId};
use super::record::MetricRecord;
use super::report::{emit_reports, write_reliability_file};

pub const DECISION_THRESHOLD: f64 = 0.5;

/// FNV-1a over the split's feature and label bits; identical membership and
/// order give identical checksums.
fn split_checksum(test: &Dataset) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for (row, &label) in test.features.iter().zip(&test.labels) {
        for v in row {
            for b in v.to_bits().to_le_bytes() {
                eat(b);
            }
        }
        eat(label);
    }
    format!("{hash:016x}")
}

/// Probabilities plus wall-clock training/prediction seconds for one cell.
struct CellOutput {
    probs: Vec<f64>,
    train_seconds: f64,
    predict_seconds: f64,
    extra_flags: Vec<String>,
}

fn run_cell(
    model: ModelId,
    depth: usize,
    train_x: &[[f64; N_FEATURES]],
    train_y: &[u8],
    test_x: &[[f64; N_FEATURES]],
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<CellOutput> {
    let parallel = cfg.threads.is_parallel();
    match model {
        ModelId::Logreg => {
            let start = Instant::now();
            let lr = fit_classical_lr_cv(train_x, train_y, seed)?;
            let train_seconds = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let probs = lr.predict_proba(test_x);
            let predict_seconds = start.elapsed().as_secs_f64();
            Ok(CellOutput {
                probs,
                train_seconds,
                predict_seconds,
                extra_flags: vec![format!("lr_c:{}", lr.c)],
            })
        }
        ModelId::Qsvm => {
            let out = qsvm_fit_predict(
                train_x,
                train_y,
                test_x,
                cfg.iqp_repetitions,
                DEFAULT_C,
                seed,
                parallel,
            )?;
            let mut extra_flags = Vec::new();
            if out.projected {
                extra_flags.push("psd_projected".to_string());
            }
            Ok(CellOutput {
                probs: out.probs,
                train_seconds: out.train_seconds,
                predict_seconds: out.predict_seconds,
                extra_flags,
            })
        }
        ModelId::QlrAngle | ModelId::QlrAmplitude | ModelId::QlrDr => {
            let variant = match model {
                ModelId::QlrAngle => EncodingVariant::angle(cfg.alpha),
                ModelId::QlrAmplitude => EncodingVariant::amplitude(),
                _ => EncodingVariant::reupload(cfg.alpha),
            };
            let train_cfg = TrainConfig {
                seed,
                max_epochs: cfg.max_epochs,
                parallel,
                ..TrainConfig::default()
            };
            let (qlr_model, history) = qlr::fit(train_x, train_y, &train_cfg, &variant, depth)?;
            let start = Instant::now();
            let probs = qlr::predict_proba(&qlr_model, test_x, parallel)?;
            let predict_seconds = start.elapsed().as_secs_f64();

            let mut extra_flags = vec![format!("best_epoch:{}", history.best_epoch)];
            if variant.kind == crate::circuits::EncodingKind::Amplitude {
                let degenerate = train_x
                    .iter()
                    .chain(test_x.iter())
                    .filter(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-9)
                    .count();
                if degenerate > 0 {
                    extra_flags.push(format!("amplitude_degenerate_inputs:{degenerate}"));
                }
            }
            Ok(CellOutput {
                probs,
                train_seconds: history.train_seconds,
                predict_seconds,
                extra_flags,
            })
        }
    }
}

fn evaluate_cell(
    seed: u64,
    model: ModelId,
    n: usize,
    l: usize,
    output: &CellOutput,
    test_y: &[u8],
    checksum: &str,
) -> Result<MetricRecord> {
    let counts = confusion_counts(&output.probs, test_y, DECISION_THRESHOLD)?;
    let tm = threshold_metrics(&counts);
    let at1 = recall_at_fpr(&output.probs, test_y, 0.01)?;
    let at5 = recall_at_fpr(&output.probs, test_y, 0.05)?;
    let murphy = murphy_decomposition(&output.probs, test_y, DEFAULT_BINS)?;
    let bins = reliability_curve(&output.probs, test_y, DEFAULT_BINS)?;

    let mut flags: Vec<String> = tm.degenerate.iter().map(|s| s.to_string()).collect();
    flags.extend(at1.degenerate.iter().map(|s| format!("fpr1_{s}")));
    flags.extend(at5.degenerate.iter().map(|s| format!("fpr5_{s}")));
    flags.extend(output.extra_flags.iter().cloned());

    Ok(MetricRecord {
        seed,
        model,
        n,
        l,
        precision: tm.precision,
        recall: tm.recall,
        f1: tm.f1,
        fnr: tm.fnr,
        fpr: tm.fpr,
        roc_auc: roc_auc(&output.probs, test_y)?,
        pr_auc: average_precision(&output.probs, test_y)?,
        recall_at_fpr1: at1.recall,
        precision_at_fpr1: at1.precision,
        fnr_at_fpr1: at1.fnr,
        recall_at_fpr5: at5.recall,
        brier: brier(&output.probs, test_y)?,
        ece: ece(&output.probs, test_y, DEFAULT_BINS)?,
        reliability: murphy.reliability,
        resolution: murphy.resolution,
        uncertainty: murphy.uncertainty,
        binned_brier: murphy.binned_brier,
        train_seconds: output.train_seconds,
        predict_seconds: output.predict_seconds,
        degenerate_flags: flags.join(";"),
        split_checksum: checksum.to_string(),
        reliability_bins: bins,
    })
}

/// Reads previously completed records; tolerates a torn final line from an
/// interrupted run by dropping it.
pub fn read_existing_records(path: &Path) -> Result<Vec<MetricRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path)?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        match MetricRecord::from_csv_row(line) {
            Ok(r) => records.push(r),
            Err(err) => {
                let is_last = text.lines().skip(i + 1).all(|l| l.trim().is_empty());
                if is_last {
                    eprintln!("dropping torn trailing record row: {err}");
                } else {
                    return Err(err);
                }
            }
        }
    }
    Ok(records)
}

/// Runs every (seed, model, N, L) cell of the configuration and returns all
/// records, including previously completed ones found in the output
/// directory.
pub fn run_config(cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let records_path = cfg.out_dir.join("records.csv");

    let existing = read_existing_records(&records_path)?;
    let done: BTreeSet<_> = existing.iter().map(|r| r.key()).collect();
    let mut records = existing;

    let dataset = load_htru2(&cfg.data_path)?;

    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&records_path)?;
    if file.metadata()?.len() == 0 {
        writeln!(file, "{}", MetricRecord::csv_header())?;
        file.flush()?;
    }
    let mut failures: Vec<String> = Vec::new();

    for &seed in &cfg.seeds {
        let (train, test) = stratified_split(&dataset, 0.2, seed)?;
        let checksum = split_checksum(&test);

        for &model in &cfg.models {
            let depths: Vec<usize> = if model.uses_depth() {
                cfg.depth_list.clone()
            } else {
                vec![0]
            };
            for &n in &cfg.n_list {
                for &l in &depths {
                    let key = (seed, model, n, l);
                    if done.contains(&key) {
                        continue;
                    }
                    let cell = (|| -> Result<MetricRecord> {
                        let sub = stratified_subsample(&train, n, seed)?;
                        let standardizer = Standardizer::fit(&sub.features)?;
                        let train_x = standardizer.apply(&sub.features);
                        let test_x = standardizer.apply(&test.features);

                        if cfg.export_kernels && model == ModelId::Qsvm {
                            let dir = cfg.out_dir.join("kernels");
                            std::fs::create_dir_all(&dir)?;
                            let k = gram_train(
                                &train_x,
                                cfg.iqp_repetitions,
                                cfg.threads.is_parallel(),
                            )?;
                            k.write_csv(&dir.join(format!("train_seed{seed}_n{n}.csv")))?;
                        }

                        let output =
                            run_cell(model, l, &train_x, &sub.labels, &test_x, seed, cfg)?;
                        evaluate_cell(seed, model, n, l, &output, &test.labels, &checksum)
                    })();

                    match cell {
                        Ok(record) => {
                            writeln!(file, "{}", record.to_csv_row())?;
                            file.flush()?;
                            write_reliability_file(&cfg.out_dir, &record)?;
                            records.push(record);
                        }
                        Err(err) => {
                            let line = format!(
                                "seed={seed} model={model} n={n} l={l}: {err}"
                            );
                            eprintln!("cell failed: {line}");
                            failures.push(line);
                        }
                    }
                }
            }
        }
    }

    if !failures.is_empty() {
        std::fs::write(cfg.out_dir.join("failures.log"), failures.join("\n") + "\n")?;
    }

    records.sort_by_key(|r| r.key());
    emit_reports(&records, cfg)?;
    Ok(records)
}

/// Re-aggregates an existing output directory from its `records.csv`.
pub fn reaggregate(cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    let records_path = cfg.out_dir.join("records.csv");
    if !records_path.exists() {
        return Err(Error::Data(format!(
            "no records.csv under {}",
            cfg.out_dir.display()
        )));
    }
    let mut records = read_existing_records(&records_path)?;
    records.sort_by_key(|r| r.key());
    emit_reports(&records, cfg)?;
    Ok(records)
}
