//! Aggregation and report emission: per-cell summary statistics, paired
//! Δ-vs-best-baseline analysis, reliability tables, and the run metadata
//! echo.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::{ExperimentConfig, ModelId};
use super::record::{MetricRecord, LOWER_IS_BETTER, RECORD_COLUMNS};

/// Mean and standard error (σ/√N with the N−1 variance denominator); the SE
/// is absent for a single value.
pub fn aggregate_mean_se(values: &[f64]) -> Result<(f64, Option<f64>)> {
    if values.is_empty() {
        return Err(Error::Data("cannot aggregate an empty value list".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Ok((mean, None));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, Some((var / n).sqrt())))
}

#[derive(Debug, Clone)]
pub struct DeltaSummary {
    pub model: ModelId,
    pub n: usize,
    pub l: usize,
    pub metric: String,
    pub per_seed: Vec<(u64, f64)>,
    pub mean: f64,
    pub std: f64,
    pub se: f64,
    pub baseline_set: Vec<ModelId>,
}

/// Per-seed Δ = QLR metric − best baseline metric for the same seed, where
/// "best" is the max (min for lower-is-better metrics) over the baseline
/// set. QSVM is never part of the baseline set.
pub fn delta_vs_best_baseline(
    records: &[MetricRecord],
    metric: &str,
    qlr_model: ModelId,
    n: usize,
    l: usize,
    baseline_set: &[ModelId],
) -> Result<DeltaSummary> {
    if baseline_set.is_empty() {
        return Err(Error::Config("baseline set must be non-empty".into()));
    }
    let lower_better = LOWER_IS_BETTER.contains(&metric);
    let seeds: BTreeSet<u64> = records
        .iter()
        .filter(|r| r.model == qlr_model && r.n == n && r.l == l)
        .map(|r| r.seed)
        .collect();
    if seeds.is_empty() {
        return Err(Error::Pairing(format!(
            "no records for {qlr_model} at n={n}, l={l}"
        )));
    }

    let mut per_seed = Vec::new();
    for &seed in &seeds {
        let qlr_value = records
            .iter()
            .find(|r| r.model == qlr_model && r.n == n && r.l == l && r.seed == seed)
            .and_then(|r| r.metric(metric))
            .ok_or_else(|| {
                Error::Pairing(format!("seed {seed}: missing metric '{metric}' for {qlr_model}"))
            })?;

        let mut best: Option<f64> = None;
        for &baseline in baseline_set {
            let value = records
                .iter()
                .find(|r| r.model == baseline && r.n == n && r.seed == seed)
                .and_then(|r| r.metric(metric));
            let Some(value) = value else {
                return Err(Error::Pairing(format!(
                    "seed {seed}: missing baseline {baseline} record at n={n} for metric '{metric}'"
                )));
            };
            best = Some(match best {
                None => value,
                Some(b) => {
                    if lower_better {
                        b.min(value)
                    } else {
                        b.max(value)
                    }
                }
            });
        }
        per_seed.push((seed, qlr_value - best.expect("non-empty baseline set")));
    }

    let values: Vec<f64> = per_seed.iter().map(|(_, d)| *d).collect();
    let (mean, se) = aggregate_mean_se(&values)?;
    let std = se.map_or(0.0, |se| se * (values.len() as f64).sqrt());
    Ok(DeltaSummary {
        model: qlr_model,
        n,
        l,
        metric: metric.to_string(),
        per_seed,
        mean,
        std,
        se: se.unwrap_or(0.0),
        baseline_set: baseline_set.to_vec(),
    })
}

pub fn write_reliability_file(out_dir: &Path, record: &MetricRecord) -> Result<()> {
    if record.reliability_bins.is_empty() {
        return Ok(());
    }
    let dir = out_dir.join("reliability");
    std::fs::create_dir_all(&dir)?;
    let name = format!(
        "{}_n{}_l{}_seed{}.csv",
        record.model, record.n, record.l, record.seed
    );
    let mut out = std::io::BufWriter::new(std::fs::File::create(dir.join(name))?);
    writeln!(out, "bin,count,conf,freq")?;
    for b in &record.reliability_bins {
        writeln!(out, "{},{},{},{}", b.bin, b.count, b.conf, b.freq)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RunMeta<'a> {
    config: &'a ExperimentConfig,
    software_version: &'static str,
    decision_threshold: f64,
    calibration_bins: usize,
    adam: AdamMeta,
    patience_epochs: usize,
    validation_fraction: f64,
    theta_init: &'static str,
    parameter_shift: &'static str,
    bin_edges: &'static str,
    positive_prediction: &'static str,
    delta_baseline_set: Vec<String>,
    delta_lower_is_better: Vec<&'static str>,
}

#[derive(Serialize)]
struct AdamMeta {
    learning_rate: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    batch_size: usize,
}

/// Baselines eligible for the Δ analysis: classical models only.
pub fn delta_baseline_set(cfg: &ExperimentConfig) -> Vec<ModelId> {
    cfg.models
        .iter()
        .copied()
        .filter(|m| matches!(m, ModelId::Logreg))
        .collect()
}

/// Writes `summary.csv`, `delta.csv`, and `run_meta.json` from the record
/// list. `records.csv` and `reliability/` are written incrementally by the
/// runner as cells complete.
pub fn emit_reports(records: &[MetricRecord], cfg: &ExperimentConfig) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Data("no records to report".into()));
    }
    std::fs::create_dir_all(&cfg.out_dir)?;

    // summary.csv: mean ± SE per (model, n, l, metric)
    let mut summary = std::io::BufWriter::new(std::fs::File::create(
        cfg.out_dir.join("summary.csv"),
    )?);
    writeln!(summary, "model,n,l,metric,mean,se,n_seeds")?;
    let cells: BTreeSet<(ModelId, usize, usize)> =
        records.iter().map(|r| (r.model, r.n, r.l)).collect();
    let metric_names: Vec<&'static str> = RECORD_COLUMNS
        .iter()
        .copied()
        .filter(|c| {
            !matches!(
                *c,
                "seed" | "model" | "n" | "l" | "degenerate_flags" | "split_checksum"
            )
        })
        .collect();
    for (model, n, l) in &cells {
        let cell_records: Vec<&MetricRecord> = records
            .iter()
            .filter(|r| r.model == *model && r.n == *n && r.l == *l)
            .collect();
        for metric in &metric_names {
            let values: Vec<f64> = cell_records
                .iter()
                .filter_map(|r| r.metric(metric))
                .collect();
            if values.is_empty() {
                continue;
            }
            let (mean, se) = aggregate_mean_se(&values)?;
            let se_text = se.map_or(String::new(), |v| v.to_string());
            writeln!(
                summary,
                "{model},{n},{l},{metric},{mean},{se_text},{}",
                values.len()
            )?;
        }
    }
    summary.flush()?;

    // delta.csv: QLR variants against the best classical baseline per seed
    let baseline_set = delta_baseline_set(cfg);
    let mut delta = std::io::BufWriter::new(std::fs::File::create(cfg.out_dir.join("delta.csv"))?);
    writeln!(delta, "model,n,l,metric,mean_delta,std_delta,se_delta,baseline_set")?;
    if !baseline_set.is_empty() {
        let qlr_cells: BTreeSet<(ModelId, usize, usize)> = records
            .iter()
            .filter(|r| r.model.is_qlr())
            .map(|r| (r.model, r.n, r.l))
            .collect();
        let baseline_names: Vec<String> =
            baseline_set.iter().map(|m| m.to_string()).collect();
        let baseline_label = baseline_names.join("+");
        for (model, n, l) in qlr_cells {
            for metric in &metric_names {
                match delta_vs_best_baseline(records, metric, model, n, l, &baseline_set) {
                    Ok(summary) => {
                        writeln!(
                            delta,
                            "{model},{n},{l},{metric},{},{},{},{baseline_label}",
                            summary.mean, summary.std, summary.se
                        )?;
                    }
                    // cells without a same-N baseline simply have no delta row
                    Err(Error::Pairing(_)) => {}
                    Err(other) => return Err(other),
                }
            }
        }
    }
    delta.flush()?;

    let meta = RunMeta {
        config: cfg,
        software_version: env!("CARGO_PKG_VERSION"),
        decision_threshold: super::runner::DECISION_THRESHOLD,
        calibration_bins: crate::metrics::DEFAULT_BINS,
        adam: AdamMeta {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            batch_size: 16,
        },
        patience_epochs: 15,
        validation_fraction: 0.2,
        theta_init: "uniform[-pi,pi] from the run seed; w = b = 0",
        parameter_shift: "s = pi/2, two evaluations per trainable angle",
        bin_edges: "equal width, half-open, last bin closed at 1.0",
        positive_prediction: "p >= threshold",
        delta_baseline_set: baseline_set.iter().map(|m| m.to_string()).collect(),
        delta_lower_is_better: LOWER_IS_BETTER.to_vec(),
    };
    let mut meta_file = std::fs::File::create(cfg.out_dir.join("run_meta.json"))?;
    meta_file.write_all(serde_json::to_string_pretty(&meta)?.as_bytes())?;
    meta_file.write_all(b"\n")?;
    Ok(())
}
