//! Per-cell metric record and its fixed CSV schema.

use crate::error::{Error, Result};
use crate::metrics::ReliabilityBin;

use super::config::ModelId;

/// Column order of `records.csv`; every row carries exactly these fields.
pub const RECORD_COLUMNS: &[&str] = &[
    "seed",
    "model",
    "n",
    "l",
    "precision",
    "recall",
    "f1",
    "fnr",
    "fpr",
    "roc_auc",
    "pr_auc",
    "recall_at_fpr1",
    "precision_at_fpr1",
    "fnr_at_fpr1",
    "recall_at_fpr5",
    "brier",
    "ece",
    "reliability",
    "resolution",
    "uncertainty",
    "binned_brier",
    "train_seconds",
    "predict_seconds",
    "degenerate_flags",
    "split_checksum",
];

/// Metrics where a smaller value is the better one, fixing the orientation
/// of the Δ-vs-baseline analysis.
pub const LOWER_IS_BETTER: &[&str] = &[
    "fnr",
    "fpr",
    "fnr_at_fpr1",
    "brier",
    "ece",
    "reliability",
    "train_seconds",
    "predict_seconds",
];

#[derive(Debug, Clone)]
pub struct MetricRecord {
    pub seed: u64,
    pub model: ModelId,
    pub n: usize,
    pub l: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fnr: f64,
    pub fpr: f64,
    pub roc_auc: f64,
    pub pr_auc: f64,
    pub recall_at_fpr1: f64,
    pub precision_at_fpr1: f64,
    pub fnr_at_fpr1: f64,
    pub recall_at_fpr5: f64,
    pub brier: f64,
    pub ece: f64,
    pub reliability: f64,
    pub resolution: f64,
    pub uncertainty: f64,
    pub binned_brier: f64,
    pub train_seconds: f64,
    pub predict_seconds: f64,
    pub degenerate_flags: String,
    pub split_checksum: String,
    /// Occupied reliability bins; written to `reliability/` as a side file,
    /// not a `records.csv` column.
    pub reliability_bins: Vec<ReliabilityBin>,
}

impl MetricRecord {
    pub fn key(&self) -> (u64, ModelId, usize, usize) {
        (self.seed, self.model, self.n, self.l)
    }

    /// Numeric metric values in `records.csv` column order.
    pub fn metric_values(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("precision", self.precision),
            ("recall", self.recall),
            ("f1", self.f1),
            ("fnr", self.fnr),
            ("fpr", self.fpr),
            ("roc_auc", self.roc_auc),
            ("pr_auc", self.pr_auc),
            ("recall_at_fpr1", self.recall_at_fpr1),
            ("precision_at_fpr1", self.precision_at_fpr1),
            ("fnr_at_fpr1", self.fnr_at_fpr1),
            ("recall_at_fpr5", self.recall_at_fpr5),
            ("brier", self.brier),
            ("ece", self.ece),
            ("reliability", self.reliability),
            ("resolution", self.resolution),
            ("uncertainty", self.uncertainty),
            ("binned_brier", self.binned_brier),
            ("train_seconds", self.train_seconds),
            ("predict_seconds", self.predict_seconds),
        ]
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metric_values()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }

    pub fn csv_header() -> String {
        RECORD_COLUMNS.join(",")
    }

    /// One CSV row; floats use the shortest round-trip form so that resumed
    /// and rerun outputs are byte-identical.
    pub fn to_csv_row(&self) -> String {
        let mut fields: Vec<String> = vec![
            self.seed.to_string(),
            self.model.to_string(),
            self.n.to_string(),
            self.l.to_string(),
        ];
        fields.extend(self.metric_values().iter().map(|(_, v)| v.to_string()));
        fields.push(self.degenerate_flags.clone());
        fields.push(self.split_checksum.clone());
        fields.join(",")
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != RECORD_COLUMNS.len() {
            return Err(Error::Format(format!(
                "record row has {} fields, expected {}",
                fields.len(),
                RECORD_COLUMNS.len()
            )));
        }
        let parse_f = |idx: usize| -> Result<f64> {
            fields[idx]
                .parse()
                .map_err(|_| Error::Format(format!("bad float '{}' in record", fields[idx])))
        };
        Ok(Self {
            seed: fields[0]
                .parse()
                .map_err(|_| Error::Format(format!("bad seed '{}'", fields[0])))?,
            model: ModelId::parse(fields[1])?,
            n: fields[2]
                .parse()
                .map_err(|_| Error::Format(format!("bad n '{}'", fields[2])))?,
            l: fields[3]
                .parse()
                .map_err(|_| Error::Format(format!("bad l '{}'", fields[3])))?,
            precision: parse_f(4)?,
            recall: parse_f(5)?,
            f1: parse_f(6)?,
            fnr: parse_f(7)?,
            fpr: parse_f(8)?,
            roc_auc: parse_f(9)?,
            pr_auc: parse_f(10)?,
            recall_at_fpr1: parse_f(11)?,
            precision_at_fpr1: parse_f(12)?,
            fnr_at_fpr1: parse_f(13)?,
            recall_at_fpr5: parse_f(14)?,
            brier: parse_f(15)?,
            ece: parse_f(16)?,
            reliability: parse_f(17)?,
            resolution: parse_f(18)?,
            uncertainty: parse_f(19)?,
            binned_brier: parse_f(20)?,
            train_seconds: parse_f(21)?,
            predict_seconds: parse_f(22)?,
            degenerate_flags: fields[23].to_string(),
            split_checksum: fields[24].to_string(),
            reliability_bins: Vec::new(),
        })
    }
}
