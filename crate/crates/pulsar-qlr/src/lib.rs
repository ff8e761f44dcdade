//! Hybrid quantum-classical logistic regression for pulsar candidate
//! ranking on the HTRU-2 dataset.
//!
//! The crate bundles a dense statevector simulator, three quantum feature
//! encodings with parameter-shift training, a classical logistic-regression
//! baseline, a quantum-kernel SVM reference, calibration-aware evaluation
//! metrics, and a paired-seed experiment harness behind a CLI.

pub mod baselines;
pub mod circuits;
pub mod data;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod qlr;
pub mod qsim;

pub use error::{Error, Result};
