//! Classical logistic-regression baseline and the quantum-kernel SVM
//! reference model.

pub mod kernel;
pub mod logreg;
pub mod platt;
pub mod psd;
pub mod qsvm;
pub mod smo;

pub use kernel::{gram_cross, gram_train, iqp_state, kernel_entry, KernelMatrix, DEFAULT_REPETITIONS};
pub use logreg::{cv_select_c, fit_classical_lr, fit_classical_lr_cv, ClassicalLrModel, C_GRID};
pub use platt::{platt_fit, PlattScaler};
pub use psd::psd_project;
pub use qsvm::{qsvm_fit_predict, QsvmOutcome, DEFAULT_C};
pub use smo::{fit_weighted_svm, SvmDual};
