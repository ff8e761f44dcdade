//! Projection of a symmetric kernel matrix onto the positive semidefinite
//! cone by eigenvalue clipping.

use nalgebra::DMatrix;

use super::kernel::KernelMatrix;
use crate::error::{Error, Result};

pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Clips negative eigenvalues to zero and reconstructs. Matrices whose
/// smallest eigenvalue is already ≥ −1e-10 are returned unchanged, bitwise.
/// The boolean reports whether a reconstruction happened.
pub fn psd_project(k: &KernelMatrix) -> Result<(KernelMatrix, bool)> {
    if !k.is_square() {
        return Err(Error::Shape(format!(
            "PSD projection needs a square matrix, got {}x{}",
            k.rows, k.cols
        )));
    }
    let n = k.rows;
    let m = DMatrix::from_row_slice(n, n, &k.data);
    let eigen = m.symmetric_eigen();
    let min_eig = eigen.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if !min_eig.is_finite() {
        return Err(Error::Numeric("eigendecomposition produced non-finite values".into()));
    }
    if min_eig >= EIGENVALUE_FLOOR {
        return Ok((k.clone(), false));
    }

    let clipped = eigen.eigenvalues.map(|v| v.max(0.0));
    let reconstructed =
        &eigen.eigenvectors * DMatrix::from_diagonal(&clipped) * eigen.eigenvectors.transpose();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = reconstructed[(i, i)];
        for j in 0..i {
            let sym = (reconstructed[(i, j)] + reconstructed[(j, i)]) / 2.0;
            data[i * n + j] = sym;
            data[j * n + i] = sym;
        }
    }
    Ok((KernelMatrix { rows: n, cols: n, data }, true))
}

/// Smallest eigenvalue of a square symmetric matrix; test and diagnostics
/// helper.
pub fn min_eigenvalue(k: &KernelMatrix) -> Result<f64> {
    if !k.is_square() {
        return Err(Error::Shape("min_eigenvalue needs a square matrix".into()));
    }
    let m = DMatrix::from_row_slice(k.rows, k.rows, &k.data);
    Ok(m.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b)))
}
