//! IQP-style quantum feature map and the fidelity kernel it induces.
//!
//! One repetition applies H to every qubit, an RZ(x_i) per qubit, and a
//! ZZ rotation with angle x_i·x_j for every pair i < j in lexicographic
//! order; the kernel entry is the squared overlap of two embedded states.

use rayon::prelude::*;

use crate::circuits::N_FEATURES;
use crate::error::{Error, Result};
use crate::qsim::{overlap_sq, StateVector};

pub const DEFAULT_REPETITIONS: usize = 2;

/// Embeds one standardized sample on 8 qubits.
pub fn iqp_state(x: &[f64; N_FEATURES], repetitions: usize) -> Result<StateVector> {
    if repetitions < 1 {
        return Err(Error::Config(format!(
            "repetitions must be >= 1, got {repetitions}"
        )));
    }
    let mut state = StateVector::zero(N_FEATURES)?;
    for _ in 0..repetitions {
        for q in 0..N_FEATURES {
            state.apply_hadamard(q)?;
        }
        for q in 0..N_FEATURES {
            state.apply_rot_z(q, x[q])?;
        }
        for a in 0..N_FEATURES {
            for b in (a + 1)..N_FEATURES {
                state.apply_zz_rotation(a, b, x[a] * x[b])?;
            }
        }
    }
    Ok(state)
}

/// k(x, x') = |⟨φ(x')|φ(x)⟩|².
pub fn kernel_entry(x: &[f64; N_FEATURES], y: &[f64; N_FEATURES], repetitions: usize) -> Result<f64> {
    overlap_sq(&iqp_state(x, repetitions)?, &iqp_state(y, repetitions)?)
}

/// Row-major kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl KernelMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Principal submatrix over the given row/column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> KernelMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        KernelMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        use std::io::Write;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn embed_all(
    xs: &[[f64; N_FEATURES]],
    repetitions: usize,
    parallel: bool,
) -> Result<Vec<StateVector>> {
    if parallel {
        xs.par_iter().map(|x| iqp_state(x, repetitions)).collect()
    } else {
        xs.iter().map(|x| iqp_state(x, repetitions)).collect()
    }
}

/// Training Gram matrix, symmetrized as (K + Kᵀ)/2. States are embedded once
/// per row and reused across entries.
pub fn gram_train(
    xs: &[[f64; N_FEATURES]],
    repetitions: usize,
    parallel: bool,
) -> Result<KernelMatrix> {
    let states = embed_all(xs, repetitions, parallel)?;
    let n = states.len();
    let compute_row = |i: usize| -> Result<Vec<f64>> {
        let mut row = vec![0.0; n];
        for j in 0..=i {
            row[j] = overlap_sq(&states[i], &states[j])?;
        }
        Ok(row)
    };
    let lower: Vec<Vec<f64>> = if parallel {
        (0..n).into_par_iter().map(compute_row).collect::<Result<_>>()?
    } else {
        (0..n).map(compute_row).collect::<Result<_>>()?
    };
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            // |⟨a|b⟩|² is already symmetric; (K + Kᵀ)/2 just mirrors it
            data[i * n + j] = lower[i][j];
            data[j * n + i] = lower[i][j];
        }
    }
    Ok(KernelMatrix { rows: n, cols: n, data })
}

/// Cross kernel: entry (i, j) = k(xa_i, xb_j).
pub fn gram_cross(
    xa: &[[f64; N_FEATURES]],
    xb: &[[f64; N_FEATURES]],
    repetitions: usize,
    parallel: bool,
) -> Result<KernelMatrix> {
    let states_a = embed_all(xa, repetitions, parallel)?;
    let states_b = embed_all(xb, repetitions, parallel)?;
    let cols = states_b.len();
    let compute_row = |i: usize| -> Result<Vec<f64>> {
        states_b
            .iter()
            .map(|sb| overlap_sq(&states_a[i], sb))
            .collect()
    };
    let rows: Vec<Vec<f64>> = if parallel {
        (0..states_a.len())
            .into_par_iter()
            .map(compute_row)
            .collect::<Result<_>>()?
    } else {
        (0..states_a.len()).map(compute_row).collect::<Result<_>>()?
    };
    Ok(KernelMatrix {
        rows: states_a.len(),
        cols,
        data: rows.into_iter().flatten().collect(),
    })
}
