#![allow(dead_code)]

//! Shared helpers for the integration and acceptance suites, including a
//! dense-matrix gate oracle independent of the simulator's update kernels.

use num_complex::Complex64;
use pulsar_qlr::qsim::{Gate, StateVector};

/// Kronecker product of two square matrices.
fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut out = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Vec<Vec<Complex64>> {
    let mut m = vec![vec![Complex64::ZERO; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::ONE;
    }
    m
}

fn single_qubit_matrix(gate: &Gate) -> Vec<Vec<Complex64>> {
    let c = |re: f64| Complex64::new(re, 0.0);
    match *gate {
        Gate::RotY { angle, .. } => {
            let (s, co) = (angle / 2.0).sin_cos();
            vec![vec![c(co), c(-s)], vec![c(s), c(co)]]
        }
        Gate::RotZ { angle, .. } => vec![
            vec![Complex64::from_polar(1.0, -angle / 2.0), Complex64::ZERO],
            vec![Complex64::ZERO, Complex64::from_polar(1.0, angle / 2.0)],
        ],
        Gate::Hadamard { .. } => {
            let h = c(std::f64::consts::FRAC_1_SQRT_2);
            vec![vec![h, h], vec![h, -h]]
        }
        _ => unreachable!("not a single-qubit gate"),
    }
}

/// Full 2^n × 2^n unitary of one gate under the qubit-0-is-MSB convention.
pub fn gate_matrix(gate: &Gate, n_qubits: usize) -> Vec<Vec<Complex64>> {
    match *gate {
        Gate::RotY { qubit, .. } | Gate::RotZ { qubit, .. } | Gate::Hadamard { qubit } => {
            let u = single_qubit_matrix(gate);
            let left = identity(1 << qubit);
            let right = identity(1 << (n_qubits - 1 - qubit));
            kron(&kron(&left, &u), &right)
        }
        Gate::Cz { a, b } => {
            let dim = 1 << n_qubits;
            let mut m = identity(dim);
            for i in 0..dim {
                let bit = |q: usize| (i >> (n_qubits - 1 - q)) & 1;
                if bit(a) == 1 && bit(b) == 1 {
                    m[i][i] = -Complex64::ONE;
                }
            }
            m
        }
        Gate::ZzRot { a, b, angle } => {
            let dim = 1 << n_qubits;
            let mut m = identity(dim);
            for i in 0..dim {
                let bit = |q: usize| (i >> (n_qubits - 1 - q)) & 1;
                let phase = if bit(a) == bit(b) { -angle / 2.0 } else { angle / 2.0 };
                m[i][i] = Complex64::from_polar(1.0, phase);
            }
            m
        }
    }
}

/// Matrix-vector product against a state's amplitudes.
pub fn matrix_apply(m: &[Vec<Complex64>], amps: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(amps).map(|(a, b)| a * b).sum())
        .collect()
}

/// `records.csv` lines with the wall-clock timing columns blanked out;
/// every other field is deterministic per seed and must match bitwise.
pub fn records_without_timings(bytes: &[u8]) -> Vec<String> {
    const TIMING_COLUMNS: [usize; 2] = [21, 22]; // train_seconds, predict_seconds
    String::from_utf8(bytes.to_vec())
        .expect("records.csv is UTF-8")
        .lines()
        .map(|line| {
            line.split(',')
                .enumerate()
                .map(|(i, field)| if TIMING_COLUMNS.contains(&i) { "" } else { field })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

/// Random normalized state for oracle comparisons.
pub fn random_state(n: usize, seed: u64) -> StateVector {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let mut values: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut values {
        *v /= norm;
    }
    // exact re-normalization within the loader's tolerance
    StateVector::from_real_amplitudes(&values).expect("normalized")
}
