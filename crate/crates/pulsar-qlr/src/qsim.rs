//! Dense statevector simulator for up to [`MAX_QUBITS`] qubits.
//!
//! The register holds 2^n complex amplitudes. Basis index `i` is read with
//! qubit 0 as the most significant bit, so for n = 3 the index 0b100 means
//! qubit 0 is |1⟩ and qubits 1, 2 are |0⟩. All gates preserve the norm to
//! machine precision; there is no measurement sampling, expectation values
//! are exact.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 8;

/// Gate set needed by the encoding, variational, and kernel circuits.
///
/// Conventions:
/// - `RotY(θ)` = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]
/// - `RotZ(θ)` = diag(e^{−iθ/2}, e^{+iθ/2})
/// - `Cz` = diag(1, 1, 1, −1)
/// - `ZzRot(θ)` = exp(−iθ/2 · Z⊗Z): equal bits pick up e^{−iθ/2}, unequal e^{+iθ/2}
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    RotY { qubit: usize, angle: f64 },
    RotZ { qubit: usize, angle: f64 },
    Hadamard { qubit: usize },
    Cz { a: usize, b: usize },
    ZzRot { a: usize, b: usize, angle: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0⟩^⊗n.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits < 1 || n_qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[0] = Complex64::ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Builds a state from real amplitudes, e.g. a normalized feature vector.
    ///
    /// The length must be a power of two in [2, 256] and the L2 norm must be
    /// within 1e-9 of one; normalization is the caller's job.
    pub fn from_real_amplitudes(values: &[f64]) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() || len < 2 || len > 1 << MAX_QUBITS {
            return Err(Error::Shape(format!(
                "amplitude count must be a power of two in [2, {}], got {len}",
                1 << MAX_QUBITS
            )));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization(format!(
                "amplitude vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amps: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Resets to |0⟩^⊗n without reallocating.
    pub fn reset_zero(&mut self) {
        self.amps.fill(Complex64::ZERO);
        self.amps[0] = Complex64::ONE;
    }

    /// Resets to the given real amplitudes; length must match the register.
    pub fn reset_real(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.amps.len() {
            return Err(Error::Shape(format!(
                "expected {} amplitudes, got {}",
                self.amps.len(),
                values.len()
            )));
        }
        for (a, &v) in self.amps.iter_mut().zip(values) {
            *a = Complex64::new(v, 0.0);
        }
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} out of range for {}-qubit register",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Index(format!("two-qubit gate targets must differ, got ({a}, {a})")));
        }
        Ok(())
    }

    /// Bit mask selecting the given qubit inside a basis index.
    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies a real 2x2 matrix [[m00, m01], [m10, m11]] to one qubit.
    #[inline]
    fn apply_real_2x2(&mut self, qubit: usize, m00: f64, m01: f64, m10: f64, m11: f64) {
        let step = self.mask(qubit);
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + step {
                let j = i + step;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                self.amps[i] = Complex64::new(
                    m00 * a0.re + m01 * a1.re,
                    m00 * a0.im + m01 * a1.im,
                );
                self.amps[j] = Complex64::new(
                    m10 * a0.re + m11 * a1.re,
                    m10 * a0.im + m11 * a1.im,
                );
            }
            base += 2 * step;
        }
    }

    pub fn apply_rot_y(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let (s, c) = (angle / 2.0).sin_cos();
        self.apply_real_2x2(qubit, c, -s, s, c);
        Ok(())
    }

    pub fn apply_rot_z(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let phase0 = Complex64::from_polar(1.0, -angle / 2.0);
        let phase1 = Complex64::from_polar(1.0, angle / 2.0);
        let mask = self.mask(qubit);
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & mask == 0 { phase0 } else { phase1 };
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        self.apply_real_2x2(qubit, h, h, h, -h);
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        let both = self.mask(a) | self.mask(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn apply_zz_rotation(&mut self, a: usize, b: usize, angle: f64) -> Result<()> {
        self.check_pair(a, b)?;
        let equal = Complex64::from_polar(1.0, -angle / 2.0);
        let unequal = Complex64::from_polar(1.0, angle / 2.0);
        let (ma, mb) = (self.mask(a), self.mask(b));
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let same = (i & ma == 0) == (i & mb == 0);
            *amp *= if same { equal } else { unequal };
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::RotY { qubit, angle } => self.apply_rot_y(qubit, angle),
            Gate::RotZ { qubit, angle } => self.apply_rot_z(qubit, angle),
            Gate::Hadamard { qubit } => self.apply_hadamard(qubit),
            Gate::Cz { a, b } => self.apply_cz(a, b),
            Gate::ZzRot { a, b, angle } => self.apply_zz_rotation(a, b, angle),
        }
    }

    /// ⟨Z_q⟩ = Σ_i |a_i|² · (+1 if bit q of i is 0, else −1).
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            acc += if i & mask == 0 { p } else { -p };
        }
        Ok(acc)
    }

    /// All single-qubit Z expectations, in qubit order.
    pub fn expectations_z(&self) -> Vec<f64> {
        (0..self.n_qubits)
            .map(|q| self.expectation_z(q).expect("qubit in range"))
            .collect()
    }
}

/// |⟨b|a⟩|².
pub fn overlap_sq(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Shape(format!(
            "register mismatch: {} vs {} qubits",
            a.n_qubits, b.n_qubits
        )));
    }
    let inner: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| y.conj() * x)
        .sum();
    Ok(inner.norm_sqr())
}
