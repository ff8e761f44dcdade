//! Encoding and variational circuit construction for the three QLR variants,
//! plus the quantum feature map and its parameter-shift Jacobian.
//!
//! Angle and re-uploading variants run on 8 qubits, amplitude encoding packs
//! the 8 features into a 3-qubit state. Every variational layer applies per
//! qubit an RY then an RZ rotation followed by an entangling block: a CZ ring
//! for angle/amplitude, an alternating brick pattern for re-uploading (odd
//! layers pair (0,1)(2,3)(4,5)(6,7), even layers (1,2)(3,4)(5,6)(7,0)), and
//! the final re-uploading layer carries no entangler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Gate, StateVector};

pub const N_FEATURES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    Angle,
    Amplitude,
    Reupload,
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EncodingKind::Angle => write!(f, "angle"),
            EncodingKind::Amplitude => write!(f, "amplitude"),
            EncodingKind::Reupload => write!(f, "reupload"),
        }
    }
}

/// Encoding choice plus the rotation scale used by the angle-based variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodingVariant {
    pub kind: EncodingKind,
    /// Radians per standardized-feature unit; ignored by amplitude encoding.
    pub alpha: f64,
}

impl EncodingVariant {
    pub fn angle(alpha: f64) -> Self {
        Self { kind: EncodingKind::Angle, alpha }
    }

    pub fn amplitude() -> Self {
        Self { kind: EncodingKind::Amplitude, alpha: 1.0 }
    }

    pub fn reupload(alpha: f64) -> Self {
        Self { kind: EncodingKind::Reupload, alpha }
    }

    pub fn n_qubits(&self) -> usize {
        match self.kind {
            EncodingKind::Angle | EncodingKind::Reupload => 8,
            EncodingKind::Amplitude => 3,
        }
    }
}

/// Trainable angles, shape depth × n_qubits × 2, flattened in
/// (layer, qubit, [RY, RZ]) order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalParams {
    n_qubits: usize,
    depth: usize,
    theta: Vec<f64>,
}

impl VariationalParams {
    pub fn new(n_qubits: usize, depth: usize, theta: Vec<f64>) -> Result<Self> {
        if depth < 1 {
            return Err(Error::Config(format!("depth must be >= 1, got {depth}")));
        }
        if theta.len() != depth * n_qubits * 2 {
            return Err(Error::Shape(format!(
                "expected {} angles for depth {depth} on {n_qubits} qubits, got {}",
                depth * n_qubits * 2,
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Data("non-finite variational angle".into()));
        }
        Ok(Self { n_qubits, depth, theta })
    }

    pub fn zeros(n_qubits: usize, depth: usize) -> Self {
        Self::new(n_qubits, depth, vec![0.0; depth * n_qubits * 2]).expect("valid shape")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    pub fn angles_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    /// Flat index of (layer, qubit, rotation) with rotation 0 = RY, 1 = RZ.
    pub fn index(&self, layer: usize, qubit: usize, rotation: usize) -> usize {
        (layer * self.n_qubits + qubit) * 2 + rotation
    }

    /// One layer's angles as a slice of length n_qubits × 2.
    pub fn layer(&self, layer: usize) -> &[f64] {
        let w = self.n_qubits * 2;
        &self.theta[layer * w..(layer + 1) * w]
    }
}

/// How the register is prepared before the gate list runs.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Zero,
    /// Normalized real amplitudes, used by amplitude encoding.
    Amplitudes(Vec<f64>),
}

/// An ordered gate program plus its initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub init: InitialState,
    pub gates: Vec<Gate>,
}

impl CircuitSpec {
    /// Runs the circuit from its initial state.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.n_qubits)?;
        self.simulate_into(&mut state)?;
        Ok(state)
    }

    /// Runs the circuit into an existing register of matching size.
    pub fn simulate_into(&self, state: &mut StateVector) -> Result<()> {
        match &self.init {
            InitialState::Zero => state.reset_zero(),
            InitialState::Amplitudes(v) => state.reset_real(v)?,
        }
        for gate in &self.gates {
            state.apply_gate(gate)?;
        }
        Ok(())
    }
}

/// Angle encoding: RY(alpha·x_i) on qubit i, one gate per feature.
pub fn encode_angle(x: &[f64; N_FEATURES], alpha: f64) -> Result<CircuitSpec> {
    check_finite(x)?;
    let gates = (0..N_FEATURES)
        .map(|i| Gate::RotY { qubit: i, angle: alpha * x[i] })
        .collect();
    Ok(CircuitSpec { n_qubits: 8, init: InitialState::Zero, gates })
}

/// L2-normalizes the feature vector for amplitude loading. Near-zero inputs
/// fall back to the uniform vector; the flag reports that degenerate case.
pub fn encode_amplitude(x: &[f64; N_FEATURES]) -> Result<([f64; N_FEATURES], bool)> {
    check_finite(x)?;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-9 {
        Ok(([1.0 / 8.0f64.sqrt(); N_FEATURES], true))
    } else {
        let mut out = [0.0; N_FEATURES];
        for (o, v) in out.iter_mut().zip(x) {
            *o = v / norm;
        }
        Ok((out, false))
    }
}

fn check_finite(x: &[f64; N_FEATURES]) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite feature value".into()));
    }
    Ok(())
}

/// CZ pairs for one entangling block.
fn entangler_pairs(variant: &EncodingVariant, layer_index: usize) -> Vec<(usize, usize)> {
    let n = variant.n_qubits();
    match variant.kind {
        EncodingKind::Angle | EncodingKind::Amplitude => {
            (0..n).map(|q| (q, (q + 1) % n)).collect()
        }
        EncodingKind::Reupload => {
            if layer_index % 2 == 1 {
                (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect()
            } else {
                (0..n / 2).map(|k| (2 * k + 1, (2 * k + 2) % n)).collect()
            }
        }
    }
}

/// One variational layer: RY then RZ per qubit, then the entangling block.
/// Re-uploading's final layer omits the entangler.
pub fn variational_block(
    theta_layer: &[f64],
    layer_index: usize,
    variant: &EncodingVariant,
    is_final_layer: bool,
) -> Result<CircuitSpec> {
    let n = variant.n_qubits();
    if theta_layer.len() != n * 2 {
        return Err(Error::Shape(format!(
            "layer needs {} angles on {n} qubits, got {}",
            n * 2,
            theta_layer.len()
        )));
    }
    let mut gates = Vec::with_capacity(3 * n);
    for q in 0..n {
        gates.push(Gate::RotY { qubit: q, angle: theta_layer[2 * q] });
        gates.push(Gate::RotZ { qubit: q, angle: theta_layer[2 * q + 1] });
    }
    let skip_entangler = variant.kind == EncodingKind::Reupload && is_final_layer;
    if !skip_entangler {
        for (a, b) in entangler_pairs(variant, layer_index) {
            gates.push(Gate::Cz { a, b });
        }
    }
    Ok(CircuitSpec { n_qubits: n, init: InitialState::Zero, gates })
}

/// Full circuit for one input: encoding followed by the variational layers,
/// with re-uploading re-applying the encoding before every layer.
pub fn assemble_circuit(
    x: &[f64; N_FEATURES],
    params: &VariationalParams,
    variant: &EncodingVariant,
) -> Result<CircuitSpec> {
    Ok(assemble_with_slots(x, params, variant)?.0)
}

/// As [`assemble_circuit`], additionally returning for each flat parameter
/// index the position of its rotation gate in the gate list.
pub fn assemble_with_slots(
    x: &[f64; N_FEATURES],
    params: &VariationalParams,
    variant: &EncodingVariant,
) -> Result<(CircuitSpec, Vec<usize>)> {
    let n = variant.n_qubits();
    if params.n_qubits() != n {
        return Err(Error::Shape(format!(
            "params built for {} qubits, variant uses {n}",
            params.n_qubits()
        )));
    }
    if params.depth() < 1 {
        return Err(Error::Config("depth must be >= 1".into()));
    }

    let depth = params.depth();
    let mut gates = Vec::new();
    let mut slots = vec![0usize; params.len()];
    let init;

    match variant.kind {
        EncodingKind::Angle => {
            init = InitialState::Zero;
            gates.extend(encode_angle(x, variant.alpha)?.gates);
        }
        EncodingKind::Amplitude => {
            let (values, _) = encode_amplitude(x)?;
            init = InitialState::Amplitudes(values.to_vec());
        }
        EncodingKind::Reupload => {
            init = InitialState::Zero;
        }
    }

    for l in 0..depth {
        if variant.kind == EncodingKind::Reupload {
            gates.extend(encode_angle(x, variant.alpha)?.gates);
        }
        let is_final = l + 1 == depth;
        let block = variational_block(params.layer(l), l + 1, variant, is_final)?;
        let base = gates.len();
        for q in 0..n {
            slots[params.index(l, q, 0)] = base + 2 * q;
            slots[params.index(l, q, 1)] = base + 2 * q + 1;
        }
        gates.extend(block.gates);
    }

    Ok((CircuitSpec { n_qubits: n, init, gates }, slots))
}

/// Per-sample evaluator reusing one register across repeated simulations,
/// which the parameter-shift Jacobian leans on heavily.
pub struct CircuitEvaluator {
    spec: CircuitSpec,
    slots: Vec<usize>,
    scratch: StateVector,
}

impl CircuitEvaluator {
    pub fn new(
        x: &[f64; N_FEATURES],
        params: &VariationalParams,
        variant: &EncodingVariant,
    ) -> Result<Self> {
        let (spec, slots) = assemble_with_slots(x, params, variant)?;
        let scratch = StateVector::zero(spec.n_qubits)?;
        Ok(Self { spec, slots, scratch })
    }

    pub fn features(&mut self) -> Result<Vec<f64>> {
        self.spec.simulate_into(&mut self.scratch)?;
        Ok(self.scratch.expectations_z())
    }

    /// Parameter-shift Jacobian J[q][j] = ∂z_q/∂θ_j, row-major n × P.
    /// Each parameter costs two shifted evaluations; encoding angles are
    /// fixed and never differentiated.
    pub fn jacobian(&mut self) -> Result<Vec<f64>> {
        let n = self.spec.n_qubits;
        let p_count = self.slots.len();
        let mut jac = vec![0.0; n * p_count];
        for j in 0..p_count {
            let slot = self.slots[j];
            let original = gate_angle(&self.spec.gates[slot]);
            set_gate_angle(&mut self.spec.gates[slot], original + std::f64::consts::FRAC_PI_2);
            self.spec.simulate_into(&mut self.scratch)?;
            let plus = self.scratch.expectations_z();
            set_gate_angle(&mut self.spec.gates[slot], original - std::f64::consts::FRAC_PI_2);
            self.spec.simulate_into(&mut self.scratch)?;
            let minus = self.scratch.expectations_z();
            set_gate_angle(&mut self.spec.gates[slot], original);
            for q in 0..n {
                jac[q * p_count + j] = (plus[q] - minus[q]) / 2.0;
            }
        }
        Ok(jac)
    }
}

fn gate_angle(gate: &Gate) -> f64 {
    match *gate {
        Gate::RotY { angle, .. } | Gate::RotZ { angle, .. } | Gate::ZzRot { angle, .. } => angle,
        _ => unreachable!("parameter slot points at a non-rotation gate"),
    }
}

fn set_gate_angle(gate: &mut Gate, value: f64) {
    match gate {
        Gate::RotY { angle, .. } | Gate::RotZ { angle, .. } | Gate::ZzRot { angle, .. } => {
            *angle = value;
        }
        _ => unreachable!("parameter slot points at a non-rotation gate"),
    }
}

/// z_q = ⟨Z_q⟩ on the assembled circuit's output state, for every qubit.
pub fn quantum_features(
    x: &[f64; N_FEATURES],
    params: &VariationalParams,
    variant: &EncodingVariant,
) -> Result<Vec<f64>> {
    CircuitEvaluator::new(x, params, variant)?.features()
}

/// Parameter-shift Jacobian of the feature map, row-major n × P.
pub fn feature_jacobian(
    x: &[f64; N_FEATURES],
    params: &VariationalParams,
    variant: &EncodingVariant,
) -> Result<Vec<f64>> {
    CircuitEvaluator::new(x, params, variant)?.jacobian()
}
