//! Hybrid model: quantum feature map feeding a logistic head, trained jointly
//! with parameter-shift gradients for the circuit angles and closed-form
//! gradients for the weights and bias, under Adam with early stopping.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitEvaluator, EncodingVariant, VariationalParams, N_FEATURES};
use crate::error::{Error, Result};

pub const PROB_CLIP: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QlrModel {
    pub variant: EncodingVariant,
    pub params: VariationalParams,
    pub w: Vec<f64>,
    pub b: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience: usize,
    pub max_epochs: usize,
    pub validation_fraction: f64,
    pub seed: u64,
    /// Parallel per-sample evaluation; results are identical to the
    /// single-threaded path because contributions are reduced in index order.
    pub parallel: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            batch_size: 16,
            patience: 15,
            max_epochs: 200,
            validation_fraction: 0.2,
            seed: 0,
            parallel: false,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0
            || self.batch_size == 0
            || self.patience == 0
            || self.max_epochs == 0
        {
            return Err(Error::Config("training hyperparameters must be positive".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::Config(format!(
                "validation_fraction must lie in (0,1), got {}",
                self.validation_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct TrainHistory {
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    /// 1-based epoch with the lowest validation loss.
    pub best_epoch: usize,
    pub train_seconds: f64,
}

/// w·z + b.
pub fn decision_score(z: &[f64], w: &[f64], b: f64) -> Result<f64> {
    if z.len() != w.len() {
        return Err(Error::Shape(format!(
            "feature/weight length mismatch: {} vs {}",
            z.len(),
            w.len()
        )));
    }
    Ok(z.iter().zip(w).map(|(zi, wi)| zi * wi).sum::<f64>() + b)
}

/// Numerically stable logistic function. Outputs are clamped inside the open
/// interval (0, 1): saturation at large |score| stops one ulp short of the
/// endpoints instead of rounding onto them.
pub fn sigmoid(score: f64) -> f64 {
    let p = if score >= 0.0 {
        1.0 / (1.0 + (-score).exp())
    } else {
        let e = score.exp();
        e / (1.0 + e)
    };
    p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Mean binary cross-entropy with probabilities clipped away from {0, 1}.
pub fn bce_loss(probs: &[f64], labels: &[u8]) -> Result<f64> {
    if probs.len() != labels.len() {
        return Err(Error::Shape(format!(
            "probs/labels length mismatch: {} vs {}",
            probs.len(),
            labels.len()
        )));
    }
    if probs.is_empty() {
        return Err(Error::Data("empty loss input".into()));
    }
    let total: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(PROB_CLIP, 1.0 - PROB_CLIP);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    Ok(total / probs.len() as f64)
}

/// Gradient of the mean BCE over one batch with respect to (θ, w, b).
#[derive(Debug, Clone)]
pub struct Gradients {
    pub theta: Vec<f64>,
    pub w: Vec<f64>,
    pub b: f64,
}

struct SampleTerm {
    features: Vec<f64>,
    jacobian: Vec<f64>,
    prob: f64,
}

fn sample_term(x: &[f64; N_FEATURES], model: &QlrModel) -> Result<SampleTerm> {
    let mut eval = CircuitEvaluator::new(x, &model.params, &model.variant)?;
    let features = eval.features()?;
    let jacobian = eval.jacobian()?;
    let prob = sigmoid(decision_score(&features, &model.w, model.b)?);
    Ok(SampleTerm { features, jacobian, prob })
}

/// Batch gradients plus the batch mean loss; the chain rule runs through the
/// residual r_i = p_i − y_i and the parameter-shift Jacobian.
pub fn loss_gradients(
    batch_x: &[[f64; N_FEATURES]],
    batch_y: &[u8],
    model: &QlrModel,
    parallel: bool,
) -> Result<(Gradients, f64)> {
    if batch_x.len() != batch_y.len() {
        return Err(Error::Shape("batch feature/label mismatch".into()));
    }
    if batch_x.is_empty() {
        return Err(Error::Data("empty batch".into()));
    }

    let terms: Vec<SampleTerm> = if parallel {
        batch_x
            .par_iter()
            .map(|x| sample_term(x, model))
            .collect::<Result<Vec<_>>>()?
    } else {
        batch_x
            .iter()
            .map(|x| sample_term(x, model))
            .collect::<Result<Vec<_>>>()?
    };

    let n = model.variant.n_qubits();
    let p_count = model.params.len();
    let inv_b = 1.0 / batch_x.len() as f64;
    let mut grad = Gradients {
        theta: vec![0.0; p_count],
        w: vec![0.0; n],
        b: 0.0,
    };
    let mut loss = 0.0;
    for (term, &y) in terms.iter().zip(batch_y) {
        let r = term.prob - f64::from(y);
        grad.b += r * inv_b;
        for q in 0..n {
            grad.w[q] += r * term.features[q] * inv_b;
        }
        for j in 0..p_count {
            let mut chained = 0.0;
            for q in 0..n {
                chained += model.w[q] * term.jacobian[q * p_count + j];
            }
            grad.theta[j] += r * chained * inv_b;
        }
        let p = term.prob.clamp(PROB_CLIP, 1.0 - PROB_CLIP);
        loss += if y == 1 { -p.ln() } else { -(1.0 - p).ln() } * inv_b;
    }
    Ok((grad, loss))
}

/// Adam with standard bias correction over one flat parameter vector.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(n_params: usize, learning_rate: f64) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        debug_assert_eq!(params.len(), grads.len());
        debug_assert_eq!(params.len(), self.m.len());
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

/// Patience-based stopping on validation loss: a strict decrease below the
/// best value so far resets the counter, anything else advances it.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    best: f64,
    stale_epochs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Improved,
    Continue,
    Stop,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        Self { patience, best: f64::INFINITY, stale_epochs: 0 }
    }

    pub fn observe(&mut self, val_loss: f64) -> StopDecision {
        if val_loss < self.best {
            self.best = val_loss;
            self.stale_epochs = 0;
            StopDecision::Improved
        } else {
            self.stale_epochs += 1;
            if self.stale_epochs >= self.patience {
                StopDecision::Stop
            } else {
                StopDecision::Continue
            }
        }
    }
}

/// Stratified index split used for the internal fit/validation partition;
/// per-class validation counts are round(fraction × class size).
fn stratified_holdout(
    labels: &[u8],
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut fit = Vec::new();
    let mut val = Vec::new();
    for class in [0u8, 1u8] {
        let mut idx: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == class)
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(rng);
        let n_val = ((idx.len() as f64) * fraction).round() as usize;
        let n_val = n_val.min(idx.len());
        val.extend_from_slice(&idx[..n_val]);
        fit.extend_from_slice(&idx[n_val..]);
    }
    fit.sort_unstable();
    val.sort_unstable();
    (fit, val)
}

fn forward_probs(
    xs: &[[f64; N_FEATURES]],
    model: &QlrModel,
    parallel: bool,
) -> Result<Vec<f64>> {
    let eval_one = |x: &[f64; N_FEATURES]| -> Result<f64> {
        let mut eval = CircuitEvaluator::new(x, &model.params, &model.variant)?;
        let z = eval.features()?;
        Ok(sigmoid(decision_score(&z, &model.w, model.b)?))
    };
    if parallel {
        xs.par_iter().map(eval_one).collect()
    } else {
        xs.iter().map(eval_one).collect()
    }
}

/// Trains a QLR model on standardized features with {0,1} labels.
///
/// The subset is split into fit/validation parts stratified by label, θ is
/// initialized uniformly on [−π, π] from the seeded generator with w = b = 0,
/// and mini-batches of `batch_size` run under Adam. Training stops when the
/// validation loss has not decreased for `patience` consecutive epochs or at
/// `max_epochs`; the returned parameters are those of the best epoch.
pub fn fit(
    train_x: &[[f64; N_FEATURES]],
    train_y: &[u8],
    config: &TrainConfig,
    variant: &EncodingVariant,
    depth: usize,
) -> Result<(QlrModel, TrainHistory)> {
    config.validate()?;
    if train_x.len() != train_y.len() {
        return Err(Error::Shape("feature/label length mismatch".into()));
    }
    let n_pos = train_y.iter().filter(|&&y| y == 1).count();
    if n_pos == 0 || n_pos == train_y.len() {
        return Err(Error::Data("training subset contains a single class".into()));
    }

    let started = Instant::now();
    let n = variant.n_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let (fit_idx, val_idx) = stratified_holdout(train_y, config.validation_fraction, &mut rng);
    if fit_idx.is_empty() || val_idx.is_empty() {
        return Err(Error::Data("fit/validation split left an empty part".into()));
    }
    let val_x: Vec<[f64; N_FEATURES]> = val_idx.iter().map(|&i| train_x[i]).collect();
    let val_y: Vec<u8> = val_idx.iter().map(|&i| train_y[i]).collect();

    let theta: Vec<f64> = (0..depth * n * 2)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    let mut model = QlrModel {
        variant: *variant,
        params: VariationalParams::new(n, depth, theta)?,
        w: vec![0.0; n],
        b: 0.0,
        seed: config.seed,
    };

    let p_count = model.params.len();
    let mut adam = AdamState::new(p_count + n + 1, config.learning_rate);
    let mut history = TrainHistory::default();
    let mut stopper = EarlyStopping::new(config.patience);
    let mut best_snapshot = model.clone();
    let mut order: Vec<usize> = fit_idx.clone();

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut seen = 0usize;
        for chunk in order.chunks(config.batch_size) {
            let bx: Vec<[f64; N_FEATURES]> = chunk.iter().map(|&i| train_x[i]).collect();
            let by: Vec<u8> = chunk.iter().map(|&i| train_y[i]).collect();
            let (grads, batch_loss) = loss_gradients(&bx, &by, &model, config.parallel)?;

            let mut flat_params = Vec::with_capacity(p_count + n + 1);
            flat_params.extend_from_slice(model.params.angles());
            flat_params.extend_from_slice(&model.w);
            flat_params.push(model.b);
            let mut flat_grads = Vec::with_capacity(p_count + n + 1);
            flat_grads.extend_from_slice(&grads.theta);
            flat_grads.extend_from_slice(&grads.w);
            flat_grads.push(grads.b);
            adam.step(&mut flat_params, &flat_grads);
            model
                .params
                .angles_mut()
                .copy_from_slice(&flat_params[..p_count]);
            model.w.copy_from_slice(&flat_params[p_count..p_count + n]);
            model.b = flat_params[p_count + n];

            epoch_loss += batch_loss * chunk.len() as f64;
            seen += chunk.len();
        }
        history.train_loss.push(epoch_loss / seen as f64);

        let val_probs = forward_probs(&val_x, &model, config.parallel)?;
        let val_loss = bce_loss(&val_probs, &val_y)?;
        history.val_loss.push(val_loss);

        match stopper.observe(val_loss) {
            StopDecision::Improved => {
                best_snapshot = model.clone();
                history.best_epoch = epoch;
            }
            StopDecision::Continue => {}
            StopDecision::Stop => break,
        }
    }

    history.train_seconds = started.elapsed().as_secs_f64();
    Ok((best_snapshot, history))
}

/// σ(w·z(x) + b) per row.
pub fn predict_proba(
    model: &QlrModel,
    xs: &[[f64; N_FEATURES]],
    parallel: bool,
) -> Result<Vec<f64>> {
    forward_probs(xs, model, parallel)
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    variant: String,
    depth: usize,
    alpha: f64,
    theta: Vec<f64>,
    w: Vec<f64>,
    b: f64,
    seed: u64,
}

pub fn save_model(model: &QlrModel, path: &Path) -> Result<()> {
    let doc = ModelDocument {
        variant: model.variant.kind.to_string(),
        depth: model.params.depth(),
        alpha: model.variant.alpha,
        theta: model.params.angles().to_vec(),
        w: model.w.clone(),
        b: model.b,
        seed: model.seed,
    };
    let mut file = std::fs::File::create(path)?;
    file.write_all(serde_json::to_string_pretty(&doc)?.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<QlrModel> {
    let text = std::fs::read_to_string(path)?;
    let doc: ModelDocument = serde_json::from_str(&text)?;
    let variant = match doc.variant.as_str() {
        "angle" => EncodingVariant::angle(doc.alpha),
        "amplitude" => EncodingVariant::amplitude(),
        "reupload" => EncodingVariant::reupload(doc.alpha),
        other => return Err(Error::Format(format!("unknown encoding variant '{other}'"))),
    };
    let params = VariationalParams::new(variant.n_qubits(), doc.depth, doc.theta)?;
    if doc.w.len() != variant.n_qubits() {
        return Err(Error::Shape(format!(
            "weight vector length {} does not match {}-qubit variant",
            doc.w.len(),
            variant.n_qubits()
        )));
    }
    Ok(QlrModel {
        variant,
        params,
        w: doc.w,
        b: doc.b,
        seed: doc.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decision_score_examples() {
        assert_eq!(decision_score(&[0.4, -0.2], &[0.0, 0.0], 0.0).unwrap(), 0.0);
        assert_eq!(decision_score(&[0.5, 0.9], &[1.0, 0.0], 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(
            decision_score(&[0.3, 0.7], &[1.0, 1.0], -1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(decision_score(&[0.1], &[1.0, 2.0], 0.0).is_err());
    }

    #[test]
    fn sigmoid_examples() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(40.0) >= 1.0 - 1e-15 && sigmoid(40.0) < 1.0);
        assert!(sigmoid(-745.0) >= 0.0);
        for s in [-3.0, -0.5, 0.0, 1.2, 8.0] {
            assert_abs_diff_eq!(sigmoid(s) + sigmoid(-s), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn bce_examples() {
        let perfect = bce_loss(&[1.0, 0.0], &[1, 0]).unwrap();
        assert!(perfect < 1e-10);

        let half = bce_loss(&[0.5, 0.5, 0.5], &[1, 0, 1]).unwrap();
        assert_abs_diff_eq!(half, std::f64::consts::LN_2, epsilon = 1e-12);

        let v = bce_loss(&[0.9, 0.1], &[1, 0]).unwrap();
        assert_abs_diff_eq!(v, -(0.9f64.ln()), epsilon = 1e-12);

        assert!(bce_loss(&[0.5], &[1, 0]).is_err());
    }

    fn toy_model(depth: usize, variant: EncodingVariant, seed: u64) -> QlrModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = variant.n_qubits();
        let theta = (0..depth * n * 2)
            .map(|_| rng.random_range(-1.5..1.5))
            .collect();
        QlrModel {
            variant,
            params: VariationalParams::new(n, depth, theta).unwrap(),
            w: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            b: 0.2,
            seed,
        }
    }

    fn full_loss(
        batch_x: &[[f64; N_FEATURES]],
        batch_y: &[u8],
        model: &QlrModel,
    ) -> f64 {
        let probs = predict_proba(model, batch_x, false).unwrap();
        bce_loss(&probs, batch_y).unwrap()
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let batch_x: Vec<[f64; N_FEATURES]> = (0..4)
            .map(|_| std::array::from_fn(|_| rng.random_range(-1.5..1.5)))
            .collect();
        let batch_y = vec![1, 0, 0, 1];
        let h = 1e-5;

        let cases = [
            (EncodingVariant::amplitude(), 1usize),
            (EncodingVariant::amplitude(), 2),
            (EncodingVariant::angle(1.0), 1),
            (EncodingVariant::angle(1.0), 2),
            (EncodingVariant::reupload(1.0), 1),
            (EncodingVariant::reupload(1.0), 2),
        ];
        for (variant, depth) in cases {
            let model = toy_model(depth, variant, 17);
            let (grads, _) = loss_gradients(&batch_x, &batch_y, &model, false).unwrap();

            for j in 0..model.params.len() {
                let mut plus = model.clone();
                plus.params.angles_mut()[j] += h;
                let mut minus = model.clone();
                minus.params.angles_mut()[j] -= h;
                let fd = (full_loss(&batch_x, &batch_y, &plus)
                    - full_loss(&batch_x, &batch_y, &minus))
                    / (2.0 * h);
                assert_abs_diff_eq!(grads.theta[j], fd, epsilon = 1e-6);
            }
            for k in 0..model.w.len() {
                let mut plus = model.clone();
                plus.w[k] += h;
                let mut minus = model.clone();
                minus.w[k] -= h;
                let fd = (full_loss(&batch_x, &batch_y, &plus)
                    - full_loss(&batch_x, &batch_y, &minus))
                    / (2.0 * h);
                assert_abs_diff_eq!(grads.w[k], fd, epsilon = 1e-6);
            }
            let mut plus = model.clone();
            plus.b += h;
            let mut minus = model.clone();
            minus.b -= h;
            let fd = (full_loss(&batch_x, &batch_y, &plus) - full_loss(&batch_x, &batch_y, &minus))
                / (2.0 * h);
            assert_abs_diff_eq!(grads.b, fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn zero_weights_zero_theta_gradient() {
        let mut model = toy_model(2, EncodingVariant::amplitude(), 5);
        model.w = vec![0.0; 3];
        let batch_x = vec![[0.4; N_FEATURES], [-0.3; N_FEATURES]];
        let (grads, _) = loss_gradients(&batch_x, &[1, 0], &model, false).unwrap();
        assert!(grads.theta.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn adam_examples() {
        // zero gradient leaves parameters untouched
        let mut adam = AdamState::new(2, 0.01);
        let mut params = vec![0.3, -0.4];
        adam.step(&mut params, &[0.0, 0.0]);
        assert_eq!(params, vec![0.3, -0.4]);

        // first step moves by ≈ lr·sign(g)
        let mut adam = AdamState::new(1, 0.01);
        let mut params = vec![1.0];
        adam.step(&mut params, &[2.5]);
        assert_abs_diff_eq!(params[0], 1.0 - 0.01, epsilon = 1e-6);

        // steps on f(x) = x² reduce the loss
        let mut adam = AdamState::new(1, 0.1);
        let mut x = vec![1.0];
        let f = |x: f64| x * x;
        let start = f(x[0]);
        for _ in 0..2 {
            let g = 2.0 * x[0];
            adam.step(&mut x, &[g]);
        }
        assert!(f(x[0]) < start);
    }

    fn separable_toy() -> (Vec<[f64; N_FEATURES]>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..40 {
            let y = (i % 2) as u8;
            let center = if y == 1 { 1.2 } else { -1.2 };
            let mut x = [0.0; N_FEATURES];
            x[0] = center + rng.random_range(-0.3..0.3);
            x[1] = center + rng.random_range(-0.3..0.3);
            xs.push(x);
            ys.push(y);
        }
        (xs, ys)
    }

    #[test]
    fn fit_learns_separable_toy_data() {
        let (xs, ys) = separable_toy();
        let config = TrainConfig {
            max_epochs: 60,
            seed: 1,
            ..TrainConfig::default()
        };
        let variant = EncodingVariant::angle(1.0);
        let (model, history) = fit(&xs, &ys, &config, &variant, 1).unwrap();

        for w in history.train_loss.windows(2).take(5) {
            assert!(w[1] < w[0], "training loss should fall early: {:?}", &history.train_loss[..6]);
        }

        let probs = predict_proba(&model, &xs, false).unwrap();
        let correct = probs
            .iter()
            .zip(&ys)
            .filter(|(&p, &y)| (p >= 0.5) == (y == 1))
            .count();
        assert_eq!(correct, xs.len());
    }

    #[test]
    fn constant_validation_loss_stops_within_patience() {
        let mut stopper = EarlyStopping::new(15);
        assert_eq!(stopper.observe(0.7), StopDecision::Improved);
        for epoch in 2..=15 {
            assert_eq!(stopper.observe(0.7), StopDecision::Continue, "epoch {epoch}");
        }
        assert_eq!(stopper.observe(0.7), StopDecision::Stop);

        // a strict decrease resets the counter
        let mut stopper = EarlyStopping::new(3);
        stopper.observe(0.9);
        stopper.observe(0.9);
        assert_eq!(stopper.observe(0.85), StopDecision::Improved);
        stopper.observe(0.85);
        stopper.observe(0.85);
        assert_eq!(stopper.observe(0.85), StopDecision::Stop);
    }

    #[test]
    fn best_epoch_has_minimal_validation_loss() {
        let (xs, ys) = separable_toy();
        let config = TrainConfig {
            max_epochs: 200,
            seed: 3,
            ..TrainConfig::default()
        };
        // constant inputs freeze the quantum features, so only (w, b) learn
        // and validation loss flattens out quickly
        let frozen: Vec<[f64; N_FEATURES]> = vec![[0.0; N_FEATURES]; xs.len()];
        let (_, history) = fit(&frozen, &ys, &config, &EncodingVariant::angle(1.0), 1).unwrap();
        assert!(history.val_loss.len() < 200);

        let best_loss = history.val_loss[history.best_epoch - 1];
        for &v in &history.val_loss {
            assert!(best_loss <= v + 1e-15);
        }
    }

    #[test]
    fn fit_is_deterministic_per_seed() {
        let (xs, ys) = separable_toy();
        let config = TrainConfig {
            max_epochs: 8,
            seed: 42,
            ..TrainConfig::default()
        };
        let variant = EncodingVariant::amplitude();
        let (m1, h1) = fit(&xs, &ys, &config, &variant, 2).unwrap();
        let (m2, h2) = fit(&xs, &ys, &config, &variant, 2).unwrap();
        assert_eq!(m1.params.angles(), m2.params.angles());
        assert_eq!(m1.w, m2.w);
        assert_eq!(m1.b, m2.b);
        assert_eq!(h1.train_loss, h2.train_loss);
        assert_eq!(h1.val_loss, h2.val_loss);

        let parallel_cfg = TrainConfig { parallel: true, ..config };
        let (m3, _) = fit(&xs, &ys, &parallel_cfg, &variant, 2).unwrap();
        assert_eq!(m1.params.angles(), m3.params.angles());
        assert_eq!(m1.w, m3.w);
    }

    #[test]
    fn fit_rejects_single_class() {
        let xs = vec![[0.1; N_FEATURES]; 10];
        let ys = vec![1u8; 10];
        assert!(matches!(
            fit(&xs, &ys, &TrainConfig::default(), &EncodingVariant::angle(1.0), 1),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn predict_proba_examples() {
        let mut model = toy_model(1, EncodingVariant::amplitude(), 8);
        model.w = vec![0.0; 3];
        model.b = 0.0;
        let xs = vec![[0.5; N_FEATURES], [-1.0; N_FEATURES]];
        let probs = predict_proba(&model, &xs, false).unwrap();
        assert!(probs.iter().all(|&p| p == 0.5));

        // raising the bias raises every probability
        model.b = 0.3;
        let higher = predict_proba(&model, &xs, false).unwrap();
        for (h, p) in higher.iter().zip(&probs) {
            assert!(h > p);
        }
        assert!(higher.iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn model_roundtrip() {
        let model = toy_model(2, EncodingVariant::reupload(0.8), 12);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(model.params.angles(), loaded.params.angles());
        assert_eq!(model.w, loaded.w);
        assert_eq!(model.b, loaded.b);
        assert_eq!(model.variant, loaded.variant);
        assert_eq!(model.seed, loaded.seed);
    }
}
