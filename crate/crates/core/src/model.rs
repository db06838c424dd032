//! Per-user log-linear (logistic) complexity model.
//!
//! The objective is the instance-weighted negative log-likelihood plus an L2
//! penalty on the weights (the bias is not penalized):
//!
//! ```text
//! J(w, b) = Σ_i s_i [ log(1 + e^{z_i}) - y_i z_i ] + λ/2 ‖w‖²,   z_i = w·x_i + b
//! ```
//!
//! It is minimized with damped Newton steps from a zero start. The feature
//! dimension is tiny, so each iteration is a single pass over the data plus a
//! (d+1)×(d+1) Cholesky solve.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::Label;
use crate::lexicon::{PoolStatistics, RawLexiconRecord};

pub const MODEL_FORMAT_VERSION: u32 = 1;
/// Probabilities are kept strictly inside (0, 1).
const P_MIN: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("training data is empty")]
    Empty,
    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("feature names differ from the pool's: {0:?}")]
    FeatureMismatch(Vec<String>),
    #[error("unsupported model format version {0}")]
    VersionMismatch(u32),
    #[error("invalid model record: {0}")]
    Invalid(String),
    #[error("model record is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Seed,
    Direct,
    Propagated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub word: String,
    pub features: Vec<f64>,
    pub label: Label,
    pub source: LabelSource,
    pub weight: f64,
}

impl LabeledInstance {
    pub fn new(word: impl Into<String>, features: Vec<f64>, label: Label, source: LabelSource) -> Self {
        LabeledInstance {
            word: word.into(),
            features,
            label,
            source,
            weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub regularization_strength: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            regularization_strength: 1.0,
            tolerance: 1e-9,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainedOn {
    pub seed: usize,
    pub direct: usize,
    pub propagated: usize,
}

impl TrainedOn {
    pub fn count(data: &[LabeledInstance]) -> Self {
        let mut t = TrainedOn::default();
        for inst in data {
            match inst.source {
                LabelSource::Seed => t.seed += 1,
                LabelSource::Direct => t.direct += 1,
                LabelSource::Propagated => t.propagated += 1,
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.seed + self.direct + self.propagated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonalModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(rename = "lambda")]
    pub regularization_strength: f64,
    pub normalization: PoolStatistics,
    pub trained_on: TrainedOn,
    #[serde(rename = "model_version")]
    pub version: u64,
    /// Single-class training data: weights are zero and the bias is the
    /// smoothed class prior.
    #[serde(default)]
    pub degenerate: bool,
}

impl PersonalModel {
    /// Zero weights and bias: every word scores 0.5.
    pub fn untrained(normalization: PoolStatistics, regularization_strength: f64) -> Self {
        PersonalModel {
            weights: vec![0.0; normalization.dim()],
            bias: 0.0,
            regularization_strength,
            normalization,
            trained_on: TrainedOn::default(),
            version: 0,
            degenerate: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn decision_value(&self, features: &[f64]) -> Result<f64> {
        if features.len() != self.weights.len() {
            return Err(ModelError::DimensionMismatch {
                expected: self.weights.len(),
                found: features.len(),
            });
        }
        Ok(dot(&self.weights, features) + self.bias)
    }

    pub fn predict_proba(&self, features: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.decision_value(features)?).clamp(P_MIN, 1.0 - P_MIN))
    }

    pub fn predict(&self, features: &[f64]) -> Result<Label> {
        Ok(Label::from_probability(self.predict_proba(features)?))
    }

    /// Scores an unnormalized record through the stored pool statistics.
    pub fn predict_record(&self, record: &RawLexiconRecord) -> f64 {
        let x = self.normalization.normalize_record(record);
        self.predict_proba(&x).expect("normalization matches weight dimension")
    }

    /// Parameters as `[w..., b]`.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.weights.clone();
        p.push(self.bias);
        p
    }
}

pub fn predict_proba(model: &PersonalModel, features: &[f64]) -> Result<f64> {
    model.predict_proba(features)
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dims(data: &[LabeledInstance], d: usize) -> Result<()> {
    for inst in data {
        if inst.features.len() != d {
            return Err(ModelError::DimensionMismatch {
                expected: d,
                found: inst.features.len(),
            });
        }
    }
    Ok(())
}

/// Regularized objective at `params = [w..., b]`.
pub fn objective(data: &[LabeledInstance], params: &[f64], lambda: f64) -> f64 {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let nll: f64 = data
        .iter()
        .map(|inst| {
            let z = dot(w, &inst.features) + b;
            inst.weight * (softplus(z) - inst.label.as_f64() * z)
        })
        .sum();
    nll + 0.5 * lambda * dot(w, w)
}

/// Exact gradient of [`objective`] with respect to `[w..., b]`.
pub fn gradient_at(data: &[LabeledInstance], params: &[f64], lambda: f64) -> Vec<f64> {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let mut g = vec![0.0; d + 1];
    for inst in data {
        let r = inst.weight * (sigmoid(dot(w, &inst.features) + b) - inst.label.as_f64());
        for (gj, xj) in g.iter_mut().zip(&inst.features) {
            *gj += r * xj;
        }
        g[d] += r;
    }
    for (gj, wj) in g.iter_mut().zip(w) {
        *gj += lambda * wj;
    }
    g
}

/// Gradient of the model's own objective on `data`.
pub fn gradient(data: &[LabeledInstance], model: &PersonalModel) -> Vec<f64> {
    gradient_at(data, &model.params(), model.regularization_strength)
}

fn hessian_at(data: &[LabeledInstance], params: &[f64], lambda: f64) -> Vec<f64> {
    let d = params.len() - 1;
    let n = d + 1;
    let (w, b) = (&params[..d], params[d]);
    let mut h = vec![0.0; n * n];
    let mut xt = vec![1.0; n];
    for inst in data {
        let p = sigmoid(dot(w, &inst.features) + b);
        let s = inst.weight * p * (1.0 - p);
        xt[..d].copy_from_slice(&inst.features);
        for i in 0..n {
            let si = s * xt[i];
            for j in 0..=i {
                h[i * n + j] += si * xt[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[j * n + i] = h[i * n + j];
        }
    }
    for i in 0..d {
        h[i * n + i] += lambda;
    }
    h
}

/// Solves `a x = rhs` for symmetric positive definite `a` (row-major, n×n).
fn cholesky_solve(a: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (rhs[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    Some(x)
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Diagnostics from one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct FitTrace {
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Objective value before each iteration, then the final value.
    pub losses: Vec<f64>,
}

/// Fits from zero weights.
pub fn fit(data: &[LabeledInstance], stats: &PoolStatistics, config: &FitConfig) -> Result<PersonalModel> {
    let init = vec![0.0; stats.dim() + 1];
    fit_from(data, stats, config, &init).map(|(m, _)| m)
}

/// Fits from an arbitrary starting point `[w..., b]`.
pub fn fit_from(
    data: &[LabeledInstance],
    stats: &PoolStatistics,
    config: &FitConfig,
    init: &[f64],
) -> Result<(PersonalModel, FitTrace)> {
    let d = stats.dim();
    if data.is_empty() {
        return Err(ModelError::Empty);
    }
    check_dims(data, d)?;
    if init.len() != d + 1 {
        return Err(ModelError::DimensionMismatch {
            expected: d + 1,
            found: init.len(),
        });
    }
    let trained_on = TrainedOn::count(data);
    let total_weight: f64 = data.iter().map(|i| i.weight).sum();
    let positive_weight: f64 = data.iter().filter(|i| i.label.is_complex()).map(|i| i.weight).sum();
    let single_class = data.iter().all(|i| i.label == data[0].label);
    if single_class {
        let p = (positive_weight + 1.0) / (total_weight + 2.0);
        let model = PersonalModel {
            weights: vec![0.0; d],
            bias: (p / (1.0 - p)).ln(),
            regularization_strength: config.regularization_strength,
            normalization: stats.clone(),
            trained_on,
            version: 1,
            degenerate: true,
        };
        let trace = FitTrace {
            iterations: 0,
            gradient_norm: f64::NAN,
            losses: Vec::new(),
        };
        return Ok((model, trace));
    }

    let lambda = config.regularization_strength;
    let mut theta = init.to_vec();
    let mut loss = objective(data, &theta, lambda);
    let mut losses = vec![loss];
    let mut g = gradient_at(data, &theta, lambda);
    let mut iterations = 0;
    while norm(&g) > config.tolerance && iterations < config.max_iterations {
        iterations += 1;
        let mut h = hessian_at(data, &theta, lambda);
        let step = match cholesky_solve(&h, &g) {
            Some(s) => s,
            None => {
                // Singular curvature (λ = 0 with collinear data): add a small ridge.
                let n = d + 1;
                for i in 0..n {
                    h[i * n + i] += 1e-8;
                }
                cholesky_solve(&h, &g).unwrap_or_else(|| g.clone())
            }
        };
        let slope = dot(&g, &step);
        // Near the optimum the predicted decrease drops below the rounding
        // error of the objective; a full Newton step is then taken as long as
        // the objective does not measurably grow.
        let rounding = 1e-13 * loss.abs().max(1.0);
        let negligible = 0.5 * slope <= rounding;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let candidate: Vec<f64> = theta.iter().zip(&step).map(|(p, s)| p - t * s).collect();
            let cand_loss = objective(data, &candidate, lambda);
            if cand_loss <= loss - 1e-4 * t * slope || (negligible && t == 1.0 && cand_loss <= loss + rounding) {
                accepted = Some((candidate, cand_loss));
                break;
            }
            t *= 0.5;
        }
        let Some((candidate, cand_loss)) = accepted else {
            break;
        };
        if candidate == theta {
            break;
        }
        theta = candidate;
        loss = cand_loss;
        losses.push(loss);
        g = gradient_at(data, &theta, lambda);
    }
    let model = PersonalModel {
        weights: theta[..d].to_vec(),
        bias: theta[d],
        regularization_strength: lambda,
        normalization: stats.clone(),
        trained_on,
        version: 1,
        degenerate: false,
    };
    let trace = FitTrace {
        iterations,
        gradient_norm: norm(&g),
        losses,
    };
    Ok((model, trace))
}

/// Portable model record. `session_id` and `seen_words` are filled in by the
/// session that produced the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub format_version: u32,
    pub feature_names: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub session_id: Option<String>,
    #[serde(default)]
    pub seen_words: Vec<String>,
    #[serde(flatten)]
    pub model: PersonalModel,
}

impl ModelRecord {
    pub fn new(model: PersonalModel) -> Self {
        ModelRecord {
            format_version: MODEL_FORMAT_VERSION,
            feature_names: model.normalization.feature_names.clone(),
            session_id: None,
            seen_words: Vec::new(),
            model,
        }
    }
}

pub fn export_model(record: &ModelRecord) -> String {
    serde_json::to_string_pretty(record).expect("model records serialize")
}

/// Parses and validates a model record.
pub fn import_model(text: &str) -> Result<ModelRecord> {
    let record: ModelRecord = serde_json::from_str(text)?;
    if record.format_version != MODEL_FORMAT_VERSION {
        return Err(ModelError::VersionMismatch(record.format_version));
    }
    let m = &record.model;
    let d = m.weights.len();
    let n = &m.normalization;
    for (what, len) in [
        ("feature_names", record.feature_names.len()),
        ("normalization.feature_names", n.feature_names.len()),
        ("normalization.mean", n.mean.len()),
        ("normalization.std", n.std.len()),
    ] {
        if len != d {
            return Err(ModelError::Invalid(format!("{what} has length {len}, weights have {d}")));
        }
    }
    if record.feature_names != n.feature_names {
        return Err(ModelError::Invalid("feature_names disagree with normalization".into()));
    }
    if n.std.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(ModelError::Invalid("normalization std must be positive".into()));
    }
    if m.weights.iter().chain([&m.bias]).chain(&n.mean).any(|v| !v.is_finite()) {
        return Err(ModelError::Invalid("non-finite parameter".into()));
    }
    Ok(record)
}

/// Imports a record and checks it against the pool it will score.
pub fn import_model_for(text: &str, stats: &PoolStatistics) -> Result<ModelRecord> {
    let record = import_model(text)?;
    if record.model.dim() != stats.dim() {
        return Err(ModelError::DimensionMismatch {
            expected: stats.dim(),
            found: record.model.dim(),
        });
    }
    if record.feature_names != stats.feature_names {
        return Err(ModelError::FeatureMismatch(record.feature_names));
    }
    Ok(record)
}
