use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_finite, check_width, validate_training_data};
use crate::error::Result;
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub l2_penalty: f64,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self { l2_penalty: 1e-4, epochs: 500, learning_rate: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub l2_penalty: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

fn linear(coefficients: &[f64], intercept: f64, row: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let chunks = coefficients.chunks_exact(4);
    let tail = chunks.remainder().len();
    for (w, x) in chunks.zip(row.chunks_exact(4)) {
        for k in 0..4 {
            acc[k] += w[k] * x[k];
        }
    }
    let d = coefficients.len();
    let rest: f64 = coefficients[d - tail..].iter().zip(&row[d - tail..]).map(|(w, x)| w * x).sum();
    intercept + (acc[0] + acc[1]) + (acc[2] + acc[3]) + rest
}

/// Mean log-loss plus `l2 · ‖w‖² / 2` (the intercept is not penalized).
pub fn logistic_loss(coefficients: &[f64], intercept: f64, x: &Matrix, y: &[u8], l2: f64) -> f64 {
    let n = x.rows() as f64;
    let data: f64 = (0..x.rows())
        .map(|i| {
            let z = linear(coefficients, intercept, x.row(i));
            // -[y ln σ(z) + (1-y) ln(1-σ(z))] = softplus(z) - y z
            softplus(z) - f64::from(y[i]) * z
        })
        .sum();
    data / n + 0.5 * l2 * coefficients.iter().map(|w| w * w).sum::<f64>()
}

/// Analytic gradient of [`logistic_loss`]: `(∂/∂w, ∂/∂b)`.
pub fn logistic_gradient(coefficients: &[f64], intercept: f64, x: &Matrix, y: &[u8], l2: f64) -> (Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut gw = vec![0.0; coefficients.len()];
    let mut gb = 0.0;
    for i in 0..x.rows() {
        let row = x.row(i);
        let r = sigmoid(linear(coefficients, intercept, row)) - f64::from(y[i]);
        gb += r;
        for (g, v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    for (g, w) in gw.iter_mut().zip(coefficients) {
        *g = *g / n + l2 * w;
    }
    (gw, gb / n)
}

pub fn train_logistic(x: &Matrix, y: &[u8], params: &LogisticParams) -> Result<LogisticModel> {
    descend(x, y, params, None)
}

/// Full-batch gradient descent from zero. Step `t` (1-based) is
/// `min(learning_rate, 1/L) / √t` where `L = ¼·mean(1 + ‖x‖²) + l2`
/// bounds the loss curvature, so every step decreases the loss.
/// Returns the model and the loss after each epoch.
pub fn train_logistic_with_history(x: &Matrix, y: &[u8], params: &LogisticParams) -> Result<(LogisticModel, Vec<f64>)> {
    let mut history = Vec::with_capacity(params.epochs);
    let model = descend(x, y, params, Some(&mut history))?;
    Ok((model, history))
}

fn descend(x: &Matrix, y: &[u8], params: &LogisticParams, mut history: Option<&mut Vec<f64>>) -> Result<LogisticModel> {
    validate_training_data(x, y)?;
    let n = x.rows() as f64;
    let curvature = 0.25 * (0..x.rows()).map(|i| 1.0 + x.row(i).iter().map(|v| v * v).sum::<f64>()).sum::<f64>() / n
        + params.l2_penalty;
    let base = params.learning_rate.min(1.0 / curvature);
    let mut w = vec![0.0; x.cols()];
    let mut b = 0.0;
    for t in 1..=params.epochs {
        let step = base / libm::sqrt(t as f64);
        let (gw, gb) = logistic_gradient(&w, b, x, y, params.l2_penalty);
        for (wi, gi) in w.iter_mut().zip(&gw) {
            *wi -= step * gi;
        }
        b -= step * gb;
        if let Some(h) = history.as_deref_mut() {
            h.push(logistic_loss(&w, b, x, y, params.l2_penalty));
        }
    }
    Ok(LogisticModel { coefficients: w, intercept: b, l2_penalty: params.l2_penalty })
}

/// Column 1 is `σ(x·w + b)`, column 0 its complement.
pub fn predict_proba_logistic(model: &LogisticModel, x: &Matrix) -> Result<Vec<[f64; 2]>> {
    check_width(x, model.coefficients.len())?;
    check_finite(x)?;
    Ok((0..x.rows())
        .map(|i| {
            let p1 = sigmoid(linear(&model.coefficients, model.intercept, x.row(i)));
            [1.0 - p1, p1]
        })
        .collect())
}
