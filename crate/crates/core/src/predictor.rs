//! One-hidden-layer feed-forward predictor of per-node event probabilities.
//!
//! Forward pass: `p = sigmoid(W2' * tanh(W1' * x + b1) + b2)`. Training
//! minimizes mean per-sample binary cross-entropy summed over nodes, plus
//! an L2 penalty on both weight matrices (biases unpenalized), by plain
//! seeded mini-batch gradient descent.

use crate::error::{Error, Result};
use crate::traffic::{Dataset, Sample};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Probabilities are clamped to `[CLAMP, 1 - CLAMP]` before taking logs so
/// a saturated sigmoid cannot produce an infinite loss.
const CLAMP: f64 = 1e-12;

/// Dense row-major matrix. Small enough networks that hand-rolled loops
/// beat pulling in a linear-algebra dependency.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

/// Weights and biases of the two-layer network.
///
/// `w1` is `(N*L) x H`, `w2` is `H x N`; both stored row-major so the
/// forward pass walks them with unit stride.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorModel {
    pub w1: Mat,
    pub b1: Vec<f64>,
    pub w2: Mat,
    pub b2: Vec<f64>,
}

impl PredictorModel {
    pub fn input_dim(&self) -> usize {
        self.w1.rows
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.cols
    }

    pub fn output_dim(&self) -> usize {
        self.w2.cols
    }

    pub fn all_finite(&self) -> bool {
        self.w1.data.iter().all(|v| v.is_finite())
            && self.b1.iter().all(|v| v.is_finite())
            && self.w2.data.iter().all(|v| v.is_finite())
            && self.b2.iter().all(|v| v.is_finite())
    }

    /// Versioned flat text serialization: a header, the dims, then the four
    /// parameter blocks row-major, one row per line. Values are printed with
    /// Rust's shortest round-trip float formatting, so load(save(m)) == m
    /// bit for bit.
    pub fn save<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "eei-bma-model v1")?;
        writeln!(
            out,
            "dims {} {} {}",
            self.input_dim(),
            self.hidden_dim(),
            self.output_dim()
        )?;
        let write_block = |out: &mut W, name: &str, rows: usize, cols: usize, data: &[f64]| {
            writeln!(out, "{name}")?;
            for r in 0..rows {
                let row: Vec<String> = (0..cols).map(|c| data[r * cols + c].to_string()).collect();
                writeln!(out, "{}", row.join(" "))?;
            }
            std::io::Result::Ok(())
        };
        write_block(out, "w1", self.w1.rows, self.w1.cols, &self.w1.data)?;
        write_block(out, "b1", 1, self.b1.len(), &self.b1)?;
        write_block(out, "w2", self.w2.rows, self.w2.cols, &self.w2.data)?;
        write_block(out, "b2", 1, self.b2.len(), &self.b2)?;
        Ok(())
    }

    pub fn load<R: BufRead>(input: &mut R) -> Result<Self> {
        let mut lines = input.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("model file truncated before {what}")))?
                .map_err(Error::Io)
        };
        let header = next("header")?;
        if header.trim() != "eei-bma-model v1" {
            return Err(Error::Parse(format!("unknown model header {header:?}")));
        }
        let dims_line = next("dims")?;
        let dims: Vec<usize> = dims_line
            .trim()
            .strip_prefix("dims")
            .ok_or_else(|| Error::Parse("missing dims line".into()))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad dim: {e}"))))
            .collect::<Result<_>>()?;
        if dims.len() != 3 {
            return Err(Error::Parse("dims line must have 3 entries".into()));
        }
        let (d_in, d_hidden, d_out) = (dims[0], dims[1], dims[2]);
        let mut read_block = |name: &str, rows: usize, cols: usize| -> Result<Vec<f64>> {
            let tag = next(name)?;
            if tag.trim() != name {
                return Err(Error::Parse(format!(
                    "expected block {name:?}, found {tag:?}"
                )));
            }
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let line = next(name)?;
                for tok in line.split_whitespace() {
                    data.push(
                        tok.parse()
                            .map_err(|e| Error::Parse(format!("bad value in {name}: {e}")))?,
                    );
                }
            }
            if data.len() != rows * cols {
                return Err(Error::Parse(format!(
                    "block {name} has {} values, expected {}",
                    data.len(),
                    rows * cols
                )));
            }
            Ok(data)
        };
        let w1 = Mat {
            rows: d_in,
            cols: d_hidden,
            data: read_block("w1", d_in, d_hidden)?,
        };
        let b1 = read_block("b1", 1, d_hidden)?;
        let w2 = Mat {
            rows: d_hidden,
            cols: d_out,
            data: read_block("w2", d_hidden, d_out)?,
        };
        let b2 = read_block("b2", 1, d_out)?;
        Ok(PredictorModel { w1, b1, w2, b2 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub epochs: usize,
    /// Full-batch when >= training-set size.
    pub batch_size: usize,
    /// Seed for weight initialization and per-epoch batch shuffling.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            l2_lambda: 0.1,
            epochs: 60,
            batch_size: 128,
            seed: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::config("train.learning_rate", "must be > 0"));
        }
        if self.l2_lambda < 0.0 {
            return Err(Error::config("train.l2_lambda", "must be >= 0"));
        }
        if self.epochs == 0 {
            return Err(Error::config("train.epochs", "must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("train.batch_size", "must be >= 1"));
        }
        Ok(())
    }
}

/// Test-set summary: per-node mean probabilities, node-wise error, RMSE
/// over the per-node means, and the min/max over test frames of the
/// across-node mean predicted probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub p_true_per_node: Vec<f64>,
    pub p_pred_per_node: Vec<f64>,
    pub error_per_node: Vec<f64>,
    pub p_true_global: f64,
    pub p_pred_global: f64,
    pub p_pred_min: f64,
    pub p_pred_max: f64,
    /// Max over test frames of the across-node mean of the true targets.
    /// Drives the static activation estimate of the non-predictive bitmap
    /// baseline.
    pub p_true_max: f64,
    pub rmse: f64,
}

fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// Fan-balanced uniform init: weights from `[-s, s]` with
/// `s = sqrt(6 / (fan_in + fan_out))` per layer, biases zero.
pub fn init_model(
    input_dim: usize,
    hidden_dim: usize,
    output_dim: usize,
    seed: u64,
) -> Result<PredictorModel> {
    if input_dim == 0 || hidden_dim == 0 || output_dim == 0 {
        return Err(Error::Dimension(format!(
            "all dims must be >= 1, got ({input_dim}, {hidden_dim}, {output_dim})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform_mat = |rows: usize, cols: usize| {
        let s = (6.0 / (rows + cols) as f64).sqrt();
        Mat {
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(-s..=s)).collect(),
        }
    };
    Ok(PredictorModel {
        w1: uniform_mat(input_dim, hidden_dim),
        b1: vec![0.0; hidden_dim],
        w2: uniform_mat(hidden_dim, output_dim),
        b2: vec![0.0; output_dim],
    })
}

fn hidden_activation(model: &PredictorModel, x: &[f64]) -> Vec<f64> {
    let h = model.hidden_dim();
    let mut z1 = model.b1.clone();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue; // inputs are mostly sparse binary history
        }
        let row = &model.w1.data[i * h..(i + 1) * h];
        for (zh, &w) in z1.iter_mut().zip(row) {
            *zh += xi * w;
        }
    }
    for z in &mut z1 {
        *z = z.tanh();
    }
    z1
}

fn output_from_hidden(model: &PredictorModel, a1: &[f64]) -> Vec<f64> {
    let n_out = model.output_dim();
    let mut z2 = model.b2.clone();
    for (h, &ah) in a1.iter().enumerate() {
        let row = &model.w2.data[h * n_out..(h + 1) * n_out];
        for (zo, &w) in z2.iter_mut().zip(row) {
            *zo += ah * w;
        }
    }
    z2.iter().map(|&z| sigmoid(z)).collect()
}

/// Per-node probabilities for one input vector.
pub fn forward(model: &PredictorModel, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != model.input_dim() {
        return Err(Error::Dimension(format!(
            "input length {} does not match model input dim {}",
            x.len(),
            model.input_dim()
        )));
    }
    let a1 = hidden_activation(model, x);
    Ok(output_from_hidden(model, &a1))
}

fn bce_terms(p: f64, y: f64) -> f64 {
    let p = p.clamp(CLAMP, 1.0 - CLAMP);
    -y * p.ln() - (1.0 - y) * (1.0 - p).ln()
}

/// Mean over the batch of per-sample node-summed cross-entropy, plus the
/// L2 penalty `lambda/2 * (|W1|_F^2 + |W2|_F^2)`.
pub fn bce_loss(model: &PredictorModel, batch: &[Sample], l2_lambda: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Empty("loss batch".into()));
    }
    let mut total = 0.0;
    for sample in batch {
        let p = forward(model, &sample.input)?;
        total += p
            .iter()
            .zip(&sample.target)
            .map(|(&pi, &yi)| bce_terms(pi, yi))
            .sum::<f64>();
    }
    let reg = 0.5 * l2_lambda * (model.w1.frobenius_sq() + model.w2.frobenius_sq());
    Ok(total / batch.len() as f64 + reg)
}

/// Gradients of [`bce_loss`] with respect to every parameter block.
#[derive(Debug, Clone)]
pub struct GradientBundle {
    pub w1: Mat,
    pub b1: Vec<f64>,
    pub w2: Mat,
    pub b2: Vec<f64>,
}

/// Analytic backpropagation. With a sigmoid output and cross-entropy the
/// output-layer delta collapses to `p - y`, scaled by `1/B` for the batch
/// mean; the L2 term adds `lambda * W` to each weight gradient.
pub fn gradient(model: &PredictorModel, batch: &[Sample], l2_lambda: f64) -> Result<GradientBundle> {
    if batch.is_empty() {
        return Err(Error::Empty("gradient batch".into()));
    }
    let d_in = model.input_dim();
    let d_hidden = model.hidden_dim();
    let d_out = model.output_dim();
    let mut gw1 = Mat::zeros(d_in, d_hidden);
    let mut gb1 = vec![0.0; d_hidden];
    let mut gw2 = Mat::zeros(d_hidden, d_out);
    let mut gb2 = vec![0.0; d_out];
    let inv_b = 1.0 / batch.len() as f64;

    for sample in batch {
        if sample.input.len() != d_in || sample.target.len() != d_out {
            return Err(Error::Dimension("sample does not match model dims".into()));
        }
        let a1 = hidden_activation(model, &sample.input);
        let p = output_from_hidden(model, &a1);

        let dz2: Vec<f64> = p
            .iter()
            .zip(&sample.target)
            .map(|(&pi, &yi)| (pi - yi) * inv_b)
            .collect();
        for (o, &d) in dz2.iter().enumerate() {
            gb2[o] += d;
        }
        let mut da1 = vec![0.0; d_hidden];
        for h in 0..d_hidden {
            let w_row = &model.w2.data[h * d_out..(h + 1) * d_out];
            let g_row = &mut gw2.data[h * d_out..(h + 1) * d_out];
            let ah = a1[h];
            let mut acc = 0.0;
            for (o, &d) in dz2.iter().enumerate() {
                g_row[o] += ah * d;
                acc += w_row[o] * d;
            }
            da1[h] = acc;
        }
        let dz1: Vec<f64> = da1
            .iter()
            .zip(&a1)
            .map(|(&da, &a)| da * (1.0 - a * a))
            .collect();
        for (h, &d) in dz1.iter().enumerate() {
            gb1[h] += d;
        }
        for (i, &xi) in sample.input.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let g_row = &mut gw1.data[i * d_hidden..(i + 1) * d_hidden];
            for (g, &d) in g_row.iter_mut().zip(&dz1) {
                *g += xi * d;
            }
        }
    }

    if l2_lambda != 0.0 {
        for (g, &w) in gw1.data.iter_mut().zip(&model.w1.data) {
            *g += l2_lambda * w;
        }
        for (g, &w) in gw2.data.iter_mut().zip(&model.w2.data) {
            *g += l2_lambda * w;
        }
    }

    Ok(GradientBundle {
        w1: gw1,
        b1: gb1,
        w2: gw2,
        b2: gb2,
    })
}

fn apply_step(model: &mut PredictorModel, grad: &GradientBundle, lr: f64) {
    for (w, g) in model.w1.data.iter_mut().zip(&grad.w1.data) {
        *w -= lr * g;
    }
    for (b, g) in model.b1.iter_mut().zip(&grad.b1) {
        *b -= lr * g;
    }
    for (w, g) in model.w2.data.iter_mut().zip(&grad.w2.data) {
        *w -= lr * g;
    }
    for (b, g) in model.b2.iter_mut().zip(&grad.b2) {
        *b -= lr * g;
    }
}

/// Seeded mini-batch gradient descent. Batches are drawn from a fresh
/// shuffle each epoch; the returned history holds the full-training-set
/// loss after every epoch.
pub fn train(
    mut model: PredictorModel,
    train_set: &Dataset,
    cfg: &TrainConfig,
) -> Result<(PredictorModel, Vec<f64>)> {
    cfg.validate()?;
    if train_set.is_empty() {
        return Err(Error::Empty("training set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut indices: Vec<usize> = (0..train_set.len()).collect();
    let batch_size = cfg.batch_size.min(train_set.len());
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        indices.shuffle(&mut rng);
        for chunk in indices.chunks(batch_size) {
            let batch: Vec<Sample> = chunk.iter().map(|&k| train_set.samples[k].clone()).collect();
            let grad = gradient(&model, &batch, cfg.l2_lambda)?;
            apply_step(&mut model, &grad, cfg.learning_rate);
        }
        let loss = bce_loss(&model, &train_set.samples, cfg.l2_lambda)?;
        if !loss.is_finite() {
            return Err(Error::Numeric(format!(
                "training diverged at epoch {epoch}: loss = {loss}"
            )));
        }
        history.push(loss);
    }
    if !model.all_finite() {
        return Err(Error::Numeric("non-finite weights after training".into()));
    }
    Ok((model, history))
}

/// Test-set evaluation per the per-node mean probability metrics.
pub fn evaluate(model: &PredictorModel, test_set: &Dataset) -> Result<EvalReport> {
    if test_set.is_empty() {
        return Err(Error::Empty("test set".into()));
    }
    let n = test_set.n_nodes;
    if model.output_dim() != n {
        return Err(Error::Dimension(format!(
            "model outputs {} nodes, test set has {n}",
            model.output_dim()
        )));
    }
    let mut pred_sum = vec![0.0; n];
    let mut true_sum = vec![0.0; n];
    let mut p_pred_min = f64::INFINITY;
    let mut p_pred_max = f64::NEG_INFINITY;
    let mut p_true_max = f64::NEG_INFINITY;
    for sample in &test_set.samples {
        let p = forward(model, &sample.input)?;
        let frame_pred = p.iter().sum::<f64>() / n as f64;
        let frame_true = sample.target.iter().sum::<f64>() / n as f64;
        p_pred_min = p_pred_min.min(frame_pred);
        p_pred_max = p_pred_max.max(frame_pred);
        p_true_max = p_true_max.max(frame_true);
        for i in 0..n {
            pred_sum[i] += p[i];
            true_sum[i] += sample.target[i];
        }
    }
    let count = test_set.len() as f64;
    let p_pred_per_node: Vec<f64> = pred_sum.iter().map(|s| s / count).collect();
    let p_true_per_node: Vec<f64> = true_sum.iter().map(|s| s / count).collect();
    let error_per_node: Vec<f64> = p_pred_per_node
        .iter()
        .zip(&p_true_per_node)
        .map(|(p, t)| p - t)
        .collect();
    let rmse = (error_per_node.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt();
    Ok(EvalReport {
        p_true_global: p_true_per_node.iter().sum::<f64>() / n as f64,
        p_pred_global: p_pred_per_node.iter().sum::<f64>() / n as f64,
        p_true_per_node,
        p_pred_per_node,
        error_per_node,
        p_pred_min,
        p_pred_max,
        p_true_max,
        rmse,
    })
}
