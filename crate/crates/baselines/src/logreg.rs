use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use veritas_core::{BinaryLabel, Scalar};

use crate::error::BaselineError;
use crate::sparse::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
    /// `None` trains full-batch. Mini-batches are drawn from a seeded shuffle.
    #[serde(default)]
    pub batch_size: Option<usize>,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self { learning_rate: 1.0, epochs: 200, l2: 1e-4, seed: 42, batch_size: None }
    }
}

impl LogRegConfig {
    fn validate(&self) -> Result<(), BaselineError> {
        let bad = |m: String| Err(BaselineError::InvalidConfig(m));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return bad(format!("l2 must be non-negative, got {}", self.l2));
        }
        if self.batch_size == Some(0) {
            return bad("batch size must be positive".into());
        }
        Ok(())
    }
}

/// Binary logistic regression; predicts Reliable iff `σ(w·x + b) ≥ 0.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LogRegModel<T: Scalar> {
    weights: Vec<T>,
    bias: T,
    config: LogRegConfig,
}

/// Trained model plus the training loss before the first epoch and after
/// each epoch.
#[derive(Debug, Clone)]
pub struct LogRegFit<T: Scalar> {
    pub model: LogRegModel<T>,
    pub loss_trace: Vec<T>,
}

pub fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

fn target<T: Scalar>(y: BinaryLabel) -> T {
    if y.is_reliable() {
        T::one()
    } else {
        T::zero()
    }
}

/// Mean log loss over the examples plus `l2 / 2 · ‖w‖²`. The bias is not
/// regularized.
pub fn loss<T: Scalar>(weights: &[T], bias: T, xs: &[SparseVector<T>], ys: &[BinaryLabel], l2: T) -> T {
    let n = T::from_count(xs.len().max(1));
    let data: T = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| {
            let z = x.dot(weights) + bias;
            softplus(z) - target::<T>(y) * z
        })
        .sum();
    let reg: T = weights.iter().map(|&w| w * w).sum();
    data / n + l2 * reg / T::lit(2.0)
}

/// Gradient of [`loss`] with respect to `(weights, bias)`.
pub fn gradient<T: Scalar>(weights: &[T], bias: T, xs: &[SparseVector<T>], ys: &[BinaryLabel], l2: T) -> (Vec<T>, T) {
    let n = T::from_count(xs.len().max(1));
    let mut gw = vec![T::zero(); weights.len()];
    let mut gb = T::zero();
    for (x, &y) in xs.iter().zip(ys) {
        let r = sigmoid(x.dot(weights) + bias) - target::<T>(y);
        gb = gb + r;
        for (i, v) in x.iter() {
            if i < gw.len() {
                gw[i] = gw[i] + r * v;
            }
        }
    }
    for (g, &w) in gw.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (gw, gb / n)
}

impl<T: Scalar> LogRegModel<T> {
    pub fn train(xs: &[SparseVector<T>], ys: &[BinaryLabel], dim: usize, config: LogRegConfig) -> Result<LogRegFit<T>, BaselineError> {
        config.validate()?;
        if xs.len() != ys.len() {
            return Err(BaselineError::LengthMismatch { vectors: xs.len(), labels: ys.len() });
        }
        if !ys.iter().any(|y| y.is_reliable()) || ys.iter().all(|y| y.is_reliable()) {
            return Err(BaselineError::SingleClass);
        }
        if let Some(i) = xs.iter().map(SparseVector::min_dim).find(|&d| d > dim) {
            return Err(BaselineError::IndexOutOfRange { index: i - 1, dim });
        }
        let lr = T::lit(config.learning_rate);
        let l2 = T::lit(config.l2);
        let mut w = vec![T::zero(); dim];
        let mut b = T::zero();
        let mut trace = vec![loss(&w, b, xs, ys, l2)];
        let mut order: Vec<usize> = (0..xs.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for epoch in 1..=config.epochs {
            match config.batch_size {
                None => step(&mut w, &mut b, xs, ys, l2, lr),
                Some(size) => {
                    order.shuffle(&mut rng);
                    for chunk in order.chunks(size) {
                        let bx: Vec<SparseVector<T>> = chunk.iter().map(|&i| xs[i].clone()).collect();
                        let by: Vec<BinaryLabel> = chunk.iter().map(|&i| ys[i]).collect();
                        step(&mut w, &mut b, &bx, &by, l2, lr);
                    }
                }
            }
            let l = loss(&w, b, xs, ys, l2);
            if !l.is_finite() || !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
                return Err(BaselineError::Diverged { epoch, loss: l.as_f64() });
            }
            trace.push(l);
        }
        Ok(LogRegFit { model: Self { weights: w, bias: b, config }, loss_trace: trace })
    }

    pub fn from_parts(weights: Vec<T>, bias: T, config: LogRegConfig) -> Result<Self, BaselineError> {
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(BaselineError::NonFinite(i));
        }
        if !bias.is_finite() {
            return Err(BaselineError::InvalidConfig("bias is not finite".into()));
        }
        Ok(Self { weights, bias, config })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn config(&self) -> &LogRegConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn probability(&self, x: &SparseVector<T>) -> T {
        sigmoid(x.dot(&self.weights) + self.bias)
    }

    pub fn predict(&self, x: &SparseVector<T>) -> BinaryLabel {
        BinaryLabel::from_bool(self.probability(x) >= T::lit(0.5))
    }
}

fn step<T: Scalar>(w: &mut [T], b: &mut T, xs: &[SparseVector<T>], ys: &[BinaryLabel], l2: T, lr: T) {
    let (gw, gb) = gradient(w, *b, xs, ys, l2);
    for (wi, gi) in w.iter_mut().zip(gw) {
        *wi = *wi - lr * gi;
    }
    *b = *b - lr * gb;
}
