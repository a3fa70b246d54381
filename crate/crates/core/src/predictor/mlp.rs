//! Fully connected regression network trained by mini-batch SGD on mean
//! squared error. Hidden layers use the configured activation; the output
//! layer is linear.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PredictorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
    Relu,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
        }
    }

    /// Derivative expressed through the pre-activation `z`.
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    /// Hidden layer widths; input and output sizes are implied.
    pub hidden: Vec<usize>,
    pub activation: Activation,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Train against standardized targets and map predictions back.
    pub standardize_target: bool,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: vec![128, 64],
            activation: Activation::Tanh,
            learning_rate: 1e-3,
            batch_size: 32,
            epochs: 200,
            seed: 42,
            standardize_target: true,
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<(), PredictorError> {
        let bad = |m: String| Err(PredictorError::InvalidConfig(m));
        if self.hidden.contains(&0) {
            return bad("hidden layer widths must be positive".into());
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1".into());
        }
        Ok(())
    }
}

/// Network parameters. `weights[l]` is row-major `layer_sizes[l+1] × layer_sizes[l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layer_sizes: Vec<usize>,
    pub activation: Activation,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Mlp {
    /// Weights and biases drawn uniformly from `±1/√fan_in`.
    pub fn init(layer_sizes: &[usize], activation: Activation, seed: u64) -> Mlp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
            weights.push((0..fan_in * fan_out).map(|_| rng.gen_range(-bound..=bound)).collect());
            biases.push((0..fan_out).map(|_| rng.gen_range(-bound..=bound)).collect());
        }
        Mlp {
            layer_sizes: layer_sizes.to_vec(),
            activation,
            weights,
            biases,
        }
    }

    pub fn check_shapes(&self) -> Result<(), PredictorError> {
        let layers = self.layer_sizes.len();
        let bad = |m: String| Err(PredictorError::InvalidModel(m));
        if layers < 2 || self.layer_sizes.last() != Some(&1) {
            return bad("layer sizes must end in a single output".into());
        }
        if self.weights.len() != layers - 1 || self.biases.len() != layers - 1 {
            return bad("parameter count does not match layer sizes".into());
        }
        for (l, pair) in self.layer_sizes.windows(2).enumerate() {
            if self.weights[l].len() != pair[0] * pair[1] || self.biases[l].len() != pair[1] {
                return bad(format!("layer {l} parameters do not chain"));
            }
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.layer_sizes[0]
    }

    /// All parameters flattened layer by layer: weights, then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        let mut k = 0;
        for (w, b) in self.weights.iter_mut().zip(self.biases.iter_mut()) {
            let (nw, nb) = (w.len(), b.len());
            w.copy_from_slice(&params[k..k + nw]);
            k += nw;
            b.copy_from_slice(&params[k..k + nb]);
            k += nb;
        }
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        let mut a = x.to_vec();
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let fan_in = a.len();
            let next: Vec<f64> = b
                .iter()
                .enumerate()
                .map(|(o, bias)| {
                    let z = bias + w[o * fan_in..(o + 1) * fan_in]
                        .iter()
                        .zip(&a)
                        .map(|(wi, ai)| wi * ai)
                        .sum::<f64>();
                    if l == last {
                        z
                    } else {
                        self.activation.apply(z)
                    }
                })
                .collect();
            a = next;
        }
        a[0]
    }

    /// Mean squared error over the batch and its gradient with respect to
    /// [`Mlp::parameters`].
    pub fn loss_and_gradient(&self, xs: &[Vec<f64>], ys: &[f64]) -> (f64, Vec<f64>) {
        let net = Network::from(self);
        let (loss, grads) = net.batch_gradient(xs, ys);
        let mut flat = Vec::new();
        for (dw, db) in grads {
            // Row-major to match the stored layout.
            for r in 0..dw.nrows() {
                flat.extend(dw.row(r).iter().copied());
            }
            flat.extend(db.iter().copied());
        }
        (loss, flat)
    }
}

/// Dense working copy of the parameters.
struct Network {
    activation: Activation,
    weights: Vec<DMatrix<f64>>,
    biases: Vec<DVector<f64>>,
}

impl From<&Mlp> for Network {
    fn from(m: &Mlp) -> Network {
        Network {
            activation: m.activation,
            weights: m
                .layer_sizes
                .windows(2)
                .zip(&m.weights)
                .map(|(p, w)| DMatrix::from_row_slice(p[1], p[0], w))
                .collect(),
            biases: m.biases.iter().map(|b| DVector::from_column_slice(b)).collect(),
        }
    }
}

impl Network {
    fn write_back(&self, m: &mut Mlp) {
        for (l, w) in self.weights.iter().enumerate() {
            let mut flat = Vec::with_capacity(w.len());
            for r in 0..w.nrows() {
                flat.extend(w.row(r).iter().copied());
            }
            m.weights[l] = flat;
            m.biases[l] = self.biases[l].iter().copied().collect();
        }
    }

    /// Columns are samples.
    fn batch_gradient(&self, xs: &[Vec<f64>], ys: &[f64]) -> (f64, Vec<(DMatrix<f64>, DVector<f64>)>) {
        let batch = xs.len();
        let width = xs[0].len();
        let input = DMatrix::from_fn(width, batch, |r, c| xs[c][r]);
        let layers = self.weights.len();
        let mut pre = Vec::with_capacity(layers);
        let mut post = vec![input];
        for l in 0..layers {
            let mut z = &self.weights[l] * &post[l];
            for mut col in z.column_iter_mut() {
                col += &self.biases[l];
            }
            let a = if l + 1 == layers {
                z.clone()
            } else {
                z.map(|v| self.activation.apply(v))
            };
            pre.push(z);
            post.push(a);
        }
        let out = &post[layers];
        let mut loss = 0.0;
        let mut delta = DMatrix::zeros(1, batch);
        for c in 0..batch {
            let e = out[(0, c)] - ys[c];
            loss += e * e;
            delta[(0, c)] = 2.0 * e / batch as f64;
        }
        loss /= batch as f64;
        let mut grads = Vec::with_capacity(layers);
        for l in (0..layers).rev() {
            let dw = &delta * post[l].transpose();
            let db = delta.column_sum();
            if l > 0 {
                let mut back = self.weights[l].transpose() * &delta;
                back.zip_apply(&pre[l - 1], |g, z| *g *= self.activation.derivative(z));
                delta = back;
            }
            grads.push((dw, db));
        }
        grads.reverse();
        (loss, grads)
    }
}

/// Trains from `init` for `config.epochs` epochs, reshuffling the sample
/// order each epoch. Returns the final parameters and the per-epoch mean
/// training loss.
pub(crate) fn train(
    init: Mlp,
    xs: &[Vec<f64>],
    ys: &[f64],
    config: &MlpConfig,
) -> Result<(Mlp, Vec<f64>), PredictorError> {
    let mut net = Network::from(&init);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut trace = Vec::with_capacity(config.epochs);
    let mut bx: Vec<Vec<f64>> = Vec::with_capacity(config.batch_size);
    let mut by: Vec<f64> = Vec::with_capacity(config.batch_size);
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch_size) {
            bx.clear();
            by.clear();
            for &i in chunk {
                bx.push(xs[i].clone());
                by.push(ys[i]);
            }
            let (loss, grads) = net.batch_gradient(&bx, &by);
            if !loss.is_finite() {
                return Err(PredictorError::Diverged { epoch });
            }
            total += loss * chunk.len() as f64;
            for (l, (dw, db)) in grads.into_iter().enumerate() {
                net.weights[l] -= dw * config.learning_rate;
                net.biases[l] -= db * config.learning_rate;
            }
        }
        let mean = total / xs.len() as f64;
        if !mean.is_finite() {
            return Err(PredictorError::Diverged { epoch });
        }
        trace.push(mean);
    }
    let mut out = init;
    net.write_back(&mut out);
    Ok((out, trace))
}
