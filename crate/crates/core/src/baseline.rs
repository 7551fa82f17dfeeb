//! Fully connected 784-512-10 reference network trained with AdaDelta.
//!
//! ReLU hidden layer, softmax output, mean cross-entropy over mini-batches.
//! Inputs are pixel intensities divided by 255.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};
use rand::Rng as _;

use crate::dataset::{GrayImage, TaskData, TaskSpec, PIXELS};
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

pub const OUTPUTS: usize = 10;
const MAGIC: &[u8; 4] = b"MLPB";
pub const MLP_STATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden: usize,
    pub batch_size: usize,
    pub rho: f64,
    pub epsilon: f64,
    /// Multiplies every AdaDelta step; 1.0 is plain AdaDelta.
    pub lr: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: 512,
            batch_size: 32,
            rho: 0.95,
            epsilon: 1e-6,
            lr: 1.0,
            seed: 1,
        }
    }
}

/// Running averages of squared gradients and squared updates.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulators<D> {
    pub grad_sq: D,
    pub update_sq: D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
    pub acc_w1: Accumulators<Array2<f64>>,
    pub acc_b1: Accumulators<Array1<f64>>,
    pub acc_w2: Accumulators<Array2<f64>>,
    pub acc_b2: Accumulators<Array1<f64>>,
}

/// Gradients of the mean batch loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

fn zeros_like2(a: &Array2<f64>) -> Accumulators<Array2<f64>> {
    Accumulators {
        grad_sq: Array2::zeros(a.raw_dim()),
        update_sq: Array2::zeros(a.raw_dim()),
    }
}

fn zeros_like1(a: &Array1<f64>) -> Accumulators<Array1<f64>> {
    Accumulators {
        grad_sq: Array1::zeros(a.len()),
        update_sq: Array1::zeros(a.len()),
    }
}

impl MlpParams {
    fn from_weights(w1: Array2<f64>, b1: Array1<f64>, w2: Array2<f64>, b2: Array1<f64>) -> Self {
        MlpParams {
            acc_w1: zeros_like2(&w1),
            acc_b1: zeros_like1(&b1),
            acc_w2: zeros_like2(&w2),
            acc_b2: zeros_like1(&b2),
            w1,
            b1,
            w2,
            b2,
        }
    }

    pub fn zeros(hidden: usize) -> Self {
        Self::from_weights(
            Array2::zeros((PIXELS, hidden)),
            Array1::zeros(hidden),
            Array2::zeros((hidden, OUTPUTS)),
            Array1::zeros(OUTPUTS),
        )
    }

    /// He-uniform weights, zero biases.
    pub fn he_uniform(hidden: usize, seed: u64) -> Self {
        let mut rng = stream(seed, Purpose::MlpInit, 0);
        let mut draw = |rows: usize, cols: usize| {
            let limit = (6.0 / rows as f64).sqrt();
            Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(-limit..limit))
        };
        let w1 = draw(PIXELS, hidden);
        let w2 = draw(hidden, OUTPUTS);
        Self::from_weights(w1, Array1::zeros(hidden), w2, Array1::zeros(OUTPUTS))
    }

    pub fn hidden(&self) -> usize {
        self.b1.len()
    }
}

/// Row-wise softmax, stabilized by subtracting the row maximum.
fn softmax_rows(mut z: Array2<f64>) -> Array2<f64> {
    for mut row in z.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    z
}

fn image_rows<'a>(images: impl ExactSizeIterator<Item = &'a GrayImage>) -> Array2<f64> {
    let n = images.len();
    let mut x = Array2::zeros((n, PIXELS));
    for (mut row, img) in x.rows_mut().into_iter().zip(images) {
        for (v, &p) in row.iter_mut().zip(img.0.iter()) {
            *v = f64::from(p) / 255.0;
        }
    }
    x
}

fn adadelta_step<D: ndarray::Dimension>(
    x: &mut ndarray::Array<f64, D>,
    acc: &mut Accumulators<ndarray::Array<f64, D>>,
    g: &ndarray::Array<f64, D>,
    cfg: &MlpConfig,
) {
    let (rho, eps, lr) = (cfg.rho, cfg.epsilon, cfg.lr);
    Zip::from(x)
        .and(&mut acc.grad_sq)
        .and(&mut acc.update_sq)
        .and(g)
        .for_each(|x, eg, ed, &g| {
            *eg = rho * *eg + (1.0 - rho) * g * g;
            let dx = -((*ed + eps).sqrt() / (*eg + eps).sqrt()) * g;
            *ed = rho * *ed + (1.0 - rho) * dx * dx;
            *x += lr * dx;
        });
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub config: MlpConfig,
    pub params: MlpParams,
}

impl Mlp {
    pub fn new(config: MlpConfig) -> Result<Self> {
        if config.hidden == 0 || config.batch_size == 0 {
            return Err(Error::Config("hidden size and batch size must be positive".into()));
        }
        let params = MlpParams::he_uniform(config.hidden, config.seed);
        Ok(Mlp { config, params })
    }

    /// Class probabilities for a batch of inputs in `[0, 1]`, one row each.
    pub fn forward_batch(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let (_, probs) = self.forward_internal(x);
        probs
    }

    fn forward_internal(&self, x: ArrayView2<f64>) -> (Array2<f64>, Array2<f64>) {
        let p = &self.params;
        let mut h = x.dot(&p.w1) + &p.b1;
        h.mapv_inplace(|v| v.max(0.0));
        let logits = h.dot(&p.w2) + &p.b2;
        (h, softmax_rows(logits))
    }

    pub fn forward(&self, img: &GrayImage) -> [f64; OUTPUTS] {
        let probs = self.forward_batch(image_rows(std::iter::once(img)).view());
        let mut out = [0.0; OUTPUTS];
        out.iter_mut().zip(probs.row(0)).for_each(|(o, &p)| *o = p);
        out
    }

    /// Mean cross-entropy of the batch and its gradients.
    pub fn loss_and_gradients(&self, x: ArrayView2<f64>, labels: &[usize]) -> (f64, Gradients) {
        let n = x.nrows();
        assert_eq!(n, labels.len());
        let (h, probs) = self.forward_internal(x);
        let loss = labels
            .iter()
            .enumerate()
            .map(|(i, &y)| -probs[[i, y]].max(f64::MIN_POSITIVE).ln())
            .sum::<f64>()
            / n as f64;
        // d loss / d logits = (p - onehot) / n
        let mut dz = probs;
        for (i, &y) in labels.iter().enumerate() {
            dz[[i, y]] -= 1.0;
        }
        dz /= n as f64;
        let w2 = h.t().dot(&dz);
        let b2 = dz.sum_axis(Axis(0));
        let mut dh = dz.dot(&self.params.w2.t());
        Zip::from(&mut dh).and(&h).for_each(|d, &hv| {
            if hv <= 0.0 {
                *d = 0.0;
            }
        });
        let w1 = x.t().dot(&dh);
        let b1 = dh.sum_axis(Axis(0));
        (loss, Gradients { w1, b1, w2, b2 })
    }

    pub fn apply(&mut self, g: &Gradients) {
        let cfg = &self.config;
        let p = &mut self.params;
        adadelta_step(&mut p.w1, &mut p.acc_w1, &g.w1, cfg);
        adadelta_step(&mut p.b1, &mut p.acc_b1, &g.b1, cfg);
        adadelta_step(&mut p.w2, &mut p.acc_w2, &g.w2, cfg);
        adadelta_step(&mut p.b2, &mut p.acc_b2, &g.b2, cfg);
    }

    /// One pass over `data` in order, one AdaDelta step per mini-batch.
    /// Returns the mean training loss.
    pub fn train_epoch(&mut self, data: &TaskData) -> Result<f64> {
        if data.class_count() > OUTPUTS {
            return Err(Error::LabelOutOfRange {
                label: data.class_count() - 1,
                classes: OUTPUTS,
            });
        }
        let mut total = 0.0;
        let mut start = 0;
        while start < data.len() {
            let end = (start + self.config.batch_size).min(data.len());
            let images: Vec<GrayImage> = (start..end).map(|i| data.image(i)).collect();
            let labels: Vec<usize> = (start..end).map(|i| data.label(i)).collect();
            let x = image_rows(images.iter());
            let (loss, g) = self.loss_and_gradients(x.view(), &labels);
            self.apply(&g);
            total += loss * (end - start) as f64;
            start = end;
        }
        Ok(if data.is_empty() {
            0.0
        } else {
            total / data.len() as f64
        })
    }

    pub fn train_task(&mut self, task: &TaskSpec) -> Result<f64> {
        self.train_epoch(&task.train)
    }

    pub fn predict_batch(&self, x: ArrayView2<f64>) -> Vec<usize> {
        self.forward_batch(x)
            .rows()
            .into_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(
                        (0, f64::NEG_INFINITY),
                        |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
                    )
                    .0
            })
            .collect()
    }

    pub fn evaluate(&self, data: &TaskData) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        let mut correct = 0;
        for start in (0..data.len()).step_by(1000) {
            let end = (start + 1000).min(data.len());
            let images: Vec<GrayImage> = (start..end).map(|i| data.image(i)).collect();
            let preds = self.predict_batch(image_rows(images.iter()).view());
            correct += preds
                .iter()
                .zip(start..end)
                .filter(|&(&p, i)| p == data.label(i))
                .count();
        }
        correct as f64 / data.len() as f64
    }

    pub fn evaluate_task(&self, task: &TaskSpec) -> f64 {
        self.evaluate(&task.test)
    }

    /// `"MLPB"`, u32 version, u32 hidden, u32 batch, f64 rho, f64 epsilon,
    /// f64 lr, u64 seed, then w1 b1 w2 b2 followed by the accumulators of
    /// each (squared gradients, squared updates), all little-endian f64.
    pub fn to_bytes(&self) -> Vec<u8> {
        let c = &self.config;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&MLP_STATE_VERSION.to_le_bytes());
        out.extend_from_slice(&(c.hidden as u32).to_le_bytes());
        out.extend_from_slice(&(c.batch_size as u32).to_le_bytes());
        for x in [c.rho, c.epsilon, c.lr] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out.extend_from_slice(&c.seed.to_le_bytes());
        for v in self.arrays() {
            for x in v {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    fn arrays(&self) -> Vec<Vec<f64>> {
        let p = &self.params;
        let flat2 = |a: &Array2<f64>| a.iter().copied().collect::<Vec<_>>();
        let flat1 = |a: &Array1<f64>| a.to_vec();
        vec![
            flat2(&p.w1),
            flat1(&p.b1),
            flat2(&p.w2),
            flat1(&p.b2),
            flat2(&p.acc_w1.grad_sq),
            flat2(&p.acc_w1.update_sq),
            flat1(&p.acc_b1.grad_sq),
            flat1(&p.acc_b1.update_sq),
            flat2(&p.acc_w2.grad_sq),
            flat2(&p.acc_w2.update_sq),
            flat1(&p.acc_b2.grad_sq),
            flat1(&p.acc_b2.update_sq),
        ]
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::BadState(m.to_string());
        if bytes.len() < 48 || &bytes[..4] != MAGIC {
            return Err(bad("missing MLPB header"));
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != MLP_STATE_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: MLP_STATE_VERSION,
            });
        }
        let config = MlpConfig {
            hidden: u32_at(8) as usize,
            batch_size: u32_at(12) as usize,
            rho: f64_at(16),
            epsilon: f64_at(24),
            lr: f64_at(32),
            seed: u64::from_le_bytes(bytes[40..48].try_into().unwrap()),
        };
        let h = config.hidden;
        if h == 0 || config.batch_size == 0 {
            return Err(bad("zero hidden or batch size"));
        }
        let per = PIXELS * h + h + h * OUTPUTS + OUTPUTS;
        if bytes.len() != 48 + 3 * per * 8 {
            return Err(bad("payload length does not match the hidden size"));
        }
        let mut pos = 48;
        let mut take = |n: usize| -> Vec<f64> {
            let v = (0..n).map(|i| f64_at(pos + 8 * i)).collect();
            pos += 8 * n;
            v
        };
        let a2 = |v: Vec<f64>, r: usize, c: usize| Array2::from_shape_vec((r, c), v).expect("sized");
        let (w1, b1, w2, b2) = (
            a2(take(PIXELS * h), PIXELS, h),
            Array1::from(take(h)),
            a2(take(h * OUTPUTS), h, OUTPUTS),
            Array1::from(take(OUTPUTS)),
        );
        let acc_w1 = Accumulators {
            grad_sq: a2(take(PIXELS * h), PIXELS, h),
            update_sq: a2(take(PIXELS * h), PIXELS, h),
        };
        let acc_b1 = Accumulators {
            grad_sq: Array1::from(take(h)),
            update_sq: Array1::from(take(h)),
        };
        let acc_w2 = Accumulators {
            grad_sq: a2(take(h * OUTPUTS), h, OUTPUTS),
            update_sq: a2(take(h * OUTPUTS), h, OUTPUTS),
        };
        let acc_b2 = Accumulators {
            grad_sq: Array1::from(take(OUTPUTS)),
            update_sq: Array1::from(take(OUTPUTS)),
        };
        let params = MlpParams {
            w1,
            b1,
            w2,
            b2,
            acc_w1,
            acc_b1,
            acc_w2,
            acc_b2,
        };
        Ok(Mlp { config, params })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Mlp::from_bytes(&fs::read(path)?)
    }
}
