//! Browser bindings for the interactive demo in `www/`.
//!
//! There is no dataset in the browser, so the demo network learns from
//! procedurally drawn seven-segment digits. Pixel buffers cross the boundary
//! as 784 grayscale bytes, row-major.

use colanet::dataset::{GrayImage, PIXELS, SIDE};
use colanet::encoder::encode;
use colanet::network::{grid_size, heatmap_ppm, ColaNetConfig, Microcolumn, Network, TrainKind};
use colanet::rng::{stream, Purpose, Rng};
use colanet::snn::{membrane_update, positive_mass};
use rand::Rng as _;
use wasm_bindgen::prelude::*;

fn image(pixels: &[u8]) -> Result<GrayImage, JsError> {
    GrayImage::from_slice(pixels)
        .ok_or_else(|| JsError::new(&format!("expected {PIXELS} pixels, got {}", pixels.len())))
}

/// Spike raster of one presentation: `steps_active + steps_silent` frames of
/// 784 bytes, 1 where the input fired.
#[wasm_bindgen]
pub fn encode_preview(pixels: &[u8], steps_active: usize, steps_silent: usize, seed: u32) -> Result<Vec<u8>, JsError> {
    let img = image(pixels)?;
    let mut rng = stream(u64::from(seed), Purpose::EvalEncoding, 0);
    let train = encode(&img, steps_active, steps_silent, &mut rng);
    Ok((0..train.total_steps())
        .flat_map(|t| train.row(t).map(u8::from))
        .collect())
}

// Segment endpoints in a unit box: top, upper right, lower right, bottom,
// lower left, upper left, middle.
const SEGMENTS: [((f64, f64), (f64, f64)); 7] = [
    ((0.0, 0.0), (1.0, 0.0)),
    ((1.0, 0.0), (1.0, 0.5)),
    ((1.0, 0.5), (1.0, 1.0)),
    ((0.0, 1.0), (1.0, 1.0)),
    ((0.0, 0.5), (0.0, 1.0)),
    ((0.0, 0.0), (0.0, 0.5)),
    ((0.0, 0.5), (1.0, 0.5)),
];

const DIGITS: [&[usize]; 10] = [
    &[0, 1, 2, 3, 4, 5],
    &[1, 2],
    &[0, 1, 6, 4, 3],
    &[0, 1, 6, 2, 3],
    &[5, 6, 1, 2],
    &[0, 5, 6, 2, 3],
    &[0, 5, 6, 4, 3, 2],
    &[0, 1, 2],
    &[0, 1, 2, 3, 4, 5, 6],
    &[0, 1, 2, 3, 5, 6],
];

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// A seven-segment digit with random placement, size, slant and stroke width.
fn draw_digit(digit: usize, rng: &mut Rng) -> GrayImage {
    let w = rng.gen_range(9.0..11.5);
    let h = rng.gen_range(15.0..18.0);
    let x0 = 14.0 - w / 2.0 + rng.gen_range(-1.5..1.5);
    let y0 = 14.0 - h / 2.0 + rng.gen_range(-1.5..1.5);
    let slant = rng.gen_range(-0.2..0.2);
    let stroke = rng.gen_range(1.0..2.0);
    let map = |(u, v): (f64, f64)| (x0 + u * w + slant * (1.0 - v) * h * 0.3, y0 + v * h);
    let mut img = GrayImage::zeros();
    for (i, px) in img.0.iter_mut().enumerate() {
        let p = ((i % SIDE) as f64 + 0.5, (i / SIDE) as f64 + 0.5);
        let d = DIGITS[digit]
            .iter()
            .map(|&s| segment_distance(p, map(SEGMENTS[s].0), map(SEGMENTS[s].1)))
            .fold(f64::INFINITY, f64::min);
        *px = (255.0 * (stroke + 0.5 - d).clamp(0.0, 1.0)).round() as u8;
    }
    img
}

/// A sample digit for the drawing canvas.
#[wasm_bindgen]
pub fn sample_digit(digit: usize, seed: u32) -> Vec<u8> {
    let mut rng = stream(u64::from(seed), Purpose::TrainEncoding, digit as u64);
    draw_digit(digit % 10, &mut rng).0.to_vec()
}

/// A small network with its synthetic training stream.
#[wasm_bindgen]
pub struct Demo {
    net: Network,
    data: Rng,
    seen: u32,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(microcolumns: usize, alpha: f64, seed: u32) -> Result<Demo, JsError> {
        let net = Network::new(ColaNetConfig {
            microcolumns,
            alpha,
            seed: u64::from(seed),
            ..ColaNetConfig::default()
        })
        .map_err(|e| JsError::new(&e.to_string()))?;
        Ok(Demo {
            net,
            data: stream(u64::from(seed), Purpose::Permutation, 1),
            seen: 0,
        })
    }

    /// Trains on `samples` fresh digits; returns how many were already
    /// classified correctly before their update.
    pub fn train(&mut self, samples: u32) -> Result<u32, JsError> {
        let mut correct = 0;
        for _ in 0..samples {
            let label = self.data.gen_range(0..10);
            let img = draw_digit(label, &mut self.data);
            let out = self
                .net
                .train_sample(&img, label)
                .map_err(|e| JsError::new(&e.to_string()))?;
            correct += u32::from(out.kind == TrainKind::Correct);
        }
        self.seen += samples;
        Ok(correct)
    }

    pub fn samples_seen(&self) -> u32 {
        self.seen
    }

    /// Accuracy on `n` held-out digits drawn from a separate stream.
    pub fn accuracy(&self, n: u32) -> f64 {
        let mut rng = stream(self.net.config().seed, Purpose::EvalEncoding, u64::MAX);
        let correct = (0..n)
            .filter(|&i| {
                let label = (i % 10) as usize;
                let img = draw_digit(label, &mut rng);
                self.net.predict(&img, &mut self.net.eval_rng(1, i as usize)).class == label
            })
            .count();
        correct as f64 / f64::from(n.max(1))
    }

    /// Predicted class, or -1 when no neuron fired.
    pub fn predict(&self, pixels: &[u8], seed: u32) -> Result<i32, JsError> {
        let p = self
            .net
            .predict(&image(pixels)?, &mut self.net.eval_rng(0, seed as usize));
        Ok(if p.silent { -1 } else { p.class as i32 })
    }

    pub fn heatmap_width(&self) -> usize {
        grid_size(self.net.config().class_count, self.net.config().microcolumns).0
    }

    pub fn heatmap_height(&self) -> usize {
        grid_size(self.net.config().class_count, self.net.config().microcolumns).1
    }

    /// Receptive fields as RGBA, ready for `ImageData`.
    pub fn heatmap_rgba(&self) -> Vec<u8> {
        let ppm = heatmap_ppm(&self.net);
        let body = ppm
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == b'\n')
            .nth(2)
            .map_or(0, |(i, _)| i + 1);
        ppm[body..]
            .chunks_exact(3)
            .flat_map(|c| [c[0], c[1], c[2], 255])
            .collect()
    }

    pub fn microcolumns(&self) -> usize {
        self.net.config().microcolumns
    }

    /// Replays one presentation of `pixels` with the learned weights but a
    /// different `alpha`. Returns `[threshold, firing time]` per neuron
    /// (column-major order); the time is -1 for neurons that never reach
    /// threshold. Inhibition is ignored so every neuron's crossing shows.
    pub fn explore(&self, pixels: &[u8], alpha: f64, seed: u32) -> Result<Vec<f64>, JsError> {
        let img = image(pixels)?;
        let c = self.net.config();
        let train = self.net.encode(&img, &mut self.net.eval_rng(0, seed as usize));
        let mut out = Vec::with_capacity(2 * self.net.neurons());
        for column in 0..c.class_count {
            for index in 0..c.microcolumns {
                let w = self.net.receptive_field(Microcolumn::new(column, index));
                let threshold = c.u_const + alpha * positive_mass(&w);
                let mut potential = 0.0;
                let mut fired = -1.0;
                for t in 0..train.total_steps() {
                    let drive = c.input_gain * train.spikes_at(t).iter().map(|&i| w[usize::from(i)]).sum::<f64>();
                    let (u, f) = membrane_update(potential, c.leak, drive, threshold);
                    potential = u;
                    if let Some(frac) = f {
                        fired = t as f64 + frac;
                        break;
                    }
                }
                out.push(threshold);
                out.push(fired);
            }
        }
        Ok(out)
    }
}
