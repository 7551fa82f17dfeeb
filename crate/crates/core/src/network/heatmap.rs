//! Receptive-field heatmaps as binary PPM.
//!
//! One 28×28 tile per microcolumn, columns as rows of the grid, with 1-pixel
//! black separators around every tile. Weights are scaled by the largest
//! absolute weight in the network: 0 is white, positive fades to red and
//! negative to blue.

use std::fs;
use std::path::Path;

use super::Network;
use crate::dataset::{PIXELS, SIDE};
use crate::error::Result;

const CELL: usize = SIDE + 1;

fn color(w: f64, scale: f64) -> [u8; 3] {
    if scale == 0.0 {
        return [255, 255, 255];
    }
    let v = (w / scale).clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - v.abs())).round() as u8;
    if v >= 0.0 {
        [255, fade, fade]
    } else {
        [fade, fade, 255]
    }
}

/// Grid dimensions in pixels for `rows` × `cols` tiles.
pub fn grid_size(rows: usize, cols: usize) -> (usize, usize) {
    (cols * CELL + 1, rows * CELL + 1)
}

pub fn heatmap_ppm(net: &Network) -> Vec<u8> {
    let rows = net.config().class_count;
    let cols = net.config().microcolumns;
    let (width, height) = grid_size(rows, cols);
    let mut rgb = vec![0u8; width * height * 3];
    let scale = net.max_abs_weight();
    let n = net.neurons();
    let weights = net.weights_pixel_major();
    for k in 0..n {
        let (r0, c0) = (1 + (k / cols) * CELL, 1 + (k % cols) * CELL);
        for p in 0..PIXELS {
            let (y, x) = (r0 + p / SIDE, c0 + p % SIDE);
            let at = (y * width + x) * 3;
            rgb[at..at + 3].copy_from_slice(&color(weights[p * n + k], scale));
        }
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(&rgb);
    out
}

pub fn write_heatmap_ppm(net: &Network, path: &Path) -> Result<()> {
    fs::write(path, heatmap_ppm(net))?;
    Ok(())
}
