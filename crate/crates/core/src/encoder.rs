//! Rate coding of images into spike trains.
//!
//! During each of the `steps_active` steps every pixel spikes independently
//! with probability `intensity / 255`; the `steps_silent` steps that follow
//! carry no spikes.

use rand::Rng as _;

use crate::dataset::{GrayImage, PIXELS};
use crate::rng::Rng;

pub const DEFAULT_STEPS_ACTIVE: usize = 10;
pub const DEFAULT_STEPS_SILENT: usize = 10;

#[derive(Clone, PartialEq, Eq)]
pub struct SpikeTrain {
    steps_active: usize,
    steps_silent: usize,
    /// Indices of spiking pixels, one list per active step.
    active: Vec<Vec<u16>>,
}

impl SpikeTrain {
    pub fn steps_active(&self) -> usize {
        self.steps_active
    }

    pub fn steps_silent(&self) -> usize {
        self.steps_silent
    }

    pub fn total_steps(&self) -> usize {
        self.steps_active + self.steps_silent
    }

    /// Spiking pixel indices at step `t`; empty for silent steps.
    pub fn spikes_at(&self, t: usize) -> &[u16] {
        self.active.get(t).map_or(&[], Vec::as_slice)
    }

    /// Dense boolean row for step `t`.
    pub fn row(&self, t: usize) -> [bool; PIXELS] {
        let mut row = [false; PIXELS];
        for &i in self.spikes_at(t) {
            row[usize::from(i)] = true;
        }
        row
    }

    pub fn spike_count(&self) -> usize {
        self.active.iter().map(Vec::len).sum()
    }

    /// Per-pixel spike counts over the whole presentation.
    pub fn counts(&self) -> [u16; PIXELS] {
        let mut counts = [0u16; PIXELS];
        for step in &self.active {
            for &i in step {
                counts[usize::from(i)] += 1;
            }
        }
        counts
    }
}

impl std::fmt::Debug for SpikeTrain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpikeTrain")
            .field("steps_active", &self.steps_active)
            .field("steps_silent", &self.steps_silent)
            .field("spikes", &self.spike_count())
            .finish()
    }
}

/// Encodes `img` with fresh Bernoulli noise drawn from `rng`.
///
/// Intensity 0 never spikes and 255 always spikes; neither consumes random
/// numbers. Other pixels draw `gen_range(0..255) < intensity`, which has
/// probability exactly `intensity / 255`.
pub fn encode(img: &GrayImage, steps_active: usize, steps_silent: usize, rng: &mut Rng) -> SpikeTrain {
    let mut active = Vec::with_capacity(steps_active);
    for _ in 0..steps_active {
        let mut step = Vec::new();
        for (i, &v) in img.0.iter().enumerate() {
            let fires = match v {
                0 => false,
                255 => true,
                _ => rng.gen_range(0u8..255) < v,
            };
            if fires {
                step.push(i as u16);
            }
        }
        active.push(step);
    }
    SpikeTrain {
        steps_active,
        steps_silent,
        active,
    }
}
