use rand::{RngCore, SeedableRng};

use super::{GrayImage, PIXELS};
use crate::rng::Rng;

/// A bijection on pixel indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPermutation {
    mapping: Vec<u16>,
}

impl PixelPermutation {
    pub fn identity() -> Self {
        PixelPermutation {
            mapping: (0..PIXELS as u16).collect(),
        }
    }

    /// Accepts `mapping` only if it is a bijection on `0..784`.
    pub fn from_mapping(mapping: Vec<u16>) -> Option<Self> {
        if mapping.len() != PIXELS {
            return None;
        }
        let mut seen = [false; PIXELS];
        for &m in &mapping {
            let slot = seen.get_mut(usize::from(m))?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(PixelPermutation { mapping })
    }

    pub fn mapping(&self) -> &[u16] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &m)| usize::from(m) == i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; PIXELS];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[usize::from(m)] = i as u16;
        }
        PixelPermutation { mapping: inv }
    }
}

/// Deterministic permutation for `seed`; seed 0 is the identity.
///
/// Fisher–Yates over a xoshiro256++ generator seeded with `seed_from_u64(seed)`:
/// for `i` from 783 down to 1, swap `i` with `j = (next_u64() * (i + 1)) >> 64`.
pub fn gen_permutation(seed: u64) -> PixelPermutation {
    let mut p = PixelPermutation::identity();
    if seed == 0 {
        return p;
    }
    let mut rng = Rng::seed_from_u64(seed);
    for i in (1..PIXELS).rev() {
        let j = ((u128::from(rng.next_u64()) * (i as u128 + 1)) >> 64) as usize;
        p.mapping.swap(i, j);
    }
    p
}

/// `output[i] = input[mapping[i]]`.
pub fn apply_permutation(img: &GrayImage, p: &PixelPermutation) -> GrayImage {
    let mut out = [0u8; PIXELS];
    for (o, &m) in out.iter_mut().zip(&p.mapping) {
        *o = img.0[usize::from(m)];
    }
    GrayImage(out)
}
