//! Seed derivation.
//!
//! Every random stream in an experiment comes from one root seed. A stream is
//! addressed by a [`Purpose`] tag and an index (task number, presentation
//! counter, ...):
//!
//! ```text
//! seed = mix(mix(root ^ purpose_tag) ^ index)
//! ```
//!
//! where `mix` is the SplitMix64 output function. The derived seed is expanded
//! into a xoshiro256++ generator with `seed_from_u64`, which runs SplitMix64
//! over the seed to fill the 256-bit state.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Generator used for every stochastic component.
pub type Rng = Xoshiro256PlusPlus;

/// What a random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Permutation,
    WeightInit,
    TrainEncoding,
    EvalEncoding,
    MlpInit,
}

impl Purpose {
    pub const fn tag(self) -> u64 {
        match self {
            Purpose::Permutation => 0x7065_726d,
            Purpose::WeightInit => 0x696e_6974,
            Purpose::TrainEncoding => 0x7472_6e65,
            Purpose::EvalEncoding => 0x6576_6c65,
            Purpose::MlpInit => 0x6d6c_7069,
        }
    }
}

/// SplitMix64 output function.
pub const fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub const fn derive_seed(root: u64, purpose: Purpose, index: u64) -> u64 {
    mix(mix(root ^ purpose.tag()) ^ index)
}

pub fn stream(root: u64, purpose: Purpose, index: u64) -> Rng {
    Rng::seed_from_u64(derive_seed(root, purpose, index))
}
