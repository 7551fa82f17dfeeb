pub mod baseline;
pub mod bench;
pub mod dataset;
pub mod encoder;
pub mod error;
pub mod network;
pub mod rng;
pub mod snn;

pub use error::{Error, Result};
