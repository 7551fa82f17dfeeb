//! Binary network state.
//!
//! ```text
//! "CLNT"  u32 version
//! config  u32 C, u32 M, f64 alpha, u64 ns (u64::MAX = infinite), f64 u_const,
//!         f64 eta_plus, f64 eta_minus, u32 steps_active, u32 steps_silent,
//!         u64 seed, f64 leak, f64 input_gain, f64 guidance, f64 w_min,
//!         f64 w_max, f64 init_max, u8 least_committed_fallback
//! u64     samples seen (training noise stream position)
//! f64     C*M*784 weights, microcolumn-major, pixel order within a field
//! ```
//!
//! All integers and reals are little-endian.

use std::fs;
use std::path::Path;

use super::{ColaNetConfig, Network};
use crate::dataset::PIXELS;
use crate::error::{Error, Result};
use crate::snn::VirtualSynapses;

const MAGIC: &[u8; 4] = b"CLNT";
pub const STATE_VERSION: u32 = 1;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::BadState(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(slice.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64> {
        self.take().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64> {
        self.take().map(f64::from_le_bytes)
    }
}

impl Network {
    pub fn to_bytes(&self) -> Vec<u8> {
        let c = &self.config;
        let mut out = Vec::with_capacity(128 + 8 * self.weights.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&STATE_VERSION.to_le_bytes());
        out.extend_from_slice(&(c.class_count as u32).to_le_bytes());
        out.extend_from_slice(&(c.microcolumns as u32).to_le_bytes());
        out.extend_from_slice(&c.alpha.to_le_bytes());
        out.extend_from_slice(&c.virtual_synapses.to_raw().to_le_bytes());
        for x in [c.u_const, c.eta_plus, c.eta_minus] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out.extend_from_slice(&(c.steps_active as u32).to_le_bytes());
        out.extend_from_slice(&(c.steps_silent as u32).to_le_bytes());
        out.extend_from_slice(&c.seed.to_le_bytes());
        for x in [c.leak, c.input_gain, c.guidance, c.w_min, c.w_max, c.init_max] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out.push(u8::from(c.least_committed_fallback));
        out.extend_from_slice(&self.samples_seen.to_le_bytes());
        for k in 0..self.neurons() {
            for w in self.receptive_field(self.unit(k)) {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if &r.take::<4>()? != MAGIC {
            return Err(Error::BadState("missing CLNT header".into()));
        }
        let version = r.u32()?;
        if version != STATE_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: STATE_VERSION,
            });
        }
        let class_count = r.u32()? as usize;
        let microcolumns = r.u32()? as usize;
        let alpha = r.f64()?;
        let virtual_synapses = VirtualSynapses::from_raw(r.u64()?);
        let (u_const, eta_plus, eta_minus) = (r.f64()?, r.f64()?, r.f64()?);
        let (steps_active, steps_silent) = (r.u32()? as usize, r.u32()? as usize);
        let seed = r.u64()?;
        let (leak, input_gain, guidance) = (r.f64()?, r.f64()?, r.f64()?);
        let (w_min, w_max, init_max) = (r.f64()?, r.f64()?, r.f64()?);
        let least_committed_fallback = match r.u8()? {
            0 => false,
            1 => true,
            b => return Err(Error::BadState(format!("invalid flag byte {b}"))),
        };
        let config = ColaNetConfig {
            class_count,
            microcolumns,
            alpha,
            virtual_synapses,
            u_const,
            eta_plus,
            eta_minus,
            steps_active,
            steps_silent,
            seed,
            leak,
            input_gain,
            guidance,
            w_min,
            w_max,
            init_max,
            least_committed_fallback,
        };
        config
            .validate()
            .map_err(|e| Error::BadState(format!("config block: {e}")))?;
        let samples_seen = r.u64()?;
        let n = config.neurons();
        let expected = r.pos + n * PIXELS * 8;
        if bytes.len() != expected {
            return Err(Error::BadState(format!(
                "expected {expected} bytes for {n} receptive fields, found {}",
                bytes.len()
            )));
        }
        let mut weights = vec![0.0; n * PIXELS];
        for k in 0..n {
            for p in 0..PIXELS {
                let w = r.f64()?;
                if !(w_min..=w_max).contains(&w) {
                    return Err(Error::BadState(format!("weight {w} outside [{w_min}, {w_max}]")));
                }
                weights[p * n + k] = w;
            }
        }
        Ok(Network::from_parts(config, weights, samples_seen))
    }

    pub fn save_state(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load_state(path: &Path) -> Result<Self> {
        Network::from_bytes(&fs::read(path)?)
    }

    /// Receptive fields in microcolumn-major order.
    pub fn receptive_fields(&self) -> Vec<Vec<f64>> {
        (0..self.neurons())
            .map(|k| self.receptive_field(self.unit(k)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::GrayImage;

    fn trained() -> Network {
        let mut net = Network::new(ColaNetConfig {
            class_count: 4,
            microcolumns: 3,
            ..ColaNetConfig::default()
        })
        .unwrap();
        for i in 0..40 {
            let mut img = GrayImage::zeros();
            img.0[(i * 37) % 700..][..40].iter_mut().for_each(|p| *p = 200);
            net.train_sample(&img, i % 4).unwrap();
        }
        net
    }

    #[test]
    fn round_trip_is_exact() {
        let net = trained();
        let back = Network::from_bytes(&net.to_bytes()).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn file_round_trip() {
        let net = trained();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.clnt");
        net.save_state(&path).unwrap();
        assert_eq!(Network::load_state(&path).unwrap(), net);
    }

    #[test]
    fn default_layout_holds_150_fields() {
        let net = Network::new(ColaNetConfig::default()).unwrap();
        let back = Network::from_bytes(&net.to_bytes()).unwrap();
        let fields = back.receptive_fields();
        assert_eq!(fields.len(), 150);
        assert!(fields.iter().all(|f| f.len() == 784));
    }

    #[test]
    fn corrupt_header_is_rejected() {
        let mut bytes = trained().to_bytes();
        bytes[0] = b'X';
        assert!(matches!(Network::from_bytes(&bytes), Err(Error::BadState(_))));
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let mut bytes = trained().to_bytes();
        bytes[4..8].copy_from_slice(&99u32.to_le_bytes());
        assert!(matches!(
            Network::from_bytes(&bytes),
            Err(Error::VersionMismatch { found: 99, expected: 1 })
        ));
    }

    #[test]
    fn truncated_or_padded_payload_is_rejected() {
        let bytes = trained().to_bytes();
        assert!(Network::from_bytes(&bytes[..bytes.len() - 3]).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(Network::from_bytes(&long).is_err());
        assert!(Network::from_bytes(&bytes[..10]).is_err());
    }

    #[test]
    fn out_of_bounds_weight_is_rejected() {
        let mut bytes = trained().to_bytes();
        let last = bytes.len() - 8;
        bytes[last..].copy_from_slice(&7.5f64.to_le_bytes());
        assert!(matches!(Network::from_bytes(&bytes), Err(Error::BadState(_))));
    }
}
