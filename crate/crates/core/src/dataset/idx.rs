//! IDX container parsing.
//!
//! ```text
//! bytes 0-3   magic, big-endian: 0x00000801 (u8 vector) or 0x00000803 (u8 rank-3)
//! bytes 4..   one big-endian u32 per dimension
//! payload     product(dims) unsigned bytes, row-major
//! ```
//!
//! Files whose first two bytes are the gzip magic are inflated first.

use std::fs;
use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::IdxError;

pub const LABEL_MAGIC: u32 = 0x0000_0801;
pub const IMAGE_MAGIC: u32 = 0x0000_0803;

/// Raw unsigned-byte tensor read from an IDX file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxTensor {
    pub magic: u32,
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

impl IdxTensor {
    pub fn len(&self) -> usize {
        self.dims.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Size of one item (product of the trailing dimensions).
    pub fn item_size(&self) -> usize {
        self.dims.iter().skip(1).product()
    }

    pub fn item(&self, i: usize) -> &[u8] {
        let n = self.item_size();
        &self.data[i * n..(i + 1) * n]
    }
}

pub fn load_idx(path: &Path) -> Result<IdxTensor, IdxError> {
    let raw = fs::read(path).map_err(|source| IdxError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bytes = if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|source| IdxError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        out
    } else {
        raw
    };
    parse_idx(&bytes, path)
}

/// Parses an in-memory IDX file. `path` only labels diagnostics.
pub fn parse_idx(bytes: &[u8], path: &Path) -> Result<IdxTensor, IdxError> {
    let truncated = |expected: usize| IdxError::Truncated {
        path: path.to_path_buf(),
        expected,
        found: bytes.len(),
    };
    if bytes.len() < 4 {
        return Err(truncated(4));
    }
    let magic = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    let rank = match magic {
        LABEL_MAGIC => 1,
        IMAGE_MAGIC => 3,
        other => {
            return Err(IdxError::BadMagic {
                path: path.to_path_buf(),
                found: other,
                expected: if other & 0xff == 1 { LABEL_MAGIC } else { IMAGE_MAGIC },
            })
        }
    };
    let header = 4 + 4 * rank;
    if bytes.len() < header {
        return Err(truncated(header));
    }
    let dims: Vec<usize> = bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let payload: usize = dims.iter().product();
    let expected = header + payload;
    if bytes.len() < expected {
        return Err(IdxError::Truncated {
            path: path.to_path_buf(),
            expected: payload,
            found: bytes.len() - header,
        });
    }
    if bytes.len() > expected {
        return Err(IdxError::DimensionMismatch {
            path: path.to_path_buf(),
            detail: format!(
                "dimensions {dims:?} account for {payload} payload bytes but the file holds {}",
                bytes.len() - header
            ),
        });
    }
    Ok(IdxTensor {
        magic,
        dims,
        data: bytes[header..].to_vec(),
    })
}

/// Serializes a tensor back to IDX (uncompressed). Used for fixtures.
pub fn encode_idx(tensor: &IdxTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + 4 * tensor.dims.len() + tensor.data.len());
    out.extend_from_slice(&tensor.magic.to_be_bytes());
    for &d in &tensor.dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    out.extend_from_slice(&tensor.data);
    out
}
