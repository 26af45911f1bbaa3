//! Binary prime cache.
//!
//! Layout, all little-endian: `"PGDS"`, version byte, `u64` X, `u64` prime
//! count, the first prime as `u64`, then one `u16` half-gap per remaining
//! prime. The single odd gap `3 − 2` is written as half-gap 0.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{PrimeDataset, SieveOptions};

pub const CACHE_MAGIC: &[u8; 4] = b"PGDS";
pub const CACHE_VERSION: u8 = 0x01;
const HEADER_LEN: usize = 4 + 1 + 8 + 8 + 8;

pub fn encode_primes(limit: u64, primes: &[u64]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(HEADER_LEN + 2 * primes.len());
    out.extend_from_slice(CACHE_MAGIC);
    out.push(CACHE_VERSION);
    out.extend_from_slice(&limit.to_le_bytes());
    out.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    let Some(&first) = primes.first() else {
        return Err(Error::Cache("no primes to encode".into()));
    };
    out.extend_from_slice(&first.to_le_bytes());
    for w in primes.windows(2) {
        let gap = w[1] - w[0];
        let half = match gap {
            1 => 0,
            g if g % 2 == 0 && g / 2 <= u16::MAX as u64 => (g / 2) as u16,
            g => return Err(Error::Cache(format!("gap {g} after {} cannot be encoded", w[0]))),
        };
        out.extend_from_slice(&half.to_le_bytes());
    }
    Ok(out)
}

/// Returns `(X, primes)` after validating the header and contents.
pub fn decode_primes(bytes: &[u8]) -> Result<(u64, Vec<u64>)> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if bytes[4] != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {}", bytes[4])));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let limit = word(5);
    let count = word(13);
    let first = word(21);
    let body = &bytes[HEADER_LEN..];
    if count == 0 || body.len() as u64 != 2 * (count - 1) {
        return Err(Error::Cache(format!("expected {count} primes, payload has {} bytes", body.len())));
    }
    let mut primes = Vec::with_capacity(count as usize);
    let mut p = first;
    primes.push(p);
    for chunk in body.chunks_exact(2) {
        let half = u16::from_le_bytes([chunk[0], chunk[1]]) as u64;
        p = match half {
            0 if p == 2 => 3,
            0 => return Err(Error::Cache(format!("zero gap after {p}"))),
            h => p.checked_add(2 * h).ok_or_else(|| Error::Cache("prime overflow".into()))?,
        };
        primes.push(p);
    }
    if p > limit {
        return Err(Error::Cache(format!("last prime {p} exceeds X = {limit}")));
    }
    Ok((limit, primes))
}

impl PrimeDataset {
    /// Writes the primes `≤ X`; the extension is re-sieved on load.
    pub fn save(&self, path: &Path) -> Result<()> {
        let bytes = encode_primes(self.limit(), self.primes())?;
        std::fs::File::create(path)?.write_all(&bytes)?;
        Ok(())
    }

    pub fn load(path: &Path, opts: &SieveOptions) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let (limit, primes) = decode_primes(&bytes)?;
        PrimeDataset::from_primes(limit, primes, opts)
    }
}
